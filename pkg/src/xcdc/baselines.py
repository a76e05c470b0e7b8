"""Comparison rankers: Pearson-correlation CCS and CSP coefficient ranking.

Both run on the training split only, mirroring the main ranker. The CSP
decomposition here is also what the evaluation classifier uses for its
spatial filters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dataset import ChannelRanking, EpochedDataset, rank_by_scores

RIDGE_SCALE = 1e-9


@dataclass(frozen=True)
class CspModel:
    """Spatial filters from a two-class generalized eigendecomposition.

    Rows of ``filters`` are filters w sorted by eigenvalue descending;
    eigenvalue mu is the share of the composite-whitened variance explained
    by ``class_order[0]``, so mu near 1 favors that class and mu near 0
    favors ``class_order[1]``. ``W (C1 + C2) W^T = I`` holds by
    construction.
    """

    filters: np.ndarray
    eigenvalues: np.ndarray
    class_order: tuple[int, int]


def trial_covariance(x: np.ndarray) -> np.ndarray:
    """Trace-normalized spatial covariance of one (C, T) trial."""
    cov = x @ x.T
    tr = np.trace(cov)
    if tr <= 0:
        raise ValueError("trial has zero power; cannot form covariance")
    return cov / tr


def class_covariances(data: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray, tuple[int, int]]:
    """Average trace-normalized covariances per class for binary labels."""
    classes = np.unique(labels)
    if classes.size != 2:
        raise ValueError(f"CSP needs exactly 2 classes, got {classes.size}")
    covs = []
    for cls in classes:
        idx = np.nonzero(labels == cls)[0]
        if idx.size < 2:
            raise ValueError(f"class {cls} has fewer than 2 trials")
        acc = np.zeros((data.shape[1], data.shape[1]))
        for i in idx:
            acc += trial_covariance(data[i])
        covs.append(acc / idx.size)
    return covs[0], covs[1], (int(classes[0]), int(classes[1]))


def csp_from_covariances(
    cov_a: np.ndarray, cov_b: np.ndarray, class_order: tuple[int, int] = (0, 1)
) -> CspModel:
    """Solve ``cov_a w = mu (cov_a + cov_b) w`` via composite whitening."""
    c = cov_a.shape[0]
    ridge_a = RIDGE_SCALE * np.trace(cov_a) / c
    ridge_b = RIDGE_SCALE * np.trace(cov_b) / c
    cov_a = cov_a + ridge_a * np.eye(c)
    cov_b = cov_b + ridge_b * np.eye(c)
    composite = cov_a + cov_b

    evals, evecs = scipy.linalg.eigh(composite)
    if evals[0] <= evals[-1] * 1e-10 or evals[0] <= 0:
        raise ValueError("composite covariance is rank deficient")
    whiten = (evecs / np.sqrt(evals)).T  # P such that P composite P^T = I
    s = whiten @ cov_a @ whiten.T
    s = (s + s.T) / 2
    mu, v = scipy.linalg.eigh(s)
    order = np.argsort(mu)[::-1]
    mu = np.clip(mu[order], 0.0, 1.0)
    filters = (v[:, order].T @ whiten)
    return CspModel(filters=filters, eigenvalues=mu, class_order=class_order)


def csp_fit(dataset: EpochedDataset, split: str = "train") -> CspModel:
    """Fit CSP filters on one split of a binary dataset."""
    sub = dataset.subset(split)
    data = sub.stacked()
    cov_a, cov_b, class_order = class_covariances(data, sub.labels)
    return csp_from_covariances(cov_a, cov_b, class_order)


def csp_rank(dataset: EpochedDataset, split: str = "train") -> ChannelRanking:
    """Rank channels by CSP coefficient magnitude, visiting filters ends-first.

    Filters are visited largest-mu, smallest-mu, 2nd largest, 2nd smallest,
    and so on; each contributes the not-yet-selected channel with the
    largest absolute coefficient.
    """
    model = csp_fit(dataset, split)
    c = model.filters.shape[0]
    visit = []
    lo, hi = 0, c - 1
    while lo <= hi:
        visit.append(lo)
        if hi != lo:
            visit.append(hi)
        lo += 1
        hi -= 1
    selected: list[int] = []
    taken = np.zeros(c, dtype=bool)
    for f in visit:
        coefs = np.abs(model.filters[f])
        for ch in np.argsort(-coefs, kind="stable"):
            if not taken[ch]:
                selected.append(int(ch))
                taken[ch] = True
                break
    order = np.array(selected)
    scores = np.empty(c)
    scores[order] = np.arange(c, 0, -1, dtype=float)
    return ChannelRanking(order=order, scores=scores, method="csp-rank")


def ccs_rank(dataset: EpochedDataset, split: str = "train") -> ChannelRanking:
    """Rank channels by mean absolute Pearson correlation to other channels.

    Per trial, the C x C correlation matrix of channel waveforms is formed;
    a channel's score is the mean over trials of its mean absolute
    off-diagonal row entry. Constant channels within a trial get correlation
    0 for that trial.
    """
    sub = dataset.subset(split)
    c = sub.n_channels
    if c < 2:
        raise ValueError("CCS needs at least 2 channels")
    data = sub.stacked()
    scores = np.zeros(c)
    off_diag = ~np.eye(c, dtype=bool)
    for x in data:
        sd = x.std(axis=1)
        ok = sd > 0
        corr = np.zeros((c, c))
        if ok.sum() >= 2:
            sub_corr = np.corrcoef(x[ok])
            corr[np.ix_(ok, ok)] = sub_corr
        scores += np.where(off_diag, np.abs(corr), 0.0).sum(axis=1) / (c - 1)
    scores /= sub.n_trials
    return rank_by_scores(scores, method="ccs")
