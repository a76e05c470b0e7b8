"""Discriminant scoring and channel ranking from pairwise similarities.

For each channel: z-score every trial, build the pairwise similarity
matrix, average it into a within-class similarity ``r_w`` and a negated
between-class mean ``r_b``, and combine them as
``d = lam * r_w + (1 - lam) * r_b``. Channels are ranked by ``d``
descending, ties broken by ascending channel index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import ChannelRanking, EpochedDataset, rank_by_scores
from .preprocess import ZSCORE_TOL
from .xcorr import SimilarityMatrix, pairwise_similarity, pairwise_similarity_naive


@dataclass(frozen=True)
class ChannelDiscriminant:
    r_w: float
    r_b: float
    d: float
    degenerate: bool = False


@dataclass(frozen=True)
class DiscriminantResult:
    per_channel: tuple[ChannelDiscriminant, ...]
    lam: float

    def __post_init__(self):
        if not 0 <= self.lam <= 1:
            raise ValueError("lambda must be in [0, 1]")


def within_between(sim: SimilarityMatrix, labels) -> tuple[float, float]:
    """Mean similarity over same-label pairs and negated mean over cross pairs.

    Only unordered off-diagonal pairs count. Raises if either pair set is
    empty.
    """
    labels = np.asarray(labels)
    v = sim.values
    n = v.shape[0]
    if labels.size != n:
        raise ValueError("labels length must match matrix size")
    iu, ju = np.triu_indices(n, k=1)
    same = labels[iu] == labels[ju]
    if not same.any():
        raise ValueError("no within-class pair exists")
    if same.all():
        raise ValueError("no between-class pair exists")
    pairs = v[iu, ju]
    r_w = float(pairs[same].mean())
    r_b = float(-pairs[~same].mean())
    return r_w, r_b


def discriminant_score(r_w: float, r_b: float, lam: float) -> float:
    if not 0 <= lam <= 1:
        raise ValueError("lambda must be in [0, 1]")
    return lam * r_w + (1 - lam) * r_b


def trial_zscore(trials) -> np.ndarray:
    """Per-trial z-score (population std) of an (N, T) array.

    Raises if any trial is (near-)constant; callers that tolerate degenerate
    channels must check first.
    """
    x = np.asarray(trials, dtype=np.float64)
    centered = x - x.mean(axis=1, keepdims=True)
    centered -= centered.mean(axis=1, keepdims=True)
    sd = centered.std(axis=1, keepdims=True)
    if np.any(sd <= ZSCORE_TOL):
        raise ValueError("constant trial cannot be z-scored")
    return centered / sd


def channel_discriminants(
    dataset: EpochedDataset,
    lam: float,
    split: str = "train",
    max_lag: int | None = None,
    threads: int = 1,
    naive: bool = False,
) -> DiscriminantResult:
    """Compute (r_w, r_b, d) for every channel on one split.

    A channel containing a (near-)constant trial cannot be z-scored; it is
    marked degenerate and scored -inf instead of aborting the run.
    """
    if not 0 <= lam <= 1:
        raise ValueError("lambda must be in [0, 1]")
    sub = dataset.subset(split)
    data = sub.stacked()  # (N, C, T)
    labels = sub.labels
    records = []
    for c in range(sub.n_channels):
        x = data[:, c, :]
        if np.any(x.std(axis=1) <= ZSCORE_TOL):
            records.append(
                ChannelDiscriminant(np.nan, np.nan, -np.inf, degenerate=True)
            )
            continue
        z = trial_zscore(x)
        if naive:
            sim = pairwise_similarity_naive(z, channel=c, max_lag=max_lag)
        else:
            sim = pairwise_similarity(z, channel=c, max_lag=max_lag, threads=threads)
        r_w, r_b = within_between(sim, labels)
        records.append(
            ChannelDiscriminant(r_w, r_b, discriminant_score(r_w, r_b, lam))
        )
    return DiscriminantResult(per_channel=tuple(records), lam=lam)


def rank_channels(
    dataset: EpochedDataset,
    lam: float,
    split: str = "train",
    max_lag: int | None = None,
    threads: int = 1,
) -> tuple[ChannelRanking, DiscriminantResult]:
    """Rank channels by discriminant score, descending."""
    result = channel_discriminants(
        dataset, lam, split=split, max_lag=max_lag, threads=threads
    )
    scores = np.array([rec.d for rec in result.per_channel])
    return rank_by_scores(scores, method="xcdc"), result


def _stratified_folds(labels: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """Fold id per trial, class-stratified, from a seeded shuffle."""
    if folds < 2:
        raise ValueError("need at least 2 folds")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(labels.size, dtype=int)
    for cls in np.unique(labels):
        idx = np.nonzero(labels == cls)[0]
        if idx.size < folds:
            raise ValueError(
                f"class {cls} has {idx.size} trials, fewer than {folds} folds"
            )
        rng.shuffle(idx)
        fold_of[idx] = np.arange(idx.size) % folds
    return fold_of


def select_lambda_cv(
    dataset: EpochedDataset,
    folds: int = 10,
    grid=None,
    top_k: int = 3,
    seed: int = 0,
    max_lag: int | None = None,
    threads: int = 1,
) -> float:
    """Pick lambda by stratified cross-validation on the training split.

    For each fold the per-channel (r_w, r_b) pairs are computed once on the
    fold-training trials; every lambda on the grid then reuses them (d is
    affine in lambda), ranks channels, trains the evaluation classifier on
    the top_k channels and scores the held-out fold. Returns the lambda with
    the best mean fold accuracy, ties going to the smaller value.
    """
    from .classify import fit_classifier  # local import, avoids cycle

    if grid is None:
        grid = np.round(np.arange(0.0, 1.0 + 1e-9, 0.1), 10)
    grid = sorted(float(g) for g in grid)
    if not grid:
        raise ValueError("lambda grid must be non-empty")
    for g in grid:
        if not 0 <= g <= 1:
            raise ValueError("grid values must lie in [0, 1]")
    if len(grid) == 1:
        return grid[0]
    if top_k < 1:
        raise ValueError("top_k must be >= 1")

    train = dataset.subset("train")
    labels = train.labels
    fold_of = _stratified_folds(labels, folds, seed)

    mean_acc = {g: 0.0 for g in grid}
    for fold in range(folds):
        fit_idx = np.nonzero(fold_of != fold)[0]
        val_idx = np.nonzero(fold_of == fold)[0]
        fit_set = train.select_trials(fit_idx)
        base = channel_discriminants(
            fit_set, 0.0, split="train", max_lag=max_lag, threads=threads
        )
        r_w = np.array([rec.r_w for rec in base.per_channel])
        r_b = np.array([rec.r_b for rec in base.per_channel])
        degenerate = np.array([rec.degenerate for rec in base.per_channel])
        fit_data = fit_set.stacked()
        fit_labels = fit_set.labels
        val_data = train.stacked()[val_idx]
        val_labels = labels[val_idx]
        for g in grid:
            d = g * r_w + (1 - g) * r_b
            d[degenerate] = -np.inf
            ranking = rank_by_scores(d, method="xcdc")
            top = ranking.top(min(top_k, ranking.n_channels))
            model = fit_classifier(fit_data[:, top, :], fit_labels)
            pred = model.predict(val_data[:, top, :])
            mean_acc[g] += float(np.mean(pred == val_labels)) / folds

    best = grid[0]
    for g in grid[1:]:
        if mean_acc[g] > mean_acc[best]:
            best = g
    return best
