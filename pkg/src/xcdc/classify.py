"""Evaluation classifier and the top-k accuracy / minimal-subset protocol.

The classifier is a deterministic CSP + linear-discriminant pipeline: CSP
filters from both ends of the eigenvalue spectrum, log-variance features,
and a two-class LDA with pooled covariance. With a single channel the lone
feature is that channel's log-variance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .baselines import class_covariances, csp_from_covariances
from .dataset import ChannelRanking, EpochedDataset

VAR_FLOOR = 1e-30  # guards log() on a dead filter output


@dataclass(frozen=True)
class ClassifierModel:
    filters: np.ndarray | None  # (F, C) spatial filters; None for 1 channel
    weights: np.ndarray
    bias: float
    classes: tuple[int, int]

    @property
    def n_features(self) -> int:
        return self.weights.size

    def features(self, data: np.ndarray) -> np.ndarray:
        data = np.asarray(data, dtype=np.float64)
        if data.ndim == 2:
            data = data[None]
        if self.filters is not None:
            projected = np.einsum("fc,nct->nft", self.filters, data)
        else:
            projected = data
        var = projected.var(axis=2)
        return np.log(np.maximum(var, VAR_FLOOR))

    def predict(self, data: np.ndarray) -> np.ndarray:
        feats = self.features(data)
        score = feats @ self.weights + self.bias
        return np.where(score > 0, self.classes[1], self.classes[0])


def _lda(features: np.ndarray, labels: np.ndarray, classes) -> tuple[np.ndarray, float]:
    """Two-class LDA with pooled covariance; pseudo-inverse fallback."""
    f0 = features[labels == classes[0]]
    f1 = features[labels == classes[1]]
    m0, m1 = f0.mean(axis=0), f1.mean(axis=0)
    n0, n1 = len(f0), len(f1)
    pooled = (
        (f0 - m0).T @ (f0 - m0) + (f1 - m1).T @ (f1 - m1)
    ) / (n0 + n1 - 2)
    diff = m1 - m0
    try:
        w = np.linalg.solve(pooled, diff)
        if not np.all(np.isfinite(w)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        w = np.linalg.pinv(pooled) @ diff
    bias = -0.5 * (m0 + m1) @ w + np.log(n1 / n0)
    return w, float(bias)


def fit_classifier(data, labels) -> ClassifierModel:
    """Train the CSP + LDA pipeline on (N, k, T) trials with binary labels."""
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 3:
        raise ValueError("training data must be (trials, channels, samples)")
    labels = np.asarray(labels)
    classes = np.unique(labels)
    if classes.size != 2:
        raise ValueError(f"classifier needs exactly 2 classes, got {classes.size}")
    for cls in classes:
        if np.sum(labels == cls) < 2:
            raise ValueError(f"class {cls} has fewer than 2 training trials")
    k = data.shape[1]
    if k >= 2:
        cov_a, cov_b, class_order = class_covariances(data, labels)
        csp = csp_from_covariances(cov_a, cov_b, class_order)
        n_pairs = min(3, k // 2)
        picked = list(range(n_pairs)) + list(range(k - n_pairs, k))
        filters = csp.filters[picked]
    else:
        filters = None
    tmp = ClassifierModel(
        filters=filters, weights=np.zeros(1), bias=0.0,
        classes=(int(classes[0]), int(classes[1])),
    )
    feats = tmp.features(data)
    w, b = _lda(feats, labels, classes)
    return ClassifierModel(
        filters=filters, weights=w, bias=b,
        classes=(int(classes[0]), int(classes[1])),
    )


def train_classifier(dataset: EpochedDataset, split: str = "train") -> ClassifierModel:
    """Train on one split of a dataset already restricted to chosen channels."""
    sub = dataset.subset(split)
    return fit_classifier(sub.stacked(), sub.labels)


@dataclass(frozen=True)
class AccuracyCurve:
    """Test accuracy per channel count k plus the all-channel reference."""

    ks: tuple[int, ...]
    accuracies: tuple[float, ...]
    reference: float
    seed: int = 0

    def __post_init__(self):
        if len(self.ks) != len(self.accuracies):
            raise ValueError("ks and accuracies must align")
        if len(self.ks) == 0:
            raise ValueError("curve must be non-empty")
        if any(b <= a for a, b in zip(self.ks, self.ks[1:])):
            raise ValueError("ks must be strictly increasing")
        for a in self.accuracies:
            if not 0 <= a <= 1:
                raise ValueError("accuracies must lie in [0, 1]")


@dataclass(frozen=True)
class MinimalSubsetReport:
    k_m: int
    constraint_d: float
    admissible: tuple[int, ...]
    channels: tuple[int, ...]


def default_ks(n_channels: int) -> tuple[int, ...]:
    """1..C for small layouts, then a logarithmic schedule above 20."""
    if n_channels < 20:
        return tuple(range(1, n_channels + 1))
    ks = set(range(1, 21))
    k = 20.0
    while k < n_channels:
        k *= 1.25
        ks.add(min(round(k), n_channels))
    ks.add(n_channels)
    return tuple(sorted(ks))


def _split_accuracy(dataset: EpochedDataset, channels) -> float:
    restricted = dataset.select_channels(channels)
    model = train_classifier(restricted, "train")
    test = restricted.subset("test")
    pred = model.predict(test.stacked())
    return float(np.mean(pred == test.labels))


def accuracy_curve(
    dataset: EpochedDataset,
    ranking: ChannelRanking,
    ks=None,
    seed: int = 0,
) -> AccuracyCurve:
    """Train on the train split and score the test split for each top-k setup.

    The reference accuracy is always the all-channel (k = C) result, even
    when C is not among the evaluated ks.
    """
    c = dataset.n_channels
    if ranking.n_channels != c:
        raise ValueError("ranking does not match dataset channel count")
    if ks is None:
        ks = default_ks(c)
    ks = tuple(int(k) for k in ks)
    for k in ks:
        if not 1 <= k <= c:
            raise ValueError(f"k={k} outside [1, {c}]")
    reference = _split_accuracy(dataset, list(range(c)))
    accs = []
    for k in ks:
        if k == c:
            accs.append(reference)
        else:
            accs.append(_split_accuracy(dataset, ranking.top(k)))
    return AccuracyCurve(ks=ks, accuracies=tuple(accs), reference=reference, seed=seed)


def minimal_subset(
    curve: AccuracyCurve,
    reference: float,
    d: float,
    ranking: ChannelRanking | None = None,
) -> MinimalSubsetReport:
    """Smallest k whose accuracy stays within a relative decrease d.

    Admissible counts are ``{k : a_k >= reference * (1 - d)}``. When a
    ranking is supplied the report lists the k_m selected channel indices.
    """
    if not 0 <= d <= 1:
        raise ValueError("d must be in [0, 1]")
    threshold = reference * (1 - d)
    admissible = tuple(
        k for k, a in zip(curve.ks, curve.accuracies) if a >= threshold
    )
    if not admissible:
        raise ValueError("no channel count satisfies the accuracy constraint")
    k_m = min(admissible)
    channels = tuple(int(c) for c in ranking.top(k_m)) if ranking is not None else ()
    return MinimalSubsetReport(
        k_m=k_m, constraint_d=d, admissible=admissible, channels=channels
    )
