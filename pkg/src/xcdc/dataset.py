"""Core domain types and the on-disk dataset format.

A dataset is a directory with three files:

* ``meta.json`` -- ``{"fs_hz": float, "n_samples": int, "classes": [...],
  "channels": [{"name": str, "x": float, "y": float}, ...]}``
* ``trials.f32le`` -- ``N*C*T`` little-endian float32 samples, trial-major,
  then channel-major, then time.
* ``labels.csv`` -- header ``trial,label,split``, one row per trial in blob
  order; ``split`` is one of ``train``, ``validation``, ``test``.

Samples are stored as float32; all computation downstream runs in float64.
``load_dataset(save_dataset(d))`` reproduces ``d`` bit-exactly provided the
samples of ``d`` are representable in float32 (true for anything that came
out of :func:`load_dataset` or the synthetic generator).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SPLITS = ("train", "validation", "test")


@dataclass(frozen=True)
class ChannelLayout:
    """Channel names and 2-D scalp coordinates in a normalized head frame."""

    names: tuple[str, ...]
    positions: np.ndarray  # shape (C, 2)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        object.__setattr__(self, "positions", pos)
        if pos.ndim != 2 or pos.shape != (len(self.names), 2):
            raise ValueError("positions must have shape (C, 2) matching names")
        if len(set(self.names)) != len(self.names):
            raise ValueError("channel names must be unique")
        if not np.all(np.isfinite(pos)):
            raise ValueError("channel coordinates must be finite")

    def __len__(self) -> int:
        return len(self.names)

    def subset(self, indices) -> "ChannelLayout":
        indices = list(indices)
        return ChannelLayout(
            names=tuple(self.names[i] for i in indices),
            positions=self.positions[indices],
        )

    def __eq__(self, other):
        if not isinstance(other, ChannelLayout):
            return NotImplemented
        return self.names == other.names and np.array_equal(
            self.positions, other.positions
        )


@dataclass(frozen=True)
class Trial:
    """One epoch: a C x T sample matrix with a class label and a split tag."""

    data: np.ndarray  # shape (C, T)
    label: int
    split: str

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        object.__setattr__(self, "data", data)
        if data.ndim != 2:
            raise ValueError("trial data must be a 2-D (channels x time) array")
        if data.shape[1] < 2:
            raise ValueError("trials need at least 2 samples")
        if self.split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}, got {self.split!r}")
        if self.label < 0:
            raise ValueError("label must be a non-negative class index")

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class EpochedDataset:
    """N labelled trials sharing one channel layout and sampling rate."""

    trials: tuple[Trial, ...]
    fs: float
    layout: ChannelLayout
    class_names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "trials", tuple(self.trials))
        object.__setattr__(self, "class_names", tuple(self.class_names))
        if len(self.trials) < 2:
            raise ValueError("a dataset needs at least 2 trials")
        if len(self.class_names) < 2:
            raise ValueError("a dataset needs at least 2 classes")
        if self.fs <= 0:
            raise ValueError("sampling rate must be positive")
        c = len(self.layout)
        t = self.trials[0].n_samples
        for i, tr in enumerate(self.trials):
            if tr.n_channels != c:
                raise ValueError(f"trial {i} has {tr.n_channels} channels, expected {c}")
            if tr.n_samples != t:
                raise ValueError(f"trial {i} has {tr.n_samples} samples, expected {t}")
            if tr.label >= len(self.class_names):
                raise ValueError(f"trial {i} label {tr.label} >= class count")

    @property
    def n_trials(self) -> int:
        return len(self.trials)

    @property
    def n_channels(self) -> int:
        return len(self.layout)

    @property
    def n_samples(self) -> int:
        return self.trials[0].n_samples

    @property
    def labels(self) -> np.ndarray:
        return np.array([tr.label for tr in self.trials], dtype=int)

    @property
    def splits(self) -> tuple[str, ...]:
        return tuple(tr.split for tr in self.trials)

    def stacked(self) -> np.ndarray:
        """All trials as one (N, C, T) float64 array."""
        return np.stack([tr.data for tr in self.trials])

    def subset(self, split: str) -> "EpochedDataset":
        if split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}, got {split!r}")
        kept = tuple(tr for tr in self.trials if tr.split == split)
        if len(kept) < 2:
            raise ValueError(f"split {split!r} has fewer than 2 trials")
        return EpochedDataset(kept, self.fs, self.layout, self.class_names)

    def select_trials(self, indices) -> "EpochedDataset":
        kept = tuple(self.trials[i] for i in indices)
        return EpochedDataset(kept, self.fs, self.layout, self.class_names)

    def select_channels(self, indices) -> "EpochedDataset":
        indices = list(indices)
        kept = tuple(
            Trial(tr.data[indices], tr.label, tr.split) for tr in self.trials
        )
        return EpochedDataset(kept, self.fs, self.layout.subset(indices), self.class_names)

    def __eq__(self, other):
        if not isinstance(other, EpochedDataset):
            return NotImplemented
        if (
            self.fs != other.fs
            or self.class_names != other.class_names
            or self.layout != other.layout
            or len(self.trials) != len(other.trials)
        ):
            return False
        return all(
            a.label == b.label
            and a.split == b.split
            and np.array_equal(a.data, b.data)
            for a, b in zip(self.trials, other.trials)
        )


RANKING_METHODS = ("xcdc", "ccs", "csp-rank", "random")


@dataclass(frozen=True)
class ChannelRanking:
    """A permutation of channel indices in descending score order.

    ``scores`` is aligned to *original* channel indices; ``order[0]`` is the
    best channel. Ties in score are broken by ascending original index.
    """

    order: np.ndarray
    scores: np.ndarray
    method: str

    def __post_init__(self):
        order = np.asarray(self.order, dtype=int)
        scores = np.asarray(self.scores, dtype=float)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "scores", scores)
        c = order.size
        if scores.size != c:
            raise ValueError("order and scores must have equal length")
        if sorted(order.tolist()) != list(range(c)):
            raise ValueError("order is not a permutation of channel indices")
        along = scores[order]
        if np.any(np.diff(along) > 0):
            raise ValueError("scores must be non-increasing along order")
        for a, b in zip(order[:-1], order[1:]):
            if scores[a] == scores[b] and a > b:
                raise ValueError("score ties must be broken by ascending index")
        if self.method not in RANKING_METHODS:
            raise ValueError(f"unknown ranking method {self.method!r}")

    @property
    def n_channels(self) -> int:
        return self.order.size

    def top(self, k: int) -> np.ndarray:
        if not 1 <= k <= self.n_channels:
            raise ValueError(f"k must be in [1, {self.n_channels}]")
        return self.order[:k]


def rank_by_scores(scores, method: str) -> ChannelRanking:
    """Build a ranking from per-channel scores, descending, ties by index."""
    scores = np.asarray(scores, dtype=float)
    order = np.lexsort((np.arange(scores.size), -scores))
    return ChannelRanking(order=order, scores=scores, method=method)


def save_dataset(dataset: EpochedDataset, path) -> None:
    """Write a dataset directory (meta.json, trials.f32le, labels.csv)."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    meta = {
        "fs_hz": dataset.fs,
        "n_samples": dataset.n_samples,
        "classes": list(dataset.class_names),
        "channels": [
            {"name": n, "x": float(x), "y": float(y)}
            for n, (x, y) in zip(dataset.layout.names, dataset.layout.positions)
        ],
    }
    with open(path / "meta.json", "w") as f:
        json.dump(meta, f, indent=2)
        f.write("\n")
    blob = dataset.stacked().astype("<f4")
    blob.tofile(path / "trials.f32le")
    with open(path / "labels.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["trial", "label", "split"])
        for i, tr in enumerate(dataset.trials):
            w.writerow([i, tr.label, tr.split])


def load_dataset(path) -> EpochedDataset:
    """Read a dataset directory written by :func:`save_dataset`."""
    path = Path(path)
    meta_path = path / "meta.json"
    blob_path = path / "trials.f32le"
    labels_path = path / "labels.csv"
    for p in (meta_path, blob_path, labels_path):
        if not p.is_file():
            raise FileNotFoundError(f"missing dataset file: {p}")
    with open(meta_path) as f:
        meta = json.load(f)
    fs = float(meta["fs_hz"])
    t = int(meta["n_samples"])
    class_names = tuple(str(c) for c in meta["classes"])
    layout = ChannelLayout(
        names=tuple(ch["name"] for ch in meta["channels"]),
        positions=np.array([[ch["x"], ch["y"]] for ch in meta["channels"]]),
    )
    c = len(layout)

    rows = []
    with open(labels_path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != ["trial", "label", "split"]:
            raise ValueError("labels.csv must have header trial,label,split")
        for row in reader:
            rows.append((int(row["trial"]), int(row["label"]), row["split"]))
    n = len(rows)
    if [r[0] for r in rows] != list(range(n)):
        raise ValueError("labels.csv trial indices must be 0..N-1 in order")

    raw = np.fromfile(blob_path, dtype="<f4")
    if raw.size != n * c * t:
        raise ValueError(
            f"trials.f32le holds {raw.size} samples, expected N*C*T = {n * c * t}"
        )
    if not np.all(np.isfinite(raw)):
        raise ValueError("trials.f32le contains non-finite samples")
    data = raw.astype(np.float64).reshape(n, c, t)

    trials = []
    for i, (_, label, split) in enumerate(rows):
        if label >= len(class_names):
            raise ValueError(f"trial {i} label {label} >= class count")
        trials.append(Trial(data=data[i], label=label, split=split))
    return EpochedDataset(tuple(trials), fs, layout, class_names)
