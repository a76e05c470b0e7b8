"""Seeded synthetic dataset generator with planted informative channels.

Uninformative channels are white noise. Informative channels add a sinusoid
whose amplitude depends on the class (larger for class 0, smaller for class
1), with an independent random phase per trial and channel, so a lag-aware
similarity is required to detect them. Ground truth makes the generator the
oracle for ranking tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import ChannelLayout, EpochedDataset, Trial

# Carrier-to-noise power ratio. Kept below 1 on purpose: a single planted
# channel must not be trivially sufficient for classification, otherwise
# subset-size comparisons between rankers degenerate.
CARRIER_POWER_RATIO = 0.1


@dataclass(frozen=True)
class SynthConfig:
    n_channels: int = 16
    informative: tuple[int, ...] = (2, 7, 11)
    n_trials_per_class: int = 150
    t_samples: int = 400
    fs: float = 100.0
    carrier_hz: float = 10.0
    modulation_depth: float = 0.5
    noise_sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "informative", tuple(sorted(set(self.informative))))
        if self.n_channels < 1 or self.t_samples < 2:
            raise ValueError("need n_channels >= 1 and t_samples >= 2")
        if any(not 0 <= ch < self.n_channels for ch in self.informative):
            raise ValueError("informative channel index out of range")
        if not 0 < self.modulation_depth <= 1:
            raise ValueError("modulation_depth must be in (0, 1]")
        if self.noise_sigma <= 0:
            raise ValueError("noise_sigma must be positive")
        if self.n_trials_per_class < 1:
            raise ValueError("need at least 1 trial per class")
        if self.fs <= 0 or self.carrier_hz <= 0:
            raise ValueError("fs and carrier_hz must be positive")


def grid_layout(n_channels: int) -> ChannelLayout:
    """Channels on a regular grid inside [-0.8, 0.8]^2."""
    cols = max(1, math.ceil(math.sqrt(n_channels)))
    rows = math.ceil(n_channels / cols)
    positions = []
    for i in range(n_channels):
        r, c = divmod(i, cols)
        x = -0.8 + 1.6 * c / max(cols - 1, 1)
        y = 0.8 - 1.6 * r / max(rows - 1, 1)
        positions.append((x, y))
    names = tuple(f"ch{i:02d}" for i in range(n_channels))
    return ChannelLayout(names=names, positions=np.array(positions))


def _split_sizes(n: int) -> tuple[int, int, int]:
    """70/10/20 train/validation/test, each within one trial of exact."""
    n_test = round(0.2 * n)
    n_val = round(0.1 * n)
    return n - n_val - n_test, n_val, n_test


def generate_synthetic(config: SynthConfig) -> EpochedDataset:
    """Build a two-class dataset fully determined by ``config.seed``.

    Generation order is fixed: for class 0 then class 1, trial by trial,
    first the noise matrix then one carrier phase per channel. Samples are
    rounded through float32 so the dataset round-trips the on-disk format
    bit-exactly.
    """
    rng = np.random.default_rng(config.seed)
    c, t = config.n_channels, config.t_samples
    time = np.arange(t) / config.fs
    base_amp = config.noise_sigma * math.sqrt(2 * CARRIER_POWER_RATIO)
    informative = np.array(config.informative, dtype=int)

    trials = []
    for label, depth_sign in ((0, 1.0), (1, -1.0)):
        amp = base_amp * (1 + depth_sign * config.modulation_depth)
        n_train, n_val, _ = _split_sizes(config.n_trials_per_class)
        for i in range(config.n_trials_per_class):
            data = rng.normal(0.0, config.noise_sigma, size=(c, t))
            phases = rng.uniform(0.0, 2 * np.pi, size=c)
            for ch in informative:
                data[ch] += amp * np.sin(
                    2 * np.pi * config.carrier_hz * time + phases[ch]
                )
            if i < n_train:
                split = "train"
            elif i < n_train + n_val:
                split = "validation"
            else:
                split = "test"
            trials.append(
                Trial(
                    data=data.astype(np.float32).astype(np.float64),
                    label=label,
                    split=split,
                )
            )
    return EpochedDataset(
        trials=tuple(trials),
        fs=config.fs,
        layout=grid_layout(c),
        class_names=("class0", "class1"),
    )
