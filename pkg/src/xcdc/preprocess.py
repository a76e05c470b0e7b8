"""Signal conditioning: bandpass filter, downsample, crop, z-score.

The pipeline order is fixed: filter at the original rate, decimate, crop to
the analysis window, then z-score each channel over the whole dataset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .dataset import EpochedDataset, Trial

ZSCORE_TOL = 1e-12


@dataclass(frozen=True)
class BandpassSpec:
    low_hz: float
    high_hz: float
    order: int = 2
    zero_phase: bool = False

    def validate(self, fs: float) -> None:
        if self.order < 1:
            raise ValueError("filter order must be >= 1")
        if not 0 < self.low_hz < self.high_hz:
            raise ValueError("need 0 < low_hz < high_hz")
        if self.high_hz >= fs / 2:
            raise ValueError(
                f"high cutoff {self.high_hz} Hz >= Nyquist {fs / 2} Hz"
            )


def _design_sos(fs: float, spec: BandpassSpec) -> np.ndarray:
    # scipy designs via bilinear transform with frequency prewarping
    return signal.butter(
        spec.order, [spec.low_hz, spec.high_hz], btype="bandpass", fs=fs,
        output="sos",
    )


def butterworth_bandpass(x, fs: float, spec: BandpassSpec) -> np.ndarray:
    """Apply a digital Butterworth bandpass along the last axis.

    With ``zero_phase`` the filter runs forward then backward (squared
    magnitude response, no phase distortion). The causal path needs the
    input to be longer than the filter transient (a few cycles of the low
    cutoff) for the steady-state response to be meaningful; the zero-phase
    path requires T > ~6*(order+1) samples for its edge padding.
    """
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("filter input contains non-finite samples")
    spec.validate(fs)
    sos = _design_sos(fs, spec)
    if spec.zero_phase:
        return signal.sosfiltfilt(sos, x, axis=-1)
    return signal.sosfilt(sos, x, axis=-1)


def bandpass_gain(fs: float, spec: BandpassSpec, freq_hz: float) -> float:
    """Steady-state magnitude gain of the designed filter at one frequency."""
    spec.validate(fs)
    sos = _design_sos(fs, spec)
    _, h = signal.sosfreqz(sos, worN=[freq_hz], fs=fs)
    g = float(np.abs(h[0]))
    return g * g if spec.zero_phase else g


def decimate(x, factor: int) -> np.ndarray:
    """Keep every ``factor``-th sample along the last axis (phase 0).

    No anti-alias filtering is done here; the caller must have bandpassed
    below the new Nyquist already.
    """
    if factor < 1:
        raise ValueError("decimation factor must be >= 1")
    return np.asarray(x)[..., ::factor]


def crop(trial: Trial, fs: float, t0: float, t1: float) -> Trial:
    """Restrict a trial to the window [t0, t1) seconds."""
    data = crop_array(trial.data, fs, t0, t1)
    return Trial(data=data, label=trial.label, split=trial.split)


def crop_array(x, fs: float, t0: float, t1: float) -> np.ndarray:
    x = np.asarray(x)
    if not 0 <= t0 < t1:
        raise ValueError("need 0 <= t0 < t1")
    i0 = round(t0 * fs)
    i1 = round(t1 * fs)
    if i1 > x.shape[-1]:
        raise ValueError(
            f"window end sample {i1} beyond trial length {x.shape[-1]}"
        )
    if i1 <= i0:
        raise ValueError("window is empty after rounding")
    return x[..., i0:i1]


def zscore(x) -> np.ndarray:
    """Center to mean 0 and scale to unit population standard deviation.

    Centering runs twice so the residual mean stays at rounding level even
    for inputs with a large offset relative to their spread.
    """
    x = np.asarray(x, dtype=np.float64)
    centered = x - x.mean()
    centered -= centered.mean()
    sd = centered.std()
    if sd <= ZSCORE_TOL:
        raise ValueError("cannot z-score a (near-)constant signal")
    return centered / sd


def preprocess_dataset(
    dataset: EpochedDataset,
    band: BandpassSpec = BandpassSpec(0.1, 30.0),
    downsample_to: float = 100.0,
    window: tuple[float, float] = (0.0, 4.0),
) -> EpochedDataset:
    """Run the full conditioning pipeline on every trial.

    Steps: bandpass at the original rate, decimate to ``downsample_to``,
    crop to ``window`` seconds, then z-score each channel across the whole
    dataset (pooled over trials). The ranking stage applies its own
    per-trial z-score on top of this, so the two normalizations coexist.
    """
    if downsample_to <= 0 or downsample_to > dataset.fs:
        raise ValueError("downsample_to must be in (0, fs]")
    ratio = dataset.fs / downsample_to
    factor = round(ratio)
    if abs(ratio - factor) > 1e-9:
        raise ValueError(
            f"fs {dataset.fs} is not an integer multiple of {downsample_to}"
        )

    data = dataset.stacked()  # (N, C, T)
    data = butterworth_bandpass(data, dataset.fs, band)
    data = decimate(data, factor)
    data = crop_array(data, downsample_to, window[0], window[1])

    # dataset-wide per-channel z-score
    mean = data.mean(axis=(0, 2), keepdims=True)
    sd = data.std(axis=(0, 2), keepdims=True)
    if np.any(sd <= ZSCORE_TOL):
        bad = np.nonzero(sd.ravel() <= ZSCORE_TOL)[0].tolist()
        raise ValueError(f"channels {bad} are constant after filtering")
    data = (data - mean) / sd

    trials = tuple(
        Trial(data=data[i], label=tr.label, split=tr.split)
        for i, tr in enumerate(dataset.trials)
    )
    return EpochedDataset(trials, downsample_to, dataset.layout, dataset.class_names)
