"""Cross-correlation engine.

``r(k) = sum_i x(i) * y(i+k)`` over lags ``k in [-(T-1), T-1]``, with y
treated as zero outside its support (equivalent to zero-padding y on both
sides). The similarity of two equal-length signals is the maximum of r over
a lag window (all lags by default).

Two implementations live here permanently:

* a frequency-domain engine (:func:`pairwise_similarity`) that computes each
  trial's spectrum once and forms every pair via spectral products, and
* a naive direct-definition engine (:func:`xcorr_full_naive`,
  :func:`pairwise_similarity_naive`) that loops over lags. It is the test
  oracle and the benchmark baseline; do not "optimize" it.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft


@dataclass(frozen=True)
class LagSeries:
    """Cross-correlation values over lags; values[j] is r at j + lag_offset."""

    values: np.ndarray
    lag_offset: int

    def lag(self, k: int) -> float:
        j = k - self.lag_offset
        if not 0 <= j < self.values.size:
            raise ValueError(f"lag {k} outside [{self.lag_offset}, "
                             f"{self.lag_offset + self.values.size - 1}]")
        return float(self.values[j])


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric N x N matrix of pairwise trial similarities for one channel."""

    values: np.ndarray
    channel: int = -1

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("similarity matrix must be square")
        if not np.array_equal(v, v.T):
            raise ValueError("similarity matrix must be symmetric")
        if not np.all(np.isfinite(v)):
            raise ValueError("similarity matrix entries must be finite")


def _check_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("inputs must be 1-D sequences")
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size == 0:
        raise ValueError("inputs must be non-empty")
    return x, y


def _fft_len(t: int) -> int:
    # next power of two >= 2T-1; keeps plan reuse trivial
    return 1 << max(2 * t - 2, 1).bit_length() if t > 1 else 2


def xcorr_full(x, y) -> LagSeries:
    """Full cross-correlation series via FFT, lags -(T-1)..T-1."""
    x, y = _check_pair(x, y)
    t = x.size
    length = _fft_len(t)
    c = sfft.irfft(np.conj(sfft.rfft(x, length)) * sfft.rfft(y, length), length)
    # non-negative lags sit at [0, T), negative lags wrap to the tail
    values = np.concatenate([c[length - (t - 1):] if t > 1 else c[:0], c[:t]])
    return LagSeries(values=values, lag_offset=-(t - 1))


def xcorr_full_naive(x, y) -> LagSeries:
    """Direct-definition cross-correlation: one dot product per lag."""
    x, y = _check_pair(x, y)
    t = x.size
    values = np.empty(2 * t - 1)
    for j, k in enumerate(range(-(t - 1), t)):
        if k >= 0:
            values[j] = x[: t - k] @ y[k:]
        else:
            values[j] = x[-k:] @ y[: t + k]
    return LagSeries(values=values, lag_offset=-(t - 1))


def _lag_slice(t: int, max_lag: int | None) -> slice:
    """Index window into a full 2T-1 lag series restricting |k| <= max_lag."""
    if max_lag is None:
        return slice(None)
    if max_lag < 0:
        raise ValueError("max_lag must be >= 0")
    m = min(max_lag, t - 1)
    return slice((t - 1) - m, (t - 1) + m + 1)


def similarity(x, y, max_lag: int | None = None) -> float:
    """Max of the cross-correlation over the lag window (all lags by default)."""
    series = xcorr_full(x, y)
    t = (series.values.size + 1) // 2
    return float(series.values[_lag_slice(t, max_lag)].max())


def similarity_naive(x, y, max_lag: int | None = None) -> float:
    series = xcorr_full_naive(x, y)
    t = (series.values.size + 1) // 2
    return float(series.values[_lag_slice(t, max_lag)].max())


def _check_trials(trials) -> np.ndarray:
    x = np.asarray(trials, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("trials must be a uniform (N, T) array of sequences")
    if x.shape[0] < 2:
        raise ValueError("need at least 2 trials")
    if x.shape[1] < 1:
        raise ValueError("trials must be non-empty")
    return x


def pairwise_similarity(
    trials,
    channel: int = -1,
    max_lag: int | None = None,
    threads: int = 1,
) -> SimilarityMatrix:
    """All-pairs similarity via cached spectra and frequency-domain products.

    Each trial's FFT is computed once; each row of the upper triangle is one
    batched inverse transform. Rows are independent work items, so the
    result is bit-identical for any thread count.
    """
    x = _check_trials(trials)
    n, t = x.shape
    length = _fft_len(t)
    spectra = sfft.rfft(x, n=length, axis=1)
    window = _lag_slice(t, max_lag)
    out = np.empty((n, n))

    def fill_row(i: int) -> None:
        c = sfft.irfft(np.conj(spectra[i]) * spectra[i:], n=length, axis=1)
        full = np.concatenate(
            [c[:, length - (t - 1):] if t > 1 else c[:, :0], c[:, :t]], axis=1
        )
        m = full[:, window].max(axis=1)
        out[i, i:] = m
        out[i:, i] = m

    if threads <= 1:
        for i in range(n):
            fill_row(i)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill_row, range(n)))
    return SimilarityMatrix(values=out, channel=channel)


def pairwise_similarity_naive(
    trials, channel: int = -1, max_lag: int | None = None
) -> SimilarityMatrix:
    """All-pairs similarity straight from the definition; O(N^2 T^2)."""
    x = _check_trials(trials)
    n = x.shape[0]
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            s = similarity_naive(x[i], x[j], max_lag=max_lag)
            out[i, j] = s
            out[j, i] = s
    return SimilarityMatrix(values=out, channel=channel)
