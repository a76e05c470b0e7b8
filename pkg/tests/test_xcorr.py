import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xcdc import (
    pairwise_similarity,
    pairwise_similarity_naive,
    similarity,
    xcorr_full,
    xcorr_full_naive,
    zscore,
)
from xcdc.ranking import trial_zscore


def brute_force_xcorr(x, y):
    """Pure-python definition, independent of both engines."""
    t = len(x)
    out = []
    for k in range(-(t - 1), t):
        s = 0.0
        for i in range(t):
            j = i + k
            if 0 <= j < t:
                s += x[i] * y[j]
        out.append(s)
    return np.array(out)


class TestXcorrFull:
    def test_shifted_impulses(self):
        series = xcorr_full([1.0, 0.0], [0.0, 1.0])
        assert series.lag_offset == -1
        assert series.values.tolist() == [0.0, 0.0, 1.0]

    def test_ones(self):
        assert xcorr_full([1.0, 1.0], [1.0, 1.0]).values.tolist() == [1.0, 2.0, 1.0]

    @pytest.mark.parametrize("p,q", [(0, 3), (3, 0), (2, 2), (4, 1)])
    def test_impulse_shift_property(self, p, q):
        t = 5
        x = np.zeros(t)
        y = np.zeros(t)
        x[p] = 1.0
        y[q] = 1.0
        series = xcorr_full(x, y)
        assert series.lag(q - p) == pytest.approx(1.0, abs=1e-12)
        assert np.sum(np.abs(series.values) > 1e-12) == 1

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            xcorr_full([1.0], [1.0, 2.0])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            xcorr_full([], [])

    @settings(max_examples=300, deadline=None)
    @given(st.integers(min_value=1, max_value=48), st.integers(min_value=0, max_value=2**31))
    def test_both_engines_match_brute_force(self, t, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=t)
        y = rng.normal(size=t)
        expected = brute_force_xcorr(x, y)
        np.testing.assert_allclose(xcorr_full(x, y).values, expected, atol=1e-9)
        np.testing.assert_allclose(xcorr_full_naive(x, y).values, expected, atol=1e-12)


class TestSimilarity:
    def test_self_similarity_of_zscored_is_t(self, rng):
        for t in (4, 17, 100):
            x = zscore(rng.normal(size=t))
            assert similarity(x, x) == pytest.approx(t, abs=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=1, max_value=64), st.integers(min_value=0, max_value=2**31))
    def test_symmetry(self, t, seed):
        g = np.random.default_rng(seed)
        x = g.normal(size=t)
        y = g.normal(size=t)
        assert similarity(x, y) == pytest.approx(similarity(y, x), rel=1e-12, abs=1e-12)

    def test_alternating_signals(self):
        x = np.array([1.0, -1.0, 1.0, -1.0])
        y = -x
        assert similarity(x, y) == pytest.approx(3.0, abs=1e-9)
        # brute-force over all 7 lags confirms the max sits at |lag| = 1
        series = brute_force_xcorr(x, y)
        assert series.max() == 3.0

    def test_scale_equivariance(self, rng):
        x = rng.normal(size=32)
        y = rng.normal(size=32)
        assert similarity(7.0 * x, y) == pytest.approx(7.0 * similarity(x, y), rel=1e-9)

    def test_max_lag_window(self):
        x = np.zeros(8)
        y = np.zeros(8)
        x[0] = 1.0
        y[5] = 1.0  # peak at lag 5
        assert similarity(x, y) == pytest.approx(1.0)
        assert similarity(x, y, max_lag=3) == pytest.approx(0.0, abs=1e-12)


class TestPairwise:
    def test_matches_naive_oracle(self, rng):
        trials = rng.normal(size=(3, 64))
        fast = pairwise_similarity(trials).values
        slow = pairwise_similarity_naive(trials).values
        np.testing.assert_allclose(fast, slow, rtol=1e-9, atol=1e-9)

    def test_diagonal_is_t_for_zscored(self, rng):
        trials = trial_zscore(rng.normal(size=(5, 50)))
        sim = pairwise_similarity(trials)
        np.testing.assert_allclose(np.diag(sim.values), 50.0, atol=1e-9)

    def test_duplicated_trial_rows_identical(self, rng):
        trials = rng.normal(size=(4, 32))
        trials[3] = trials[1]
        sim = pairwise_similarity(trials).values
        assert np.array_equal(sim[1], sim[3])

    def test_symmetric(self, rng):
        sim = pairwise_similarity(rng.normal(size=(6, 40))).values
        assert np.array_equal(sim, sim.T)

    def test_thread_counts_agree(self, rng):
        trials = rng.normal(size=(12, 96))
        s1 = pairwise_similarity(trials, threads=1).values
        s4 = pairwise_similarity(trials, threads=4).values
        np.testing.assert_allclose(s1, s4, atol=1e-12, rtol=0)

    def test_ragged_rejected(self):
        with pytest.raises(ValueError):
            pairwise_similarity([[1.0, 2.0], [1.0, 2.0, 3.0]])

    def test_single_trial_rejected(self, rng):
        with pytest.raises(ValueError, match="at least 2"):
            pairwise_similarity(rng.normal(size=(1, 16)))
