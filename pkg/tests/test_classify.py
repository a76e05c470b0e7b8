import numpy as np
import pytest

from xcdc import (
    AccuracyCurve,
    accuracy_curve,
    fit_classifier,
    minimal_subset,
    rank_channels,
    train_classifier,
)
from xcdc.classify import default_ks


def brute_force_minimal_k(ks, accs, reference, d):
    admissible = [k for k, a in zip(ks, accs) if a >= reference * (1 - d)]
    return min(admissible) if admissible else None


def separable_data(rng, n=30, k=3, t=64):
    """Class 1 has much larger variance on channel 0."""
    data = rng.normal(size=(2 * n, k, t))
    labels = np.repeat([0, 1], n)
    data[labels == 1, 0, :] *= 4.0
    return data, labels


class TestClassifier:
    def test_separable_training_accuracy(self, rng):
        data, labels = separable_data(rng)
        model = fit_classifier(data, labels)
        assert np.mean(model.predict(data) == labels) == 1.0

    def test_training_trial_predicted_correctly(self, rng):
        data, labels = separable_data(rng)
        model = fit_classifier(data, labels)
        assert model.predict(data[0:1])[0] == labels[0]
        assert model.predict(data[-1:])[0] == labels[-1]

    def test_single_channel_uses_one_feature(self, rng):
        data, labels = separable_data(rng, k=1)
        model = fit_classifier(data, labels)
        assert model.filters is None
        assert model.n_features == 1

    def test_filter_pair_rule(self, rng):
        for k, expected in [(2, 2), (3, 2), (4, 4), (6, 6), (10, 6)]:
            data, labels = separable_data(rng, k=k)
            model = fit_classifier(data, labels)
            assert model.n_features == expected

    def test_global_rescaling_changes_no_prediction(self, rng):
        data, labels = separable_data(rng)
        test = rng.normal(size=(20, 3, 64))
        a = fit_classifier(data, labels).predict(test)
        b = fit_classifier(10.0 * data, labels).predict(10.0 * test)
        assert np.array_equal(a, b)

    def test_missing_class_rejected(self, rng):
        data, _ = separable_data(rng)
        with pytest.raises(ValueError, match="2 classes"):
            fit_classifier(data, np.zeros(len(data), dtype=int))


class TestAccuracyCurve:
    def test_single_point_at_c_equals_reference(self, small_dataset):
        ranking, _ = rank_channels(small_dataset, 0.5)
        c = small_dataset.n_channels
        curve = accuracy_curve(small_dataset, ranking, ks=[c])
        assert curve.accuracies[0] == curve.reference

    def test_deterministic(self, small_dataset):
        ranking, _ = rank_channels(small_dataset, 0.5)
        a = accuracy_curve(small_dataset, ranking, ks=[1, 3, 6], seed=9)
        b = accuracy_curve(small_dataset, ranking, ks=[1, 3, 6], seed=9)
        assert a == b

    def test_reference_computed_even_without_c_in_ks(self, small_dataset):
        ranking, _ = rank_channels(small_dataset, 0.5)
        partial = accuracy_curve(small_dataset, ranking, ks=[1, 2])
        full = accuracy_curve(small_dataset, ranking, ks=[small_dataset.n_channels])
        assert partial.reference == full.accuracies[0]

    def test_bad_k_rejected(self, small_dataset):
        ranking, _ = rank_channels(small_dataset, 0.5)
        with pytest.raises(ValueError):
            accuracy_curve(small_dataset, ranking, ks=[0])
        with pytest.raises(ValueError):
            accuracy_curve(small_dataset, ranking, ks=[99])

    def test_curve_invariants(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            AccuracyCurve(ks=(2, 2), accuracies=(0.5, 0.5), reference=0.5)
        with pytest.raises(ValueError, match="align"):
            AccuracyCurve(ks=(1,), accuracies=(0.5, 0.6), reference=0.5)


class TestMinimalSubset:
    def test_worked_example(self):
        curve = AccuracyCurve(ks=(1, 2, 3, 4),
                              accuracies=(0.50, 0.85, 0.90, 0.92),
                              reference=0.90)
        report = minimal_subset(curve, 0.90, 0.0)
        assert report.admissible == (3, 4)
        assert report.k_m == 3

    def test_d_equal_one_admits_everything(self):
        curve = AccuracyCurve(ks=(2, 5, 9), accuracies=(0.1, 0.2, 0.3),
                              reference=0.9)
        report = minimal_subset(curve, 0.9, 1.0)
        assert report.admissible == (2, 5, 9)
        assert report.k_m == 2

    def test_empty_admissible_errors(self):
        curve = AccuracyCurve(ks=(1, 2), accuracies=(0.1, 0.2), reference=0.9)
        with pytest.raises(ValueError, match="constraint"):
            minimal_subset(curve, 0.9, 0.0)

    def test_matches_brute_force_on_random_curves(self, rng):
        for _ in range(1000):
            n = rng.integers(1, 12)
            ks = tuple(sorted(rng.choice(np.arange(1, 40), size=n, replace=False)))
            accs = tuple(rng.uniform(0, 1, size=n))
            reference = float(rng.uniform(0, 1))
            d = float(rng.uniform(0, 1))
            curve = AccuracyCurve(ks=ks, accuracies=accs, reference=reference)
            expected = brute_force_minimal_k(ks, accs, reference, d)
            if expected is None:
                with pytest.raises(ValueError):
                    minimal_subset(curve, reference, d)
            else:
                assert minimal_subset(curve, reference, d).k_m == expected

    def test_monotone_in_d(self, rng):
        curve = AccuracyCurve(
            ks=tuple(range(1, 11)),
            accuracies=tuple(rng.uniform(0.3, 1.0, size=10)),
            reference=0.95,
        )
        ds = np.sort(rng.uniform(0, 1, size=20))
        previous = np.inf
        for d in ds:  # ascending d -> k_m non-increasing
            try:
                k_m = minimal_subset(curve, 0.95, float(d)).k_m
            except ValueError:
                k_m = np.inf  # empty admissible set, only at the smallest d
            assert k_m <= previous
            previous = k_m

    def test_channels_from_ranking(self, small_dataset):
        ranking, _ = rank_channels(small_dataset, 0.5)
        curve = accuracy_curve(small_dataset, ranking, ks=[1, 2, 6])
        report = minimal_subset(curve, curve.reference, 1.0, ranking)
        assert report.channels == tuple(int(c) for c in ranking.order[: report.k_m])


def test_default_ks_small_and_large():
    assert default_ks(5) == (1, 2, 3, 4, 5)
    ks = default_ks(71)
    assert ks[0] == 1 and ks[-1] == 71
    assert list(ks) == sorted(set(ks))
    assert len(ks) < 40
