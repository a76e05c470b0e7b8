import numpy as np
import pytest

from xcdc import SynthConfig, generate_synthetic


@pytest.fixture(scope="session")
def small_dataset():
    """6 channels, 2 planted, small enough for fast end-to-end tests."""
    cfg = SynthConfig(
        n_channels=6,
        informative=(1, 4),
        n_trials_per_class=40,
        t_samples=128,
        seed=11,
    )
    return generate_synthetic(cfg)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
