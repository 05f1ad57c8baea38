import numpy as np
import pytest

from iov_bazaar.config import ExperimentConfig


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def small_config():
    return ExperimentConfig(num_vehicles=12, slots_per_episode=5,
                            episodes_per_epoch=2, epochs=2)
