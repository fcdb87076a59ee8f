import numpy as np
import pytest

from did import SampledSignal, from_array, grid_coordinates


def random_signal(rows, cols, channels=3, seed=0):
    """Uniform-noise grid signal, the workhorse random test input."""
    rng = np.random.default_rng(seed)
    return from_array(rng.random((rows, cols, channels)))


def random_cloud_signal(n, d=2, p=3, seed=0):
    """Non-grid signal with random coordinates in the unit box."""
    rng = np.random.default_rng(seed)
    return SampledSignal(coords=rng.random((n, d)), values=rng.random((n, p)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_grid():
    return grid_coordinates(4, 4)
