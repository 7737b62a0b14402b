"""Shared fixtures for the lab tests."""

import numpy as np
import pytest

from hstationary_lab.grids import GridSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20130713)


@pytest.fixture
def small_grid():
    return GridSpec(count=6, seed=7)
