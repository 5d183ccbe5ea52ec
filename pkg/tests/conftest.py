import numpy as np
import pytest
from hypothesis import settings

from corrlimit import OscillatorParams

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def unit():
    return OscillatorParams()


@pytest.fixture
def rng_free():
    # determinism guard: tests never draw from numpy's global RNG
    state = np.random.get_state()[1].copy()
    yield
    assert np.array_equal(state, np.random.get_state()[1])
