import numpy as np
import pytest

from nlqw import SpinorField


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def random_field(rng, span=6, scale=0.5, origin=-3, time=0):
    """Dense random complex field on [origin, origin+span)."""
    cells = scale * (
        rng.standard_normal((span, 2)) + 1j * rng.standard_normal((span, 2))
    )
    return SpinorField(origin, cells, time)
