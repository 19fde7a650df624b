import numpy as np
import pytest

from fermigauss.sampling import random_gaussian_params


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def draw_params(modes, seed, kind="generic", omega=1.0):
    return random_gaussian_params(modes, seed, kind=kind, omega=omega)


def random_antisymmetric(rng, size, scale=1.0):
    a = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    return scale * (a - a.T) / 2.0
