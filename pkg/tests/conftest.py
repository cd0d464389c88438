import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_pd(rng, n=4, scale=1.0, shift=0.1):
    """Random symmetric positive-definite matrix."""
    g = rng.normal(size=(n, n)) * scale
    return g @ g.T + shift * np.eye(n)


def random_psd(rng, n=4, scale=1.0):
    """Random symmetric positive-semidefinite matrix."""
    g = rng.normal(size=(n, n)) * scale
    return g @ g.T
