import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_symmetric(rng, n, scale=1.0):
    m = rng.standard_normal((n, n)) * scale
    return 0.5 * (m + m.T)


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_permutation_matrix(rng, n):
    p = np.zeros((n, n))
    p[np.arange(n), rng.permutation(n)] = 1.0
    return p


def well_conditioned(rng, n, cond_cap=50.0):
    """Random invertible matrix with a bounded condition number."""
    while True:
        m = rng.standard_normal((n, n))
        s = np.linalg.svd(m, compute_uv=False)
        if s[0] / s[-1] <= cond_cap:
            return m
