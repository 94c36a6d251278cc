import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def haar_unitary(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def phase_aligned_deviation(a, b):
    """Max entrywise deviation after removing the relative global phase."""
    a = np.asarray(a)
    b = np.asarray(b)
    overlap = np.vdot(b.reshape(-1), a.reshape(-1))
    phase = overlap / abs(overlap) if abs(overlap) > 1e-14 else 1.0
    return float(np.max(np.abs(a - phase * b)))
