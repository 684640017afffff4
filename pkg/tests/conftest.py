import numpy as np
import pytest

from mqnmr import SpinSystem


@pytest.fixture
def pair():
    return SpinSystem(2)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Dense random Hermitian matrix with O(1) entries."""
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (raw + raw.conj().T) / 2


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random full-rank density matrix (Wishart construction)."""
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = raw @ raw.conj().T
    return rho / np.trace(rho).real
