"""Dense complex linear algebra for small spin-system operators.

Everything here operates on square ``numpy.complex128`` arrays, the carrier
for Hamiltonians, propagators and density matrices throughout the package.
All Hamiltonians in scope are Hermitian and small (dim <= ~4096), so matrix
functions go through the eigendecomposition; there is no need for
Pade/scaling-and-squaring machinery.
"""

from __future__ import annotations

import numpy as np

# Relative Hermiticity tolerance and eigen-residual tolerance. Double
# precision leaves ample headroom at the dimensions handled here.
HERMITICITY_RTOL = 1e-12
EIGEN_RESIDUAL_TOL = 1e-10


def as_complex_matrix(a) -> np.ndarray:
    """Coerce input to a square complex128 matrix (no copy when possible)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise ValueError("matrix dimension must be at least 1")
    return m


def require_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def require_hermitian(a, rtol: float = HERMITICITY_RTOL) -> np.ndarray:
    """Validate Hermiticity of `a` relative to its largest entry.

    Raises ValueError naming the worst offending entry when
    max|A[i,j] - conj(A[j,i])| exceeds ``rtol * max|A|``.
    """
    m = as_complex_matrix(a)
    dev = np.abs(m - m.conj().T)
    worst_flat = int(np.argmax(dev))
    i, j = divmod(worst_flat, m.shape[0])
    scale = float(np.abs(m).max())
    if dev[i, j] > rtol * scale:
        raise ValueError(
            "matrix is not Hermitian within tolerance: "
            f"|A[{i},{j}] - conj(A[{j},{i}])| = {dev[i, j]:.3e} "
            f"> {rtol:.1e} * max|A| = {rtol * scale:.3e}"
        )
    return m


def _fix_eigenvector_gauge(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column's phase so its first nonzero component is real positive."""
    fixed = vectors.copy()
    n = vectors.shape[0]
    for col in range(vectors.shape[1]):
        v = fixed[:, col]
        for row in range(n):
            mag = abs(v[row])
            if mag > 1e-12:
                fixed[:, col] = v * (v[row].conj() / mag)
                break
    return fixed


def _sort_degenerate_clusters(values: np.ndarray, vectors: np.ndarray):
    """Order eigenvector columns lexicographically inside equal-eigenvalue clusters."""
    tie_tol = 1e-12 * max(1.0, float(np.abs(values).max(initial=0.0)))
    start = 0
    n = len(values)
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[start] <= tie_tol:
            stop += 1
        if stop - start > 1:
            block = vectors[:, start:stop]
            # lexsort keys: last key is primary, so feed components in reverse
            keys = []
            for row in range(block.shape[0] - 1, -1, -1):
                keys.append(block[row, :].imag)
                keys.append(block[row, :].real)
            order = np.lexsort(keys)
            vectors[:, start:stop] = block[:, order]
        start = stop
    return values, vectors


def hermitian_eigendecomposition(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition A = V diag(w) V^dag of a Hermitian matrix.

    Returns eigenvalues ascending and a unitary matrix of eigenvectors in
    matching column order. Output is deterministic: each eigenvector's first
    nonzero component is made real positive, and columns within degenerate
    clusters are ordered lexicographically.
    """
    m = require_hermitian(a)
    values, vectors = np.linalg.eigh(m)
    vectors = _fix_eigenvector_gauge(vectors)
    values, vectors = _sort_degenerate_clusters(values, vectors)
    return values, vectors


def unitary_exp(h, t: float) -> np.ndarray:
    """Propagator exp(-i H t) for Hermitian H (rad/s) over time t (s)."""
    values, vectors = hermitian_eigendecomposition(h)
    phases = np.exp(-1j * values * t)
    return (vectors * phases) @ vectors.conj().T


def conjugate(u, a) -> np.ndarray:
    """Similarity transform U A U^dag."""
    um = as_complex_matrix(u)
    am = as_complex_matrix(a)
    require_same_shape(um, am)
    return um @ am @ um.conj().T


def trace_product(a, b) -> complex:
    """Tr(A B) without forming the product: sum over A[i,j] * B[j,i]."""
    am = as_complex_matrix(a)
    bm = as_complex_matrix(b)
    require_same_shape(am, bm)
    return complex(np.sum(am * bm.T))


def hermitian_sqrt(a) -> np.ndarray:
    """Hermitian PSD square root of a Hermitian PSD matrix.

    Round-off eigenvalues in [-1e-8, 0) are clamped to zero; anything below
    -1e-8 is rejected as genuinely non-PSD.
    """
    values, vectors = hermitian_eigendecomposition(a)
    if values[0] < -1e-8:
        raise ValueError(
            f"matrix is not positive semidefinite: smallest eigenvalue {values[0]:.3e}"
        )
    values = np.maximum(values, 0.0)
    root = (vectors * np.sqrt(values)) @ vectors.conj().T
    # symmetrize to pin Hermiticity against round-off
    return (root + root.conj().T) / 2
