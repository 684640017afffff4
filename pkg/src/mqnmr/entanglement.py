"""Two-qubit entanglement of the prepared state: concurrence and fluctuations.

The concurrence is computed two ways that must agree: numerically from the
density matrix via the spin-flip construction, and from the closed form in
(beta, D*tau, tau/T_MQ). Also provided: the onset temperature below which
the prepared state is entangled, the relation tying the concurrence to the
two-quantum coherence intensities, and the rms entanglement-entropy
fluctuation induced by single-spin fluctuations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar, k as k_boltzmann

from .linalg import as_complex_matrix, hermitian_eigendecomposition, hermitian_sqrt, require_hermitian
from .spin_system import SIGMA_Y

#: Above this value of tau/T_MQ no temperature yields an entangled state.
ENTANGLEMENT_RATE_THRESHOLD = math.log(3.0)

_SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y).real  # real symmetric, squares to identity


@dataclass(frozen=True)
class ConcurrenceResult:
    """Concurrence with its eigen-roots and the derived fluctuation measure.

    lambdas are the square roots of the eigenvalues of rho * rho_tilde in
    descending order; concurrence = max(0, lambdas[0] - sum of the rest).
    The input echo fields are None when the state did not come from the
    standard pipeline parameterization.
    """

    concurrence: float
    lambdas: tuple[float, float, float, float]
    delta_e: float
    beta: float | None = None
    d_tau: float | None = None
    relaxation_rate: float | None = None


def spin_flip(rho) -> np.ndarray:
    """Spin-flipped state (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y)."""
    m = as_complex_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"spin flip is defined for two qubits (4x4), got {m.shape}")
    return _SIGMA_YY @ m.conj() @ _SIGMA_YY


def concurrence_numeric(
    rho,
    beta: float | None = None,
    d_tau: float | None = None,
    relaxation_rate: float | None = None,
) -> ConcurrenceResult:
    """Concurrence of a two-qubit density matrix.

    The eigenvalues of the non-Hermitian product rho * rho_tilde equal those
    of the Hermitian congruence sqrt(rho) rho_tilde sqrt(rho), so only
    Hermitian eigenmachinery is needed. Round-off eigenvalues in
    [-1e-10, 0) are clamped to zero.
    """
    m = require_hermitian(rho)
    if m.shape != (4, 4):
        raise ValueError(f"concurrence is defined for two qubits (4x4), got {m.shape}")
    trace_dev = abs(np.trace(m) - 1.0)
    if trace_dev > 1e-10:
        raise ValueError(f"density matrix trace deviates from 1 by {trace_dev:.3e}")

    root = hermitian_sqrt(m)  # rejects significantly negative eigenvalues
    product = root @ spin_flip(m) @ root
    eigenvalues, _ = hermitian_eigendecomposition((product + product.conj().T) / 2)
    if eigenvalues[0] < -1e-10:
        raise ValueError(
            f"rho * rho_tilde has eigenvalue {eigenvalues[0]:.3e}; input is unphysical"
        )
    lambdas = np.sqrt(np.maximum(eigenvalues, 0.0))[::-1]
    concurrence = max(0.0, float(lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]))
    return ConcurrenceResult(
        concurrence=concurrence,
        lambdas=tuple(float(v) for v in lambdas),
        delta_e=entanglement_fluctuation(concurrence),
        beta=beta,
        d_tau=d_tau,
        relaxation_rate=relaxation_rate,
    )


def concurrence_closed_form(beta: float, d_tau: float, relaxation_rate: float = 0.0) -> float:
    """Closed-form concurrence of the prepared pair state.

    C = max[0, e^{-x}/(2 cosh^2(beta/2)) * (|sin(D tau)| sinh(beta) - 1)
            - (1 - e^{-x})/2]   with x = tau/T_MQ.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if relaxation_rate < 0:
        raise ValueError(f"relaxation_rate must be nonnegative, got {relaxation_rate}")
    decay = math.exp(-relaxation_rate)
    bracket = (
        decay * (abs(math.sin(d_tau)) * math.sinh(beta) - 1.0) / (2.0 * math.cosh(beta / 2) ** 2)
        - (1.0 - decay) / 2.0
    )
    return max(0.0, bracket)


def onset_temperature(omega0: float, relaxation_rate: float = 0.0) -> float | None:
    """Temperature below which the prepared state is entangled, in kelvin.

    Returns None for tau/T_MQ >= ln 3, where the threshold argument
    sqrt(2 + a) with a = e^{tau/T_MQ} - 1 reaches 2 and no temperature
    yields entanglement. Decreases as the relaxation rate grows.
    """
    if omega0 <= 0:
        raise ValueError(f"omega0 must be positive, got {omega0}")
    if relaxation_rate < 0:
        raise ValueError(f"relaxation_rate must be nonnegative, got {relaxation_rate}")
    if relaxation_rate >= ENTANGLEMENT_RATE_THRESHOLD:
        return None
    root = math.sqrt(2.0 + math.expm1(relaxation_rate))
    return hbar * omega0 / (k_boltzmann * math.log(root / (2.0 - root)))


def concurrence_from_coherences(
    beta: float, two_quantum_sum: float, relaxation_rate: float = 0.0
) -> float:
    """Concurrence from the summed two-quantum intensities J_2 + J_{-2}.

    C = sqrt(tanh(beta/2) * (J_2 + J_{-2})) - e^{-x}/(2 cosh^2(beta/2))
        - (1 - e^{-x})/2, clamped at zero to stay consistent with the
    closed form it must reproduce.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if two_quantum_sum < 0:
        raise ValueError(f"coherence intensities must be nonnegative, got {two_quantum_sum}")
    if relaxation_rate < 0:
        raise ValueError(f"relaxation_rate must be nonnegative, got {relaxation_rate}")
    decay = math.exp(-relaxation_rate)
    value = (
        math.sqrt(math.tanh(beta / 2) * two_quantum_sum)
        - decay / (2.0 * math.cosh(beta / 2) ** 2)
        - (1.0 - decay) / 2.0
    )
    return max(0.0, value)


def entanglement_fluctuation(concurrence: float) -> float:
    """Rms fluctuation of the entanglement entropy, C log2[(1 + sqrt(1-C^2))/C].

    Defined by continuous extension at the endpoints: 0 at C = 0 (removable
    singularity) and 0 at C = 1.
    """
    if concurrence < -1e-12 or concurrence > 1.0 + 1e-12:
        raise ValueError(f"concurrence must lie in [0, 1], got {concurrence}")
    c = min(max(concurrence, 0.0), 1.0)
    if c == 0.0 or c == 1.0:
        return 0.0
    return c * math.log2((1.0 + math.sqrt(1.0 - c * c)) / c)


__all__ = [
    "ConcurrenceResult",
    "spin_flip",
    "concurrence_numeric",
    "concurrence_closed_form",
    "onset_temperature",
    "concurrence_from_coherences",
    "entanglement_fluctuation",
    "ENTANGLEMENT_RATE_THRESHOLD",
]
