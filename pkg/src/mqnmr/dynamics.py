"""The four-period multiple-quantum experiment with phenomenological relaxation.

Preparation evolves the thermal state under the two-quantum Hamiltonian for
a time tau, the evolution period applies a decoding phase about Iz, and the
mixing period repeats the preparation with the Hamiltonian sign reversed.
Spin-lattice relaxation of the rotating-frame coherences enters through the
factorized solution of the linearized Liouville equation: after each
relaxing period the unitarily evolved part is weighted by exp(-tau/T_MQ)
and the rotating-frame equilibrium picks up the complementary weight. No
time stepping is involved, so the relaxation factors are exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .linalg import conjugate, require_hermitian, trace_product, unitary_exp
from .spin_system import SpinSystem, build_h_mq, build_rho_bar, build_rho_eq

#: Operational reading of the requirement that relaxation only perturbs the
#: coherent dynamics (coupling * T_MQ >> 1).
REGIME_MIN_D_TMQ = 10.0

_REGIME_WARNING = (
    "coupling_d * t_mq below 10: spin-lattice relaxation is not a small "
    "perturbation of the coherent dynamics; results leave the validity regime"
)


@dataclass(frozen=True)
class ExperimentParams:
    """Inputs for one pipeline run.

    coupling_d : dipolar coupling D in rad/s (> 0).
    tau : duration of the preparation period in s (mixing has the same length).
    beta : dimensionless inverse-temperature parameter of the initial state.
    t_mq : rotating-frame spin-lattice relaxation time in s; ``math.inf``
        turns relaxation off exactly (the decay factors become 1.0 with no
        division edge cases).
    decoding_phase : product of the decoding field (rad/s) and the evolution
        time (s). Only the product enters the physics, so the two are not
        exposed separately.
    """

    coupling_d: float
    tau: float
    beta: float
    t_mq: float = math.inf
    decoding_phase: float = 0.0

    def __post_init__(self):
        if not self.coupling_d > 0:
            raise ValueError(f"coupling_d must be positive, got {self.coupling_d}")
        if not self.tau >= 0:
            raise ValueError(f"tau must be nonnegative, got {self.tau}")
        if not self.t_mq > 0:
            raise ValueError(f"t_mq must be positive (math.inf allowed), got {self.t_mq}")
        if not math.isfinite(self.beta):
            raise ValueError(f"beta must be finite, got {self.beta}")
        if not math.isfinite(self.decoding_phase):
            raise ValueError(f"decoding_phase must be finite, got {self.decoding_phase}")
        if not self.regime_ok:
            warnings.warn(_REGIME_WARNING, UserWarning, stacklevel=2)

    @property
    def regime_ok(self) -> bool:
        """Whether coupling_d * t_mq >= 10, the operational validity check."""
        return math.isinf(self.t_mq) or self.coupling_d * self.t_mq >= REGIME_MIN_D_TMQ

    @property
    def d_tau(self) -> float:
        """Dimensionless pulse area D * tau."""
        return self.coupling_d * self.tau

    @property
    def relaxation_rate(self) -> float:
        """Dimensionless tau / T_MQ (0.0 when relaxation is off)."""
        return self.tau / self.t_mq

    def relaxation_factor(self, periods: int = 1) -> float:
        """exp(-periods * tau / T_MQ); exactly 1.0 for infinite T_MQ."""
        return math.exp(-periods * self.tau / self.t_mq)

    def with_phase(self, decoding_phase: float) -> "ExperimentParams":
        return replace(self, decoding_phase=decoding_phase)

    @classmethod
    def from_dimensionless(
        cls,
        beta: float,
        d_tau: float,
        relaxation_rate: float = 0.0,
        coupling_d: float = 1.0,
        decoding_phase: float = 0.0,
    ) -> "ExperimentParams":
        """Build params from (beta, D*tau, tau/T_MQ) at a reference coupling."""
        if d_tau < 0:
            raise ValueError(f"d_tau must be nonnegative, got {d_tau}")
        if relaxation_rate < 0:
            raise ValueError(f"relaxation_rate must be nonnegative, got {relaxation_rate}")
        tau = d_tau / coupling_d
        if relaxation_rate == 0.0:
            t_mq = math.inf
        elif tau == 0.0:
            raise ValueError("relaxation_rate > 0 requires tau > 0")
        else:
            t_mq = tau / relaxation_rate
        return cls(
            coupling_d=coupling_d,
            tau=tau,
            beta=beta,
            t_mq=t_mq,
            decoding_phase=decoding_phase,
        )


@dataclass(frozen=True)
class StageDensities:
    """Density matrices after preparation, evolution and mixing."""

    rho_prep: np.ndarray
    rho_evolved: np.ndarray
    rho_final: np.ndarray

    def validate(
        self,
        trace_tol: float = 1e-12,
        hermiticity_tol: float = 1e-12,
        eigenvalue_floor: float = -1e-10,
    ) -> None:
        """Check unit trace, Hermiticity and positivity of all three stages."""
        for name, rho in (
            ("rho_prep", self.rho_prep),
            ("rho_evolved", self.rho_evolved),
            ("rho_final", self.rho_final),
        ):
            trace_dev = abs(np.trace(rho) - 1.0)
            if trace_dev > trace_tol:
                raise ValueError(f"{name}: trace deviates from 1 by {trace_dev:.3e}")
            require_hermitian(rho, rtol=hermiticity_tol)
            smallest = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0])
            if smallest < eigenvalue_floor:
                raise ValueError(f"{name}: negative eigenvalue {smallest:.3e}")


def _apply_decoding_phase(system: SpinSystem, rho: np.ndarray, phase: float) -> np.ndarray:
    """Conjugate by exp(-i * phase * Iz), using that Iz is diagonal."""
    phases = np.exp(-1j * phase * system.iz_diagonal)
    return (phases[:, None] * rho) * phases.conj()[None, :]


def propagate_preparation(system: SpinSystem, params: ExperimentParams) -> np.ndarray:
    """Density matrix at the end of the preparation period.

    Returns the unitarily evolved thermal state weighted by exp(-tau/T_MQ)
    plus the rotating-frame equilibrium with the complementary weight.
    """
    u_prep = unitary_exp(build_h_mq(system, params.coupling_d), params.tau)
    evolved = conjugate(u_prep, build_rho_eq(system, params.beta))
    decay = params.relaxation_factor(1)
    return decay * evolved + (1.0 - decay) * build_rho_bar(system)


def propagate_full(system: SpinSystem, params: ExperimentParams) -> StageDensities:
    """Run preparation, decoding-phase evolution and sign-reversed mixing.

    The evolution period applies exp(-i * phase * Iz) with no additional
    relaxation (the evolution time is assumed short against T_MQ); the
    mixing period evolves under the sign-reversed Hamiltonian for another
    tau, bringing the total relaxation weight to exp(-2 tau/T_MQ).
    """
    h_mq = build_h_mq(system, params.coupling_d)
    rho_bar = build_rho_bar(system)
    u_prep = unitary_exp(h_mq, params.tau)

    prepared = conjugate(u_prep, build_rho_eq(system, params.beta))
    decoded = _apply_decoding_phase(system, prepared, params.decoding_phase)
    # mixing under -H_MQ for tau is conjugation by exp(+i H_MQ tau) = u_prep^dag
    mixed = conjugate(u_prep.conj().T, decoded)

    decay1 = params.relaxation_factor(1)
    decay2 = params.relaxation_factor(2)
    return StageDensities(
        rho_prep=decay1 * prepared + (1.0 - decay1) * rho_bar,
        rho_evolved=decay1 * decoded + (1.0 - decay1) * rho_bar,
        rho_final=decay2 * mixed + (1.0 - decay2) * rho_bar,
    )


def longitudinal_magnetization(system: SpinSystem, rho: np.ndarray) -> float:
    """Tr(Iz rho), asserting the imaginary residue is at round-off level."""
    value = trace_product(system.iz, rho)
    if abs(value.imag) > 1e-12:
        raise ValueError(
            f"Tr(Iz rho) has imaginary part {value.imag:.3e}; "
            "input is not a physical density matrix"
        )
    return value.real


__all__ = [
    "ExperimentParams",
    "StageDensities",
    "propagate_preparation",
    "propagate_full",
    "longitudinal_magnetization",
    "REGIME_MIN_D_TMQ",
]
