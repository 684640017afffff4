"""Spin-1/2 operators, Hamiltonians and equilibrium states for pairs and chains.

Basis convention (all golden values depend on it): site 0 is the leftmost
tensor factor, the single-site basis is ordered (up, down) with Iz|up> =
+1/2 |up>, and the many-spin basis is lexicographic with up < down, so
|up...up> comes first. Total Iz is then diagonal with entries
n/2 - (number of down spins).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.constants import hbar, k as k_boltzmann

SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]], dtype=np.complex128)

_IZ_SINGLE = np.diag([0.5, -0.5]).astype(np.complex128)
_IPLUS_SINGLE = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)  # |up><down|
_IMINUS_SINGLE = _IPLUS_SINGLE.T.conj()
_IDENTITY_SINGLE = np.eye(2, dtype=np.complex128)


class SpinSystem:
    """A register of n spin-1/2 sites with cached embedded operators."""

    def __init__(self, n_spins: int):
        if n_spins < 1:
            raise ValueError(f"n_spins must be positive, got {n_spins}")
        self.n_spins = int(n_spins)
        self.dim = 2 ** self.n_spins

    def __repr__(self) -> str:
        return f"SpinSystem(n_spins={self.n_spins})"

    @property
    def is_pair(self) -> bool:
        return self.n_spins == 2

    @cached_property
    def iz_diagonal(self) -> np.ndarray:
        """Eigenvalues of total Iz in basis order: n/2 minus the down-spin count."""
        indices = np.arange(self.dim, dtype=np.uint64)
        down_counts = np.zeros(self.dim, dtype=np.int64)
        for bit in range(self.n_spins):
            down_counts += ((indices >> bit) & 1).astype(np.int64)
        return self.n_spins / 2 - down_counts

    @cached_property
    def iz(self) -> np.ndarray:
        return np.diag(self.iz_diagonal).astype(np.complex128)

    def site_operator(self, single: np.ndarray, site: int) -> np.ndarray:
        """Embed a single-spin operator at `site` by tensor product."""
        if not 0 <= site < self.n_spins:
            raise ValueError(f"site {site} out of range for {self.n_spins} spins")
        out = np.array([[1.0 + 0j]])
        for i in range(self.n_spins):
            out = np.kron(out, single if i == site else _IDENTITY_SINGLE)
        return out

    def raising(self, site: int) -> np.ndarray:
        return self.site_operator(_IPLUS_SINGLE, site)

    def lowering(self, site: int) -> np.ndarray:
        return self.site_operator(_IMINUS_SINGLE, site)


def build_iz(system: SpinSystem) -> np.ndarray:
    """Total Iz = sum of single-site Iz operators (diagonal, real entries)."""
    return system.iz.copy()


def build_h_mq(system: SpinSystem, coupling_d: float) -> np.ndarray:
    """Two-quantum average Hamiltonian -D/2 * sum over bonds of (Ii+ Ij+ + Ii- Ij-).

    For the pair this couples only |up,up> and |down,down| with matrix element
    -D/2. Chains take the same two-spin form on every nearest-neighbour bond
    with one uniform coupling; per-bond couplings are rejected because the
    chain intensity formula assumes uniformity.
    """
    if np.ndim(coupling_d) != 0:
        raise ValueError("coupling_d must be a single uniform coupling, not per-bond values")
    if system.n_spins < 2:
        raise ValueError("the two-quantum Hamiltonian needs at least 2 spins")
    d = float(coupling_d)
    h = np.zeros((system.dim, system.dim), dtype=np.complex128)
    for site in range(system.n_spins - 1):
        double_raise = system.raising(site) @ system.raising(site + 1)
        h += double_raise + double_raise.conj().T
    return -d / 2 * h


def build_h_dz(system: SpinSystem, coupling_d: float) -> np.ndarray:
    """Secular dipolar Hamiltonian D(3 Iz1 Iz2 - I1.I2) for the spin pair.

    Provided for completeness; the dynamics pipeline evolves under the
    two-quantum Hamiltonian only. Defined for the two-spin case, so chains
    are rejected.
    """
    if not system.is_pair:
        raise ValueError("the secular dipolar Hamiltonian is defined for a spin pair only")
    d = float(coupling_d)
    iz1 = system.site_operator(_IZ_SINGLE, 0)
    iz2 = system.site_operator(_IZ_SINGLE, 1)
    flip_flop = system.raising(0) @ system.lowering(1)
    flip_flop = flip_flop + flip_flop.conj().T
    # 3 Iz1 Iz2 - I1.I2 = 2 Iz1 Iz2 - (I1+ I2- + I1- I2+)/2
    return d * (2 * iz1 @ iz2 - flip_flop / 2)


def build_rho_eq(system: SpinSystem, beta: float) -> np.ndarray:
    """Thermal state exp(beta * Iz)/Z, diagonal with unit trace.

    beta is the dimensionless inverse-temperature parameter (Larmor energy
    over kT). For the pair this is diag(e^b, 1, 1, e^-b) / (4 cosh^2(b/2)).
    """
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta}")
    weights = np.exp(beta * system.iz_diagonal)
    return np.diag(weights / weights.sum()).astype(np.complex128)


def build_rho_bar(system: SpinSystem) -> np.ndarray:
    """Rotating-frame equilibrium state: identity / 2^n (millikelvin regime)."""
    return np.eye(system.dim, dtype=np.complex128) / system.dim


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory parameters tying the dimensionless beta to omega0 and T.

    Exactly one of `beta` or `temperature` must be supplied; the other is
    derived through beta = hbar*omega0 / (k*T). omega0 is the Larmor
    frequency in rad/s (gyromagnetic ratio and field folded in), coupling_d
    the dipolar coupling in rad/s.
    """

    omega0: float
    coupling_d: float
    beta: float | None = None
    temperature: float | None = None

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if self.coupling_d <= 0:
            raise ValueError(f"coupling_d must be positive, got {self.coupling_d}")
        if (self.beta is None) == (self.temperature is None):
            raise ValueError("exactly one of beta or temperature must be given")
        if self.beta is None:
            if self.temperature <= 0:
                raise ValueError(f"temperature must be positive, got {self.temperature}")
            object.__setattr__(
                self, "beta", hbar * self.omega0 / (k_boltzmann * self.temperature)
            )
        else:
            if self.beta <= 0:
                raise ValueError(f"beta must be positive, got {self.beta}")
            object.__setattr__(
                self, "temperature", hbar * self.omega0 / (k_boltzmann * self.beta)
            )


def beta_from_temperature(omega0: float, temperature: float) -> float:
    """Dimensionless beta = hbar*omega0/(k*T) for a Larmor frequency in rad/s."""
    if omega0 <= 0 or temperature <= 0:
        raise ValueError("omega0 and temperature must be positive")
    return hbar * omega0 / (k_boltzmann * temperature)


__all__ = [
    "SpinSystem",
    "PhysicalParams",
    "build_iz",
    "build_h_mq",
    "build_h_dz",
    "build_rho_eq",
    "build_rho_bar",
    "beta_from_temperature",
    "SIGMA_Y",
]
