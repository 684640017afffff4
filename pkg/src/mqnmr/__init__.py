"""Multiple-quantum NMR dynamics of dipolar-coupled spins with relaxation.

Simulates the four-period multiple-quantum experiment for a spin pair or a
uniform nearest-neighbour chain, extracts coherence-order intensities, and
computes two-qubit entanglement measures of the prepared state. Exact
density-matrix propagation and closed-form results are both provided and
cross-validate each other.
"""

from .coherence import (
    CoherenceSpectrum,
    RegimeDiagnostic,
    chain_pipeline_normalization,
    closed_form_chain,
    closed_form_pair,
    extract_spectrum,
    regime_check,
)
from .dynamics import (
    ExperimentParams,
    StageDensities,
    longitudinal_magnetization,
    propagate_full,
    propagate_preparation,
)
from .entanglement import (
    ConcurrenceResult,
    concurrence_closed_form,
    concurrence_from_coherences,
    concurrence_numeric,
    entanglement_fluctuation,
    onset_temperature,
    spin_flip,
)
from .linalg import (
    conjugate,
    hermitian_eigendecomposition,
    hermitian_sqrt,
    trace_product,
    unitary_exp,
)
from .spin_system import (
    PhysicalParams,
    SpinSystem,
    beta_from_temperature,
    build_h_dz,
    build_h_mq,
    build_iz,
    build_rho_bar,
    build_rho_eq,
)

__version__ = "0.1.0"

__all__ = [
    "CoherenceSpectrum",
    "ConcurrenceResult",
    "ExperimentParams",
    "PhysicalParams",
    "RegimeDiagnostic",
    "SpinSystem",
    "StageDensities",
    "beta_from_temperature",
    "build_h_dz",
    "build_h_mq",
    "build_iz",
    "build_rho_bar",
    "build_rho_eq",
    "chain_pipeline_normalization",
    "closed_form_chain",
    "closed_form_pair",
    "concurrence_closed_form",
    "concurrence_from_coherences",
    "concurrence_numeric",
    "conjugate",
    "entanglement_fluctuation",
    "extract_spectrum",
    "hermitian_eigendecomposition",
    "hermitian_sqrt",
    "longitudinal_magnetization",
    "onset_temperature",
    "propagate_full",
    "propagate_preparation",
    "regime_check",
    "spin_flip",
    "trace_product",
    "unitary_exp",
]
