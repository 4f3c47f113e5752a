"""Correlation minor norms for bipartite quantum states."""

from ._validation import InvalidStateError
from .cmn_detect import (
    INFINITY,
    CmnParams,
    CriterionResult,
    Verdict,
    bound_p1,
    bound_pinf,
    ccnr,
    cm_criterion,
    cmn,
    cmn_bound,
    cmn_from_singulars,
    detect,
    dv_criterion,
    separable_max_search,
)
from .correlation import CorrelationMatrix, correlation_matrix, fnf_blocks, operator_schmidt
from .designs import QuantumDesign, orthonormal_basis_design, sic_povm, simplex_design, verify_design
from .discord import DiscordInvariantError, OptimizerConfig, ProjectiveMeasurement, cmn_discord
from .estimators import CMNEntanglementDetector, CorrelationMinorNorms
from .hermitian_basis import HermitianBasis, generalized_gell_mann
from .states import DensityMatrix, design_state, pure_from_schmidt, werner

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "CMNEntanglementDetector",
    "CmnParams",
    "CorrelationMatrix",
    "CorrelationMinorNorms",
    "CriterionResult",
    "DensityMatrix",
    "DiscordInvariantError",
    "HermitianBasis",
    "InvalidStateError",
    "OptimizerConfig",
    "ProjectiveMeasurement",
    "QuantumDesign",
    "Verdict",
    "bound_p1",
    "bound_pinf",
    "ccnr",
    "cm_criterion",
    "cmn",
    "cmn_bound",
    "cmn_discord",
    "cmn_from_singulars",
    "correlation_matrix",
    "design_state",
    "detect",
    "dv_criterion",
    "fnf_blocks",
    "generalized_gell_mann",
    "operator_schmidt",
    "orthonormal_basis_design",
    "pure_from_schmidt",
    "separable_max_search",
    "sic_povm",
    "simplex_design",
    "verify_design",
    "werner",
]
