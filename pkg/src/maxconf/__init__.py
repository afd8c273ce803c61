"""Maximum-confidence discrimination of quantum state ensembles.

Computes per-member confidence bounds and the effects attaining them,
completes those effects into a measurement with an inconclusive remainder,
verifies the bounds against the equivalent bipartite no-signalling
picture, and analyzes local filters (confidence monotonicity, Schmidt
spectrum flattening).
"""

from .ensembles import (
    BipartiteState,
    Ensemble,
    SchmidtDecomposition,
    SubspaceProjector,
    allowed_subspace,
    purify,
    rho_left,
    schmidt,
)
from .linalg import (
    EigenSystem,
    hermitian_eigen,
    partial_trace_left,
    support_inv_sqrt,
)
from .measurement import (
    POM,
    ConfidenceReport,
    SimulationResult,
    complete_pom,
    confidence_of,
    confidence_report,
    max_confidence,
    optimal_effect,
    simulate_measurement,
)
from .nosignalling import (
    ConditionalRightState,
    bound_bipartite,
    conditional_right_state,
    confidence_bipartite,
    marginal_invariance,
    state_leakage,
    subspace_leakage,
)
from .specio import SpecError, load_kraus, parse_spec, read_spec
from .transforms import (
    ConcentrationResult,
    KrausOperator,
    MonotonicityRecord,
    ResolutionCheck,
    TwoStepFilter,
    apply_kraus,
    concentrate,
    monotonicity_check,
    projective_resolution,
    two_step_filter,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteState",
    "ConcentrationResult",
    "ConditionalRightState",
    "ConfidenceReport",
    "EigenSystem",
    "Ensemble",
    "KrausOperator",
    "MonotonicityRecord",
    "POM",
    "ResolutionCheck",
    "SchmidtDecomposition",
    "SimulationResult",
    "SpecError",
    "SubspaceProjector",
    "TwoStepFilter",
    "allowed_subspace",
    "apply_kraus",
    "bound_bipartite",
    "complete_pom",
    "concentrate",
    "conditional_right_state",
    "confidence_bipartite",
    "confidence_of",
    "confidence_report",
    "hermitian_eigen",
    "load_kraus",
    "marginal_invariance",
    "max_confidence",
    "monotonicity_check",
    "optimal_effect",
    "parse_spec",
    "partial_trace_left",
    "projective_resolution",
    "purify",
    "read_spec",
    "rho_left",
    "schmidt",
    "simulate_measurement",
    "state_leakage",
    "subspace_leakage",
    "support_inv_sqrt",
    "two_step_filter",
]
