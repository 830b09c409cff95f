"""Exact arithmetic for the polytope of spin correlation matrices."""

from .errors import (
    AffineConstraintError,
    CertificateError,
    DimensionError,
    ProbabilityError,
    SearchError,
    SizeError,
    SpinCorrError,
)
from .exact_lp import (
    Feasible,
    FeasibilitySystem,
    Infeasible,
    membership,
    realizability,
    solve_feasibility,
)
from .polytope_geometry import (
    HalfSpace,
    HRepresentation,
    VRepresentation,
    affine_hull_dim,
    facet_enumerate,
    gap_search,
    h_membership,
    is_simplex,
    simplex_count_identity,
)
from .spin_core import (
    BELL_MATRIX,
    BarycentricCoords,
    BellEvaluation,
    BellInequality,
    CorrelationMatrix,
    JointSpinDistribution,
    MomentVector,
    SignVector,
    UnitDiagonalMatrix,
    barycentric3,
    bell_system,
    bell_transform,
    check_bell,
    compose3,
    correlations_of,
    evaluate_bell,
    extreme_points,
    moment_vector,
    realize,
    sample_correlations,
)

__version__ = "0.1.0"
