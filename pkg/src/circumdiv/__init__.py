"""Generalized circumradius solvers and diversity embeddings.

The circumradius of a finite point set with respect to a convex body
("kernel") is the least scaling of the body whose translate covers the
set.  Running that functional over all subsets of a point set yields a
diversity, a set-valued generalization of a metric.  This package
solves the circumradius problem for a family of kernels, manipulates
finite diversity tables, and decides or constructs embeddings of
diversities back into kernel form.
"""

from .config import DEFAULT_SEED, TOLS, set_tolerances, thread_count
from .errors import (
    BudgetExceededError,
    CircumdivError,
    DimensionMismatchError,
    EmbeddingVerificationError,
    InputFormatError,
    InvalidKernelError,
    LabelMismatchError,
    NotDiameterError,
    NotEmbeddableError,
    NotSemimetricError,
    NotSymmetricError,
    PreconditionUnmetError,
    SolverFailureError,
    SolverMismatchError,
    UnsupportedKernelError,
)
from .geometry import (
    AffineImage,
    AffineMap,
    Ball,
    HPolytope,
    Kernel,
    Parallelotope,
    PointSet,
    Product,
    SimplexNeg,
    SimplexPos,
    apply_map,
    convex_hull_2d,
    hausdorff_distance,
    hpolytope_from_points_2d,
    in_hull,
    kernel_vertices,
    minkowski_sum,
    to_hpolytope,
)
from .linprog import LinearProgram, LpResult, LpStatus, solve as solve_lp
from .circumradius import (
    Circumsolution,
    CoreSetResult,
    UnionTranslation,
    ball_core_set,
    check_union_translation,
    circumradius,
    core_set,
    min_enclosing_ball,
    min_union_translation,
    union_translation_witness,
)
from .diversity import (
    AxiomReport,
    AxiomViolation,
    DiversityOracle,
    FiniteDiversity,
    SymmetricProfile,
    check_axioms,
    diameter_diversity,
    induced_metric,
    is_diameter,
    kernel_diversity,
    kernel_radius_oracle,
    l1_diversity,
    l1_value,
    max_combine,
    scale,
    symmetric_diversity,
    symmetric_profile,
)
from .embed import (
    BallDecision,
    Embedding,
    NegativeTypeReport,
    SymmetricCriterionWitness,
    ball_embed_decide,
    diameter_embed,
    negative_type_check,
    profile_embeddable,
    simplex_embed_verify,
    symmetric_embed,
    symmetric_embeddable,
    three_point_embed,
    verified_embedding,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
