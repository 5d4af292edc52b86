"""Solvers, counts, and complexity bounds for optimization under an L1 constraint.

The toolkit is organized around one primitive: a streaming, exactly-once
enumeration of the integer points of a scaled l1 ball in a pinned
canonical order (:mod:`l1opt.lattice`).  On top of it sit exact counts
and covering-style bound formulas (:mod:`l1opt.counting`), an
exhaustive exact solver for l1-constrained integer programs with
optional positive weights (:mod:`l1opt.solver`), an a-priori
oracle-complexity estimator for integer programs over bounded convex
regions (:mod:`l1opt.complexity`), and an additive approximation scheme
for Lipschitz problems plus a mixed integer/continuous decomposition
(:mod:`l1opt.ptas`).
"""

from .complexity import (
    BoundReport,
    ConvexOptBackend,
    CoverCheck,
    LinearRegionBackend,
    estimate_bound,
    verify_cover,
)
from .counting import (
    BigBound,
    count_l1_lattice,
    count_l2_lattice_brute,
    count_linf_lattice,
    covering_bound_l1,
    covering_bounds_linf,
    estimate_gaussian_width,
    gaussian_width_bound,
    l1_count_lower_bound,
    l1_count_upper_bound,
    l2_count_bounds,
    oracle_complexity_bound,
)
from .errors import (
    GridTooLargeError,
    InnerSolverError,
    InvalidDimensionError,
    InvalidWeightsError,
    OutOfBallError,
    ProblemFileError,
    RegionInfeasibleError,
    RegionUnboundedError,
    ShapeMismatchError,
)
from .lattice import (
    EnumerationPartition,
    LatticePoint,
    MultisetVector,
    SignPattern,
    canonical_ordinal,
    enumeration_partitions,
    first_multiset,
    gaps_to_multiset,
    iter_l1_points,
    iter_multisets,
    multiset_gaps,
    next_multiset,
    sign_patterns,
)
from .lp import LPResult, lp_solve
from .ptas import (
    ApproxSolution,
    InnerSolution,
    LipschitzProblem,
    MixedProblem,
    MixedSolution,
    check_lipschitz,
    fine_grid_reference,
    grid_radius,
    linear_lipschitz_constant,
    linear_mixed_inner_solver,
    quadratic_lipschitz_constant,
    solve_lipschitz_ptas,
    solve_mixed_integer,
    solve_weighted_lipschitz_ptas,
)
from .solver import (
    ProblemInstance,
    QuadraticConstraint,
    Solution,
    SolveOptions,
    WeightedL1Spec,
    brute_force_box_solve,
    make_linear_oracle,
    make_quadratic_oracle,
    solve_l1_ip,
    solve_weighted_l1_ip,
)

__version__ = "0.1.0"
