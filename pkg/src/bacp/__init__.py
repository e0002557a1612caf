"""Balanced academic curriculum solver.

Assign courses to academic periods so the heaviest period carries as few
credits as possible, subject to prerequisite order and per-period bounds on
credit load and course count.  The package bundles the finite-domain solver,
an exhaustive oracle for small instances, and a benchmark CLI that exposes
the variable- and value-ordering heuristics whose choice makes the
difference between milliseconds and hopeless search on the real curricula.
"""

from .engine import (
    Conflict,
    FIXPOINT,
    Fixpoint,
    LinearConstraint,
    Relation,
    Store,
)
from .instance import (
    Course,
    CurriculumInstance,
    Solution,
    Violation,
    ViolationKind,
    check_solution,
    compute_loads,
    objective,
    parse_instance,
    parse_solution,
    serialize_instance,
    serialize_solution,
    validate_instance,
)
from .model import (
    MatrixOrder,
    Model,
    NotFullyAssignedError,
    RootConflictError,
    build,
    extract_solution,
    linear_index,
)
from .oracle import GenParams, OracleResult, SplitMix64, TooLargeError, brute_force, gen_instance
from .search import (
    AnytimeEntry,
    BoundMode,
    LimitReached,
    OptResult,
    Sat,
    SearchConfig,
    SearchStats,
    Status,
    Unsat,
    ValueOrder,
    minimize,
    select_branch,
    solve_decision,
)

__version__ = "0.1.0"

__all__ = [
    "AnytimeEntry",
    "BoundMode",
    "Conflict",
    "Course",
    "CurriculumInstance",
    "FIXPOINT",
    "Fixpoint",
    "GenParams",
    "LimitReached",
    "LinearConstraint",
    "MatrixOrder",
    "Model",
    "NotFullyAssignedError",
    "OptResult",
    "OracleResult",
    "Relation",
    "RootConflictError",
    "Sat",
    "SearchConfig",
    "SearchStats",
    "Solution",
    "SplitMix64",
    "Status",
    "Store",
    "TooLargeError",
    "Unsat",
    "ValueOrder",
    "Violation",
    "ViolationKind",
    "brute_force",
    "build",
    "check_solution",
    "compute_loads",
    "extract_solution",
    "gen_instance",
    "linear_index",
    "minimize",
    "objective",
    "parse_instance",
    "parse_solution",
    "select_branch",
    "serialize_instance",
    "serialize_solution",
    "solve_decision",
    "validate_instance",
]
