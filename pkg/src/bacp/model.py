"""Constraint network for curriculum balancing.

``build`` turns a :class:`~bacp.instance.CurriculumInstance` into a store
holding an m x n matrix of binary assignment variables (``x[i][j] = 1`` iff
course i goes to period j), one load variable per period, and a single
upper-bound variable ``c_max`` that the optimizer tightens.

Posted propagators, for an instance with m courses and n periods:

* load definition:      sum_i credits_i * x[i][j] == load_j        (each j)
* objective link:       load_j <= c_max                            (each j)
* assign exactly once:  sum_j x[i][j] == 1                         (each i)
* course-count cap:     sum_i x[i][j] <= courses_max               (each j)
* course-count floor:   sum_i x[i][j] >= courses_min               (each j)
* load floor:           load_j >= load_min                         (each j)
* credit conservation:  sum_j load_j == total credits  (redundant, prunes
  the bound-infeasibility proofs that per-period reasoning alone cannot do)
* prerequisites (b requires a): x[b][1] = 0, and for j = 2..n
  sum_{r<j} x[a][r] - x[b][j] >= 0

``paper_faithful=True`` drops the count floor, the load floor and the
conservation sum, leaving only the families every solution of the original
formulation must satisfy; the default network accepts exactly the
assignments that :func:`~bacp.instance.check_solution` accepts.
"""

from __future__ import annotations

from enum import Enum

from .engine import FIXPOINT, Conflict, LinearConstraint, Relation, Store
from .instance import CurriculumInstance, Solution


class MatrixOrder(Enum):
    """How the assignment matrix is read as a flat vector for branching."""

    BY_PERIOD = "by-period"  # position (j-1)*m + i: period-1 column first
    BY_COURSE = "by-course"  # position (i-1)*n + j: course-1 row first


class RootConflictError(Exception):
    """Root propagation already proves the instance infeasible."""


class NotFullyAssignedError(Exception):
    """Solution extraction requires every assignment variable to be fixed."""


class IndexOutOfRangeError(IndexError):
    pass


def linear_index(i: int, j: int, order: MatrixOrder, m: int, n: int) -> int:
    """1-based position of matrix entry (course i, period j) under an order.

    Both orders are bijections from the m x n grid onto 1..m*n.
    """
    if not (1 <= i <= m and 1 <= j <= n):
        raise IndexOutOfRangeError(f"entry ({i}, {j}) outside {m} x {n} matrix")
    if order is MatrixOrder.BY_PERIOD:
        return (j - 1) * m + i
    return (i - 1) * n + j


class Model:
    """A built constraint network over one store.

    The model owns its store and inherits its single-owner contract;
    independent models run in parallel freely.
    """

    def __init__(
        self,
        instance: CurriculumInstance,
        store: Store,
        x: tuple[tuple[int, ...], ...],
        loads: tuple[int, ...],
        c_max: int,
        paper_faithful: bool,
    ) -> None:
        self.instance = instance
        self.store = store
        self.x = x
        self.loads = loads
        self.c_max = c_max
        self.paper_faithful = paper_faithful
        self._branch_order: dict[MatrixOrder, tuple[int, ...]] = {}

    def linear_index(self, i: int, j: int, order: MatrixOrder) -> int:
        inst = self.instance
        return linear_index(i, j, order, inst.num_courses, inst.periods)

    def branch_order(self, order: MatrixOrder) -> tuple[int, ...]:
        """Assignment VarIds sorted by ascending linear index under ``order``."""
        cached = self._branch_order.get(order)
        if cached is None:
            m = self.instance.num_courses
            n = self.instance.periods
            if order is MatrixOrder.BY_PERIOD:
                cached = tuple(
                    self.x[i][j] for j in range(n) for i in range(m)
                )
            else:
                cached = tuple(
                    self.x[i][j] for i in range(m) for j in range(n)
                )
            self._branch_order[order] = cached
        return cached


def build(inst: CurriculumInstance, paper_faithful: bool = False) -> Model:
    """Create variables, post all propagator families and run root propagation.

    The caller is responsible for screening the instance with
    ``validate_instance`` first; ``build`` does not repeat those checks.
    Raises :class:`RootConflictError` when root propagation fails.
    """
    m = inst.num_courses
    n = inst.periods
    credits = inst.credits
    store = Store()
    x = tuple(tuple(store.new_var(0, 1) for _ in range(n)) for _ in range(m))
    loads = tuple(store.new_var(0, inst.load_max) for _ in range(n))
    c_max = store.new_var(inst.load_min, inst.load_max)

    for j in range(n):
        store.post(
            LinearConstraint(
                tuple((credits[i], x[i][j]) for i in range(m)) + ((-1, loads[j]),),
                Relation.EQ,
                0,
            )
        )
        store.post(LinearConstraint(((1, loads[j]), (-1, c_max)), Relation.LE, 0))
    for i in range(m):
        store.post(
            LinearConstraint(tuple((1, x[i][j]) for j in range(n)), Relation.EQ, 1)
        )
    for j in range(n):
        col = tuple((1, x[i][j]) for i in range(m))
        store.post(LinearConstraint(col, Relation.LE, inst.courses_max))
        if not paper_faithful:
            store.post(LinearConstraint(col, Relation.GE, inst.courses_min))
            store.post(LinearConstraint(((1, loads[j]),), Relation.GE, inst.load_min))
    if not paper_faithful:
        store.post(
            LinearConstraint(
                tuple((1, loads[j]) for j in range(n)), Relation.EQ, inst.total_credits
            )
        )
    for b, a in sorted(inst.prerequisites):
        xb = x[b - 1]
        xa = x[a - 1]
        out = store.restrict(xb[0], hi=0)  # b needs an earlier course, so not period 1
        if isinstance(out, Conflict):
            raise RootConflictError(
                f"prerequisite on course {inst.courses[b - 1].id} conflicts at the root"
            )
        for j in range(2, n + 1):
            store.post(
                LinearConstraint(
                    tuple((1, xa[r]) for r in range(j - 1)) + ((-1, xb[j - 1]),),
                    Relation.GE,
                    0,
                )
            )

    out = store.propagate()
    if out is not FIXPOINT:
        assert isinstance(out, Conflict)
        raise RootConflictError(f"root propagation failed on constraint {out.constraint}")
    return Model(inst, store, x, loads, c_max, paper_faithful)


def extract_solution(model: Model) -> Solution:
    """Read the assignment out of a fully-fixed store.

    Requires every matrix variable to be fixed (e.g. after search reached a
    leaf at fixpoint); the result always satisfies the full checker.
    """
    store = model.store
    inst = model.instance
    period_of: dict[int, int] = {}
    for i, row in enumerate(model.x, start=1):
        for j, v in enumerate(row, start=1):
            lb, ub = store.bounds(v)
            if lb != ub:
                raise NotFullyAssignedError(
                    f"assignment variable for course {inst.courses[i - 1].id}, "
                    f"period {j} is not fixed"
                )
            if lb == 1:
                period_of[i] = j
    return Solution.from_assignment(inst, period_of)
