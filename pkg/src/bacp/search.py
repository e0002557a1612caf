"""Depth-first search and the bound-tightening minimization loop.

Branching is binary: pick the first unfixed assignment variable in the
configured matrix order, try the configured first value (1 or 0), then the
other on backtracking.  Variable selection is a strict total order, so runs
are deterministic given a configuration.

Minimization solves a sequence of decision problems "is there a plan with
max load <= K?": each solution with objective v tightens the bound to
v - 1 (credits are integral), and the first unsatisfiable bound proves the
incumbent optimal.  ``RestartPerBound`` restarts the tree for every bound;
``ContinueInTree`` keeps searching the same tree under the tightened bound,
the classic branch-and-bound refinement.  Both return the same optimum.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

from .engine import Conflict
from .instance import Solution
from .model import MatrixOrder, Model, extract_solution


class ValueOrder(Enum):
    ZERO_FIRST = "zero-first"  # try "not in this period" first
    ONE_FIRST = "one-first"  # try "in this period" first


class BoundMode(Enum):
    RESTART_PER_BOUND = "restart"
    CONTINUE_IN_TREE = "continue"


class Status(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    INCOMPLETE = "incomplete"


class BoundBelowBetaError(ValueError):
    """Decision bound below the minimum per-period load."""


@dataclass(frozen=True)
class SearchConfig:
    var_order: MatrixOrder = MatrixOrder.BY_PERIOD
    value_order: ValueOrder = ValueOrder.ONE_FIRST
    bound_mode: BoundMode = BoundMode.RESTART_PER_BOUND
    node_limit: int | None = None
    time_limit: float | None = None

    def __post_init__(self) -> None:
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass
class SearchStats:
    nodes: int = 0
    failures: int = 0
    peak_depth: int = 0
    elapsed: float = 0.0


class AnytimeEntry(NamedTuple):
    objective: int
    seconds: float
    nodes: int


@dataclass(frozen=True)
class Sat:
    solution: Solution
    stats: SearchStats


@dataclass(frozen=True)
class Unsat:
    stats: SearchStats


@dataclass(frozen=True)
class LimitReached:
    stats: SearchStats


DecisionResult = Sat | Unsat | LimitReached


@dataclass
class OptResult:
    status: Status
    best: Solution | None
    anytime: list[AnytimeEntry] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)


def select_branch(model: Model, config: SearchConfig) -> tuple[int, int] | None:
    """Next branching decision at the current fixpoint.

    Returns the unfixed assignment variable with the smallest linear index
    under the configured order, paired with the value to try first, or None
    when every assignment variable is fixed.
    """
    store = model.store
    first = 1 if config.value_order is ValueOrder.ONE_FIRST else 0
    for v in model.branch_order(config.var_order):
        if not store.is_fixed(v):
            return v, first
    return None


_SAT, _UNSAT, _LIMIT = 0, 1, 2


def _decide(
    model: Model,
    config: SearchConfig,
    max_load: int,
    stats: SearchStats,
    deadline: float | None,
    node_cap: int | None,
) -> tuple[int, Solution | None]:
    """DFS for one decision problem; the store is restored before returning.

    ``node_cap`` is an absolute ceiling on ``stats.nodes`` so a caller can
    spread one budget over several decision problems.
    """
    store = model.store
    entry = store.save()
    if isinstance(store.restrict(model.c_max, hi=max_load), Conflict):
        store.restore(entry)
        return _UNSAT, None
    variables = model.branch_order(config.var_order)
    nvars = len(variables)
    first = 1 if config.value_order is ValueOrder.ONE_FIRST else 0
    second = 1 - first
    lbs = store._lb
    ubs = store._ub
    perf = time.perf_counter
    pos = 0
    marks: list[int] = []
    fvars: list[int] = []
    fpos: list[int] = []
    ftried: list[bool] = []
    while True:
        v = -1
        while pos < nvars:
            u = variables[pos]
            if lbs[u] != ubs[u]:
                v = u
                break
            pos += 1
        if v < 0:
            solution = extract_solution(model)
            store.restore(entry)
            return _SAT, solution
        if node_cap is not None and stats.nodes >= node_cap:
            store.restore(entry)
            return _LIMIT, None
        if deadline is not None and stats.nodes & 63 == 0 and perf() > deadline:
            store.restore(entry)
            return _LIMIT, None
        marks.append(store.save())
        fvars.append(v)
        fpos.append(pos)
        ftried.append(False)
        if len(marks) > stats.peak_depth:
            stats.peak_depth = len(marks)
        stats.nodes += 1
        if not isinstance(store.assign(v, first), Conflict):
            pos += 1
            continue
        stats.failures += 1
        while True:
            if not marks:
                store.restore(entry)
                return _UNSAT, None
            if ftried[-1]:
                marks.pop()
                fvars.pop()
                fpos.pop()
                ftried.pop()
                continue
            if node_cap is not None and stats.nodes >= node_cap:
                store.restore(entry)
                return _LIMIT, None
            if deadline is not None and stats.nodes & 63 == 0 and perf() > deadline:
                store.restore(entry)
                return _LIMIT, None
            store.restore(marks[-1])
            ftried[-1] = True
            stats.nodes += 1
            if isinstance(store.assign(fvars[-1], second), Conflict):
                stats.failures += 1
                continue
            pos = fpos[-1] + 1
            break


def solve_decision(
    model: Model, max_load: int, config: SearchConfig | None = None
) -> DecisionResult:
    """Is there a feasible plan with maximum period load at most ``max_load``?

    Tightens the bound variable, searches depth-first, and restores the
    store to its pre-call state on every exit path.
    """
    if config is None:
        config = SearchConfig()
    if max_load < model.instance.load_min:
        raise BoundBelowBetaError(
            f"bound {max_load} is below the minimum period load {model.instance.load_min}"
        )
    stats = SearchStats()
    t0 = time.perf_counter()
    deadline = t0 + config.time_limit if config.time_limit is not None else None
    kind, solution = _decide(model, config, max_load, stats, deadline, config.node_limit)
    stats.elapsed = time.perf_counter() - t0
    if kind == _SAT:
        assert solution is not None
        return Sat(solution, stats)
    if kind == _UNSAT:
        return Unsat(stats)
    return LimitReached(stats)


def minimize(model: Model, config: SearchConfig | None = None) -> OptResult:
    """Minimize the maximum period load; anytime entries log each improvement.

    Starts from the instance's load cap and repeatedly solves the decision
    problem with bound v - 1 after finding objective v.  Node and time
    limits (when configured) apply to the whole run and yield INCOMPLETE.
    """
    if config is None:
        config = SearchConfig()
    if config.bound_mode is BoundMode.CONTINUE_IN_TREE:
        return _minimize_continue(model, config)
    t0 = time.perf_counter()
    stats = SearchStats()
    deadline = t0 + config.time_limit if config.time_limit is not None else None
    anytime: list[AnytimeEntry] = []
    best: Solution | None = None
    beta = model.instance.load_min
    bound = model.instance.load_max
    while True:
        kind, solution = _decide(model, config, bound, stats, deadline, config.node_limit)
        if kind == _SAT:
            assert solution is not None
            best = solution
            anytime.append(
                AnytimeEntry(solution.objective, time.perf_counter() - t0, stats.nodes)
            )
            if solution.objective - 1 < beta:
                status = Status.OPTIMAL
                break
            bound = solution.objective - 1
        elif kind == _UNSAT:
            status = Status.OPTIMAL if best is not None else Status.INFEASIBLE
            break
        else:
            status = Status.INCOMPLETE
            break
    stats.elapsed = time.perf_counter() - t0
    return OptResult(status, best, anytime, stats)


def _minimize_continue(model: Model, config: SearchConfig) -> OptResult:
    """Single-tree branch and bound: tighten the bound in place at each leaf."""
    t0 = time.perf_counter()
    perf = time.perf_counter
    stats = SearchStats()
    deadline = t0 + config.time_limit if config.time_limit is not None else None
    node_cap = config.node_limit
    anytime: list[AnytimeEntry] = []
    best: Solution | None = None
    beta = model.instance.load_min
    bound = model.instance.load_max
    store = model.store
    entry = store.save()

    def finish(status: Status) -> OptResult:
        store.restore(entry)
        stats.elapsed = perf() - t0
        return OptResult(status, best, anytime, stats)

    if isinstance(store.restrict(model.c_max, hi=bound), Conflict):
        return finish(Status.INFEASIBLE)
    variables = model.branch_order(config.var_order)
    nvars = len(variables)
    first = 1 if config.value_order is ValueOrder.ONE_FIRST else 0
    second = 1 - first
    lbs = store._lb
    ubs = store._ub
    pos = 0
    marks: list[int] = []
    fvars: list[int] = []
    fpos: list[int] = []
    ftried: list[bool] = []
    unwinding = False
    while True:
        if not unwinding:
            v = -1
            while pos < nvars:
                u = variables[pos]
                if lbs[u] != ubs[u]:
                    v = u
                    break
                pos += 1
            if v < 0:
                best = extract_solution(model)
                anytime.append(AnytimeEntry(best.objective, perf() - t0, stats.nodes))
                if best.objective - 1 < beta:
                    return finish(Status.OPTIMAL)
                bound = best.objective - 1
                unwinding = True
                continue
            if node_cap is not None and stats.nodes >= node_cap:
                return finish(Status.INCOMPLETE)
            if deadline is not None and stats.nodes & 63 == 0 and perf() > deadline:
                return finish(Status.INCOMPLETE)
            marks.append(store.save())
            fvars.append(v)
            fpos.append(pos)
            ftried.append(False)
            if len(marks) > stats.peak_depth:
                stats.peak_depth = len(marks)
            stats.nodes += 1
            if isinstance(store.assign(v, first), Conflict):
                stats.failures += 1
                unwinding = True
            else:
                pos += 1
            continue
        # unwinding: flip the deepest untried frame under the current bound
        if not marks:
            return finish(Status.OPTIMAL if best is not None else Status.INFEASIBLE)
        if ftried[-1]:
            marks.pop()
            fvars.pop()
            fpos.pop()
            ftried.pop()
            continue
        if node_cap is not None and stats.nodes >= node_cap:
            return finish(Status.INCOMPLETE)
        if deadline is not None and stats.nodes & 63 == 0 and perf() > deadline:
            return finish(Status.INCOMPLETE)
        store.restore(marks[-1])
        ftried[-1] = True
        if isinstance(store.restrict(model.c_max, hi=bound), Conflict):
            # the whole subtree under this frame is dead at the new bound
            marks.pop()
            fvars.pop()
            fpos.pop()
            ftried.pop()
            continue
        stats.nodes += 1
        if isinstance(store.assign(fvars[-1], second), Conflict):
            stats.failures += 1
            continue
        pos = fpos[-1] + 1
        unwinding = False
