"""A minimal finite-domain kernel for 0/1 and bounded-integer variables.

Variables carry interval domains ``[lb, ub]`` (no holes).  Constraints are
integer linear sums compared against a constant with ``<=``, ``==`` or
``>=``.  Propagation enforces bounds consistency: for each constraint the
minimum/maximum activity (the sum's reachable range under current bounds)
is maintained incrementally, and variable bounds are tightened until no
further change is possible (fixpoint) or some constraint's activity range
leaves its allowed window (conflict).

Scheduling is a FIFO queue of constraint ids keyed by variable-modification
events; a constraint is enqueued at most once while pending.  All domain
changes are trailed, so search can snapshot the store with ``save`` and
roll back with ``restore`` in LIFO order.

A store is single-owner: one task mutates it at a time.  Independent stores
share nothing and can run in parallel freely.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum


class EngineError(Exception):
    pass


class InvalidBoundsError(EngineError):
    pass


class UnknownVariableError(EngineError):
    pass


class ValueOutsideDomainError(EngineError):
    pass


class InvalidMarkError(EngineError):
    pass


class Relation(Enum):
    LE = "<="
    EQ = "=="
    GE = ">="


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coeff * var for coeff, var in terms) relation rhs``.

    Coefficients are nonzero integers and no variable may appear twice.
    A variable right-hand side is expressed as a term with coefficient -1
    and rhs 0.
    """

    terms: tuple[tuple[int, int], ...]
    relation: Relation
    rhs: int

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for coeff, var in self.terms:
            if coeff == 0:
                raise ValueError("zero coefficient in linear constraint")
            if var in seen:
                raise ValueError(f"variable {var} appears twice in one constraint")
            seen.add(var)


@dataclass(frozen=True)
class Fixpoint:
    """Propagation reached a state no propagator can narrow further."""


@dataclass(frozen=True)
class Conflict:
    """Some constraint cannot be satisfied under current bounds.

    ``constraint`` is the id of the violated constraint, or None when a
    direct domain restriction (assign/restrict) emptied a domain.
    """

    constraint: int | None


FIXPOINT = Fixpoint()

PropagationOutcome = Fixpoint | Conflict


class Store:
    """Variable store plus posted constraints, propagation and trailing."""

    def __init__(self) -> None:
        self._lb: list[int] = []
        self._ub: list[int] = []
        # per-constraint data, indexed by constraint id
        self._terms: list[tuple[tuple[int, int], ...]] = []
        self._lo: list[int | None] = []
        self._hi: list[int | None] = []
        self._minact: list[int] = []
        self._maxact: list[int] = []
        # watchers[v] = [(constraint id, coeff), ...]
        self._watchers: list[list[tuple[int, int]]] = []
        self._queue: deque[int] = deque()
        self._inqueue: list[bool] = []
        # trail of (var, old_lb, old_ub); marks of (token, trail length)
        self._trail: list[tuple[int, int, int]] = []
        self._marks: list[tuple[int, int]] = []
        self._next_mark = 0

    # -- variables ---------------------------------------------------------

    def new_var(self, lb: int, ub: int) -> int:
        if lb > ub:
            raise InvalidBoundsError(f"empty initial domain [{lb}, {ub}]")
        vid = len(self._lb)
        self._lb.append(lb)
        self._ub.append(ub)
        self._watchers.append([])
        return vid

    @property
    def num_vars(self) -> int:
        return len(self._lb)

    def lb(self, v: int) -> int:
        return self._lb[v]

    def ub(self, v: int) -> int:
        return self._ub[v]

    def bounds(self, v: int) -> tuple[int, int]:
        return self._lb[v], self._ub[v]

    def is_fixed(self, v: int) -> bool:
        return self._lb[v] == self._ub[v]

    def value(self, v: int) -> int:
        """The value of a fixed variable."""
        lb, ub = self._lb[v], self._ub[v]
        if lb != ub:
            raise ValueError(f"variable {v} is not fixed (domain [{lb}, {ub}])")
        return lb

    def domains(self) -> tuple[tuple[int, int], ...]:
        """Snapshot of every (lb, ub) pair, e.g. for restore-exactness checks."""
        return tuple(zip(self._lb, self._ub))

    # -- constraints -------------------------------------------------------

    def post(self, c: LinearConstraint) -> int:
        """Register a constraint; it is enforced from the next propagation on."""
        nvars = len(self._lb)
        for _, v in c.terms:
            if not 0 <= v < nvars:
                raise UnknownVariableError(f"no variable {v} in this store")
        cid = len(self._terms)
        self._terms.append(tuple(c.terms))
        if c.relation is Relation.LE:
            self._lo.append(None)
            self._hi.append(c.rhs)
        elif c.relation is Relation.GE:
            self._lo.append(c.rhs)
            self._hi.append(None)
        else:
            self._lo.append(c.rhs)
            self._hi.append(c.rhs)
        mn = mx = 0
        for w, v in c.terms:
            if w > 0:
                mn += w * self._lb[v]
                mx += w * self._ub[v]
            else:
                mn += w * self._ub[v]
                mx += w * self._lb[v]
            self._watchers[v].append((cid, w))
        self._minact.append(mn)
        self._maxact.append(mx)
        self._inqueue.append(True)
        self._queue.append(cid)
        return cid

    # -- propagation -------------------------------------------------------

    def propagate(self) -> PropagationOutcome:
        """Run all pending propagators to fixpoint or conflict."""
        cid = self._propagate()
        return FIXPOINT if cid < 0 else Conflict(cid)

    def assign(self, v: int, value: int) -> PropagationOutcome:
        """Fix ``v`` to ``value`` (must be within its domain) and propagate."""
        lb, ub = self._lb[v], self._ub[v]
        if not lb <= value <= ub:
            raise ValueOutsideDomainError(
                f"value {value} outside domain [{lb}, {ub}] of variable {v}"
            )
        if lb != ub:
            self._set_bounds(v, value, value)
        cid = self._propagate()
        return FIXPOINT if cid < 0 else Conflict(cid)

    def restrict(self, v: int, lo: int | None = None, hi: int | None = None) -> PropagationOutcome:
        """Shrink ``v``'s domain to its intersection with [lo, hi], then propagate.

        An empty intersection reports Conflict(None) without touching the store.
        """
        lb, ub = self._lb[v], self._ub[v]
        nlb = lb if lo is None else max(lb, lo)
        nub = ub if hi is None else min(ub, hi)
        if nlb > nub:
            return Conflict(None)
        if (nlb, nub) != (lb, ub):
            self._set_bounds(v, nlb, nub)
        cid = self._propagate()
        return FIXPOINT if cid < 0 else Conflict(cid)

    def _set_bounds(self, v: int, nlb: int, nub: int) -> None:
        """Trailed domain shrink plus incremental activity updates."""
        lb, ub = self._lb[v], self._ub[v]
        self._trail.append((v, lb, ub))
        self._lb[v] = nlb
        self._ub[v] = nub
        dlb = nlb - lb
        dub = nub - ub
        minact = self._minact
        maxact = self._maxact
        inqueue = self._inqueue
        queue = self._queue
        for cid, w in self._watchers[v]:
            if w > 0:
                minact[cid] += w * dlb
                maxact[cid] += w * dub
            else:
                minact[cid] += w * dub
                maxact[cid] += w * dlb
            if not inqueue[cid]:
                inqueue[cid] = True
                queue.append(cid)

    def _propagate(self) -> int:
        """Fixpoint loop. Returns the violated constraint id, or -1 at fixpoint."""
        queue = self._queue
        inqueue = self._inqueue
        lbs = self._lb
        ubs = self._ub
        los = self._lo
        his = self._hi
        minact = self._minact
        maxact = self._maxact
        terms = self._terms
        watchers = self._watchers
        trail = self._trail
        while queue:
            cid = queue.popleft()
            inqueue[cid] = False
            lo = los[cid]
            hi = his[cid]
            mn = minact[cid]
            mx = maxact[cid]
            if (hi is not None and mn > hi) or (lo is not None and mx < lo):
                for pending in queue:
                    inqueue[pending] = False
                queue.clear()
                return cid
            if (hi is None or mx <= hi) and (lo is None or mn >= lo):
                continue  # entailed under current bounds; nothing to tighten
            for w, v in terms[cid]:
                # a previous tightening in this scan may have flipped the
                # constraint into conflict; recheck before using its slack
                if (hi is not None and mn > hi) or (lo is not None and mx < lo):
                    for pending in queue:
                        inqueue[pending] = False
                    queue.clear()
                    return cid
                lv = lbs[v]
                uv = ubs[v]
                if lv == uv:
                    continue
                if w > 0:
                    if hi is not None:
                        new = (hi - mn + w * lv) // w
                        if new < uv:
                            trail.append((v, lv, uv))
                            ubs[v] = new
                            d = new - uv
                            for c2, w2 in watchers[v]:
                                if w2 > 0:
                                    maxact[c2] += w2 * d
                                else:
                                    minact[c2] += w2 * d
                                if not inqueue[c2]:
                                    inqueue[c2] = True
                                    queue.append(c2)
                            uv = new
                            mn = minact[cid]
                            mx = maxact[cid]
                    if lo is not None:
                        new = -((mx - lo - w * uv) // w)
                        if new > lv:
                            trail.append((v, lv, uv))
                            lbs[v] = new
                            d = new - lv
                            for c2, w2 in watchers[v]:
                                if w2 > 0:
                                    minact[c2] += w2 * d
                                else:
                                    maxact[c2] += w2 * d
                                if not inqueue[c2]:
                                    inqueue[c2] = True
                                    queue.append(c2)
                            mn = minact[cid]
                            mx = maxact[cid]
                else:
                    if hi is not None:
                        new = -((hi - mn + w * uv) // -w)
                        if new > lv:
                            trail.append((v, lv, uv))
                            lbs[v] = new
                            d = new - lv
                            for c2, w2 in watchers[v]:
                                if w2 > 0:
                                    minact[c2] += w2 * d
                                else:
                                    maxact[c2] += w2 * d
                                if not inqueue[c2]:
                                    inqueue[c2] = True
                                    queue.append(c2)
                            lv = new
                            mn = minact[cid]
                            mx = maxact[cid]
                    if lo is not None:
                        new = (lo - mx + w * lv) // w
                        if new < uv:
                            trail.append((v, lv, uv))
                            ubs[v] = new
                            d = new - uv
                            for c2, w2 in watchers[v]:
                                if w2 > 0:
                                    maxact[c2] += w2 * d
                                else:
                                    minact[c2] += w2 * d
                                if not inqueue[c2]:
                                    inqueue[c2] = True
                                    queue.append(c2)
                            mn = minact[cid]
                            mx = maxact[cid]
        return -1

    # -- state save/restore --------------------------------------------------

    def save(self) -> int:
        """Snapshot the current domains; returns a mark for ``restore``."""
        token = self._next_mark
        self._next_mark += 1
        self._marks.append((token, len(self._trail)))
        return token

    def restore(self, mark: int) -> None:
        """Roll every domain back to its state at ``mark`` (LIFO; consumes it).

        Restoring an outer mark pops any inner marks taken after it.  The
        constraint set is unchanged.  A mark that was already popped raises
        InvalidMarkError.
        """
        target = -1
        for idx in range(len(self._marks) - 1, -1, -1):
            if self._marks[idx][0] == mark:
                target = idx
                break
        if target < 0:
            raise InvalidMarkError(f"mark {mark} is not on the save stack")
        tlen = self._marks[target][1]
        del self._marks[target:]
        trail = self._trail
        lbs = self._lb
        ubs = self._ub
        minact = self._minact
        maxact = self._maxact
        watchers = self._watchers
        while len(trail) > tlen:
            v, olb, oub = trail.pop()
            dlb = olb - lbs[v]
            dub = oub - ubs[v]
            lbs[v] = olb
            ubs[v] = oub
            for cid, w in watchers[v]:
                if w > 0:
                    minact[cid] += w * dlb
                    maxact[cid] += w * dub
                else:
                    minact[cid] += w * dub
                    maxact[cid] += w * dlb
        if self._queue:
            for pending in self._queue:
                self._inqueue[pending] = False
            self._queue.clear()
