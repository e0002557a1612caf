"""Problem data for balanced curriculum design.

A curriculum instance is a list of courses (each worth a number of credits),
a number of academic periods, per-period bounds on credit load and course
count, and a set of prerequisite pairs.  A plan assigns every course to a
period; its objective is the maximum per-period credit load.

This module owns the instance and solution file formats, structural
validation, and the full feasibility check used as ground truth by the
solver and the brute-force oracle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

_ID_RE = re.compile(r"[A-Za-z0-9_]+\Z")

_DIRECTIVES = ("periods", "load_min", "load_max", "courses_min", "courses_max")


class ParseError(ValueError):
    """Malformed instance or solution text. Carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateCourseError(ParseError):
    pass


class UnknownCourseError(ParseError):
    pass


class CyclicPrerequisitesError(ParseError):
    def __init__(self, cycle: list[str], line: int | None = None):
        super().__init__("prerequisites form a cycle: " + " -> ".join(cycle), line)
        self.cycle = cycle


class MissingDirectiveError(ParseError):
    def __init__(self, name: str):
        super().__init__(f"missing directive '{name}'")
        self.name = name


class NonPositiveCreditsError(ParseError):
    pass


class OutOfRangePeriodError(ValueError):
    """An assignment maps a course to a period outside 1..periods."""


@dataclass(frozen=True, slots=True)
class Course:
    """One course: an identifier token and its credit weight (effort units)."""

    id: str
    credits: int

    def __post_init__(self) -> None:
        if not _ID_RE.match(self.id):
            raise ValueError(f"invalid course id {self.id!r}")
        if self.credits < 1:
            raise ValueError(f"course {self.id}: credits must be >= 1")


@dataclass(frozen=True)
class CurriculumInstance:
    """A full problem instance.

    ``courses`` is ordered: its declaration order is the canonical curriculum
    order used by the search heuristics.  ``prerequisites`` holds pairs
    ``(b, a)`` of 1-based course indices meaning course ``b`` requires course
    ``a`` in a strictly earlier period.
    """

    courses: tuple[Course, ...]
    periods: int
    load_min: int
    load_max: int
    courses_min: int
    courses_max: int
    prerequisites: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.periods < 1:
            raise ValueError("periods must be >= 1")
        if not 0 <= self.load_min <= self.load_max:
            raise ValueError("need 0 <= load_min <= load_max")
        if not 0 <= self.courses_min <= self.courses_max:
            raise ValueError("need 0 <= courses_min <= courses_max")
        seen: set[str] = set()
        for c in self.courses:
            if c.id in seen:
                raise ValueError(f"duplicate course id {c.id!r}")
            seen.add(c.id)
        m = len(self.courses)
        for b, a in self.prerequisites:
            if not (1 <= a <= m and 1 <= b <= m):
                raise ValueError(f"prerequisite ({b}, {a}) references unknown course")
            if a == b:
                raise ValueError(f"course {self.courses[a - 1].id} cannot require itself")
        cycle = _find_cycle(m, self.prerequisites)
        if cycle is not None:
            names = [self.courses[i - 1].id for i in cycle]
            raise ValueError("prerequisites form a cycle: " + " -> ".join(names))

    @property
    def num_courses(self) -> int:
        return len(self.courses)

    @property
    def credits(self) -> tuple[int, ...]:
        return tuple(c.credits for c in self.courses)

    @property
    def total_credits(self) -> int:
        return sum(c.credits for c in self.courses)

    def index_of(self, course_id: str) -> int:
        """1-based index of a course id; raises KeyError when undeclared."""
        try:
            return self._index[course_id]
        except AttributeError:
            index = {c.id: i for i, c in enumerate(self.courses, start=1)}
            object.__setattr__(self, "_index", index)
            return index[course_id]


@dataclass(frozen=True)
class Solution:
    """A total assignment with its derived per-period loads and objective."""

    period_of: dict[int, int]
    loads: tuple[int, ...]
    objective: int

    @classmethod
    def from_assignment(
        cls, inst: CurriculumInstance, period_of: Mapping[int, int]
    ) -> "Solution":
        loads = compute_loads(inst, period_of)
        return cls(dict(period_of), tuple(loads), max(loads))


class ViolationKind(Enum):
    UNASSIGNED = "unassigned"
    PREREQUISITE = "prerequisite"
    LOAD_BELOW_MIN = "load_below_min"
    LOAD_ABOVE_MAX = "load_above_max"
    COURSES_BELOW_MIN = "courses_below_min"
    COURSES_ABOVE_MAX = "courses_above_max"


@dataclass(frozen=True)
class Violation:
    """One violated constraint occurrence.

    ``where`` identifies the subject: ``(course,)`` for UNASSIGNED,
    ``(b, a)`` for PREREQUISITE, ``(period,)`` for the four bound kinds.
    """

    kind: ViolationKind
    where: tuple[int, ...]
    detail: str


def _find_cycle(m: int, pairs: Iterable[tuple[int, int]]) -> list[int] | None:
    """Return one cycle (as a 1-based index path) in the requires-graph, or None."""
    requires: dict[int, list[int]] = {}
    for b, a in pairs:
        requires.setdefault(b, []).append(a)
    color = [0] * (m + 1)  # 0 unvisited, 1 on stack, 2 done
    stack_path: list[int] = []

    def visit(v: int) -> list[int] | None:
        color[v] = 1
        stack_path.append(v)
        for w in requires.get(v, ()):
            if color[w] == 1:
                return stack_path[stack_path.index(w):] + [w]
            if color[w] == 0:
                found = visit(w)
                if found is not None:
                    return found
        stack_path.pop()
        color[v] = 2
        return None

    for v in range(1, m + 1):
        if color[v] == 0:
            found = visit(v)
            if found is not None:
                return found
    return None


def parse_instance(text: str | Iterable[str]) -> CurriculumInstance:
    """Parse the line-oriented instance format.

    Format: ``#`` starts a comment, blank lines are ignored, tokens are
    whitespace-separated.  The five header directives (``periods``,
    ``load_min``, ``load_max``, ``courses_min``, ``courses_max``) appear
    exactly once each, in any order, before any ``course`` line.
    ``course <id> <credits>`` declares courses in curriculum order and
    ``prereq <b> <a>`` states that ``b`` requires ``a`` earlier; both ids
    must already be declared.
    """
    if isinstance(text, str):
        lines: Iterable[str] = text.splitlines()
    else:
        lines = text

    directives: dict[str, int] = {}
    courses: list[Course] = []
    index: dict[str, int] = {}
    prereqs: set[tuple[int, int]] = set()

    for lineno, raw in enumerate(lines, start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        head = tokens[0]
        if head in _DIRECTIVES:
            if courses:
                raise ParseError(f"directive '{head}' after course declarations", lineno)
            if head in directives:
                raise ParseError(f"duplicate directive '{head}'", lineno)
            if len(tokens) != 2:
                raise ParseError(f"expected '{head} <integer>'", lineno)
            try:
                directives[head] = int(tokens[1])
            except ValueError:
                raise ParseError(f"'{head}' takes an integer, got {tokens[1]!r}", lineno) from None
        elif head == "course":
            if len(tokens) != 3:
                raise ParseError("expected 'course <id> <credits>'", lineno)
            cid = tokens[1]
            if not _ID_RE.match(cid):
                raise ParseError(f"invalid course id {cid!r}", lineno)
            if cid in index:
                raise DuplicateCourseError(f"course {cid!r} declared twice", lineno)
            try:
                credits = int(tokens[2])
            except ValueError:
                raise ParseError(f"credits must be an integer, got {tokens[2]!r}", lineno) from None
            if credits < 1:
                raise NonPositiveCreditsError(f"course {cid!r}: credits must be >= 1", lineno)
            index[cid] = len(courses) + 1
            courses.append(Course(cid, credits))
        elif head == "prereq":
            if len(tokens) != 3:
                raise ParseError("expected 'prereq <course> <prerequisite>'", lineno)
            b_id, a_id = tokens[1], tokens[2]
            for cid in (b_id, a_id):
                if cid not in index:
                    raise UnknownCourseError(f"prerequisite names undeclared course {cid!r}", lineno)
            if b_id == a_id:
                raise ParseError(f"course {b_id!r} cannot require itself", lineno)
            prereqs.add((index[b_id], index[a_id]))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)

    for name in _DIRECTIVES:
        if name not in directives:
            raise MissingDirectiveError(name)

    cycle = _find_cycle(len(courses), prereqs)
    if cycle is not None:
        raise CyclicPrerequisitesError([courses[i - 1].id for i in cycle])

    try:
        return CurriculumInstance(
            courses=tuple(courses),
            periods=directives["periods"],
            load_min=directives["load_min"],
            load_max=directives["load_max"],
            courses_min=directives["courses_min"],
            courses_max=directives["courses_max"],
            prerequisites=frozenset(prereqs),
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def serialize_instance(inst: CurriculumInstance) -> str:
    """Canonical text form; ``parse_instance`` of the result reproduces ``inst``."""
    out = [
        f"periods {inst.periods}",
        f"load_min {inst.load_min}",
        f"load_max {inst.load_max}",
        f"courses_min {inst.courses_min}",
        f"courses_max {inst.courses_max}",
    ]
    out.extend(f"course {c.id} {c.credits}" for c in inst.courses)
    for b, a in sorted(inst.prerequisites):
        out.append(f"prereq {inst.courses[b - 1].id} {inst.courses[a - 1].id}")
    return "\n".join(out) + "\n"


def parse_solution(text: str | Iterable[str], inst: CurriculumInstance) -> dict[int, int]:
    """Parse a solution file: one ``<course_id> <period>`` line per course.

    Every declared course must appear exactly once; periods are 1-based.
    """
    if isinstance(text, str):
        lines: Iterable[str] = text.splitlines()
    else:
        lines = text
    period_of: dict[int, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if len(tokens) != 2:
            raise ParseError("expected '<course_id> <period>'", lineno)
        cid, period_tok = tokens
        try:
            i = inst.index_of(cid)
        except KeyError:
            raise UnknownCourseError(f"unknown course {cid!r}", lineno) from None
        if i in period_of:
            raise ParseError(f"course {cid!r} assigned twice", lineno)
        try:
            period = int(period_tok)
        except ValueError:
            raise ParseError(f"period must be an integer, got {period_tok!r}", lineno) from None
        if not 1 <= period <= inst.periods:
            raise ParseError(
                f"period {period} out of range 1..{inst.periods} for course {cid!r}", lineno
            )
        period_of[i] = period
    missing = [c.id for i, c in enumerate(inst.courses, start=1) if i not in period_of]
    if missing:
        raise ParseError("solution misses courses: " + ", ".join(missing))
    return period_of


def serialize_solution(inst: CurriculumInstance, period_of: Mapping[int, int]) -> str:
    return "".join(
        f"{c.id} {period_of[i]}\n" for i, c in enumerate(inst.courses, start=1)
    )


def validate_instance(inst: CurriculumInstance) -> list[str]:
    """Linear counting checks that any feasible instance must pass.

    These are necessary conditions only; an empty result does not prove a
    feasible plan exists (that is the solver's job).
    """
    defects: list[str] = []
    m, n = inst.num_courses, inst.periods
    total = inst.total_credits
    if inst.courses_min * n > m:
        defects.append(
            f"course count {m} is below courses_min*periods = {inst.courses_min * n}"
        )
    if m > inst.courses_max * n:
        defects.append(
            f"course count {m} exceeds courses_max*periods = {inst.courses_max * n}"
        )
    if inst.load_min * n > total:
        defects.append(
            f"total credits {total} are below load_min*periods = {inst.load_min * n}"
        )
    if total > inst.load_max * n:
        defects.append(
            f"total credits {total} exceed load_max*periods = {inst.load_max * n}"
        )
    biggest = max((c.credits for c in inst.courses), default=0)
    if biggest > inst.load_max:
        defects.append(f"max credit {biggest} exceeds load_max {inst.load_max}")
    return defects


def compute_loads(inst: CurriculumInstance, period_of: Mapping[int, int]) -> list[int]:
    """Per-period credit sums for a total assignment (empty periods load 0)."""
    n = inst.periods
    loads = [0] * n
    for i, c in enumerate(inst.courses, start=1):
        try:
            j = period_of[i]
        except KeyError:
            raise ValueError(f"course {c.id} is unassigned") from None
        if not 1 <= j <= n:
            raise OutOfRangePeriodError(
                f"course {c.id} assigned to period {j}, valid range is 1..{n}"
            )
        loads[j - 1] += c.credits
    return loads


def objective(inst: CurriculumInstance, period_of: Mapping[int, int]) -> int:
    """Maximum per-period credit load of a total assignment."""
    return max(compute_loads(inst, period_of))


def check_solution(
    inst: CurriculumInstance, period_of: Mapping[int, int]
) -> list[Violation]:
    """Check an assignment against every constraint family.

    Returns one Violation per violated constraint occurrence; an empty list
    means the assignment is a feasible plan.  Courses missing from the map
    yield UNASSIGNED violations; assigned periods must lie in range.
    """
    n = inst.periods
    violations: list[Violation] = []
    loads = [0] * n
    counts = [0] * n
    for i, c in enumerate(inst.courses, start=1):
        j = period_of.get(i)
        if j is None:
            violations.append(
                Violation(ViolationKind.UNASSIGNED, (i,), f"course {c.id} is not assigned")
            )
            continue
        if not 1 <= j <= n:
            raise OutOfRangePeriodError(
                f"course {c.id} assigned to period {j}, valid range is 1..{n}"
            )
        loads[j - 1] += c.credits
        counts[j - 1] += 1
    for b, a in sorted(inst.prerequisites):
        pb, pa = period_of.get(b), period_of.get(a)
        if pb is None or pa is None:
            continue  # already reported as UNASSIGNED
        if not pa < pb:
            violations.append(
                Violation(
                    ViolationKind.PREREQUISITE,
                    (b, a),
                    f"course {inst.courses[b - 1].id} requires "
                    f"{inst.courses[a - 1].id} earlier (periods {pb} vs {pa})",
                )
            )
    for j in range(1, n + 1):
        load, count = loads[j - 1], counts[j - 1]
        if load < inst.load_min:
            violations.append(
                Violation(
                    ViolationKind.LOAD_BELOW_MIN,
                    (j,),
                    f"period {j} load {load} below minimum {inst.load_min}",
                )
            )
        if load > inst.load_max:
            violations.append(
                Violation(
                    ViolationKind.LOAD_ABOVE_MAX,
                    (j,),
                    f"period {j} load {load} above maximum {inst.load_max}",
                )
            )
        if count < inst.courses_min:
            violations.append(
                Violation(
                    ViolationKind.COURSES_BELOW_MIN,
                    (j,),
                    f"period {j} has {count} courses, minimum is {inst.courses_min}",
                )
            )
        if count > inst.courses_max:
            violations.append(
                Violation(
                    ViolationKind.COURSES_ABOVE_MAX,
                    (j,),
                    f"period {j} has {count} courses, maximum is {inst.courses_max}",
                )
            )
    return violations


def is_feasible(inst: CurriculumInstance, period_of: Mapping[int, int]) -> bool:
    """Equivalent to ``not check_solution(...)`` for total in-range assignments.

    Allocation-free early-exit variant used by the brute-force oracle where
    millions of candidates are screened; equality with ``check_solution`` is
    pinned by tests.
    """
    n = inst.periods
    loads = [0] * n
    counts = [0] * n
    for i, c in enumerate(inst.courses, start=1):
        j = period_of[i]
        loads[j - 1] += c.credits
        counts[j - 1] += 1
    beta, gamma = inst.load_min, inst.load_max
    delta, eps = inst.courses_min, inst.courses_max
    for j in range(n):
        if not beta <= loads[j] <= gamma:
            return False
        if not delta <= counts[j] <= eps:
            return False
    for b, a in inst.prerequisites:
        if not period_of[a] < period_of[b]:
            return False
    return True
