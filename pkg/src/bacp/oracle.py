"""Ground-truth utilities: exhaustive enumeration and instance generation.

``brute_force`` enumerates every total assignment of a small instance and
is the independent oracle the solver is tested against.  ``gen_instance``
produces deterministic random instances for property tests; it is driven
by SplitMix64 (Steele, Lea & Flood's 64-bit mix generator), chosen because
its output is a pure integer function of the seed and therefore identical
on every platform and Python version.  Do not swap the algorithm silently;
generated fixtures are only reproducible while it stays fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import Course, CurriculumInstance, Solution, is_feasible

BRUTE_FORCE_CAP = 10**7


class TooLargeError(Exception):
    """The assignment space exceeds the exhaustive-enumeration guard."""


@dataclass(frozen=True)
class OracleResult:
    """Exact optimum with one witness, or proof of infeasibility.

    ``objective`` and ``witness`` are None iff no total assignment is
    feasible; ``feasible_count`` counts all feasible assignments.
    """

    objective: int | None
    witness: Solution | None
    feasible_count: int

    @property
    def infeasible(self) -> bool:
        return self.objective is None


def brute_force(inst: CurriculumInstance) -> OracleResult:
    """Enumerate all periods**courses total assignments and keep the best.

    Enumeration is mixed-radix with course 1 varying fastest; ties among
    optimal witnesses break by enumeration order (first found).  Candidates
    are screened with the same feasibility semantics as ``check_solution``.
    Refuses with TooLargeError above ``BRUTE_FORCE_CAP`` candidates.
    """
    m = inst.num_courses
    n = inst.periods
    space = n**m
    if space > BRUTE_FORCE_CAP:
        raise TooLargeError(
            f"{n}^{m} = {space} assignments exceed the cap of {BRUTE_FORCE_CAP}"
        )
    credits = inst.credits
    beta, gamma = inst.load_min, inst.load_max
    delta, eps = inst.courses_min, inst.courses_max
    prereqs = tuple(inst.prerequisites)

    assignment = [1] * (m + 1)  # 1-based; index 0 unused
    loads = [0] * (n + 1)
    counts = [0] * (n + 1)
    loads[1] = sum(credits)
    counts[1] = m

    best_objective: int | None = None
    best_assignment: dict[int, int] | None = None
    feasible_count = 0

    for _ in range(space):
        feasible = True
        for j in range(1, n + 1):
            if not (beta <= loads[j] <= gamma and delta <= counts[j] <= eps):
                feasible = False
                break
        if feasible:
            for b, a in prereqs:
                if assignment[a] >= assignment[b]:
                    feasible = False
                    break
        if feasible:
            feasible_count += 1
            obj = max(loads[1:])
            if best_objective is None or obj < best_objective:
                best_objective = obj
                best_assignment = {i: assignment[i] for i in range(1, m + 1)}
        # mixed-radix increment: course 1 is the fastest digit
        for i in range(1, m + 1):
            j = assignment[i]
            loads[j] -= credits[i - 1]
            counts[j] -= 1
            if j < n:
                assignment[i] = j + 1
                loads[j + 1] += credits[i - 1]
                counts[j + 1] += 1
                break
            assignment[i] = 1
            loads[1] += credits[i - 1]
            counts[1] += 1

    if best_assignment is None:
        return OracleResult(None, None, feasible_count)
    witness = Solution.from_assignment(inst, best_assignment)
    assert is_feasible(inst, best_assignment)
    return OracleResult(best_objective, witness, feasible_count)


_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 PRNG: a stateless mix of a 64-bit counter.

    Reference sequence: state advances by 0x9E3779B97F4A7C15; output mixes
    with the constants from the original splitmix64.c.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection sampling (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        zone = _MASK64 - (_MASK64 + 1) % bound
        while True:
            u = self.next_u64()
            if u <= zone:
                return u % bound

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive."""
        return lo + self.below(hi - lo + 1)

    def uniform01(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) / (1 << 53)


@dataclass(frozen=True)
class GenParams:
    """Knobs for the deterministic instance generator.

    ``prereq_density`` is the probability of each lower-to-higher index
    pair becoming a prerequisite edge (acyclic by construction).
    ``bound_slack`` interpolates the four bounds between the tightest values
    the counting checks allow (0.0) and completely loose ones (1.0); every
    generated instance passes ``validate_instance``, but feasibility at the
    solver level is not guaranteed.
    """

    seed: int
    m: int
    n: int
    credit_lo: int = 1
    credit_hi: int = 5
    prereq_density: float = 0.15
    bound_slack: float = 0.5

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("need at least one course and one period")
        if not 1 <= self.credit_lo <= self.credit_hi:
            raise ValueError("need 1 <= credit_lo <= credit_hi")
        if not 0.0 <= self.prereq_density <= 1.0:
            raise ValueError("prereq_density must be in [0, 1]")
        if not 0.0 <= self.bound_slack <= 1.0:
            raise ValueError("bound_slack must be in [0, 1]")


def gen_instance(p: GenParams) -> CurriculumInstance:
    """Deterministic random instance: equal params give identical instances.

    Credits are uniform in the credit range; prerequisite edges point from
    lower to higher declaration index, so declaration order is already a
    topological order.
    """
    rng = SplitMix64(p.seed)
    width = len(str(p.m))
    courses = tuple(
        Course(f"c{i:0{width}d}", rng.randint(p.credit_lo, p.credit_hi))
        for i in range(1, p.m + 1)
    )
    prereqs: set[tuple[int, int]] = set()
    for b in range(2, p.m + 1):
        for a in range(1, b):
            if rng.uniform01() < p.prereq_density:
                prereqs.add((b, a))

    total = sum(c.credits for c in courses)
    biggest = max(c.credits for c in courses)
    s = p.bound_slack
    beta_tight = total // p.n
    gamma_tight = max(-(-total // p.n), biggest)
    delta_tight = p.m // p.n
    eps_tight = -(-p.m // p.n)
    beta = round(beta_tight * (1.0 - s))
    gamma = gamma_tight + round((total - gamma_tight) * s)
    delta = round(delta_tight * (1.0 - s))
    eps = eps_tight + round((p.m - eps_tight) * s)
    return CurriculumInstance(
        courses=courses,
        periods=p.n,
        load_min=beta,
        load_max=gamma,
        courses_min=delta,
        courses_max=eps,
        prerequisites=frozenset(prereqs),
    )
