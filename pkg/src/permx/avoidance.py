"""Avoidance-class enumeration, growth-rate estimates, and two-color
merge membership.

Counting builds permutations value by value, left to right, and rejects
a partial prefix as soon as the new entry completes an occurrence of the
forbidden pattern; only occurrences ending at the new entry need
checking.  For patterns of length 3 the completion test reduces to a
comparison against a running statistic of the prefix, carried down the
recursion, so the inner loop does no scanning at all.

The merge searcher 2-colors host entries left to right and prunes a
branch the moment either color class contains its forbidden pattern.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import (
    Permutation,
    completes_at_end,
    contains_values,
    direct_sum,
)
from .errors import EmptyPattern, PreconditionViolated, ResourceLimit
from .limits import (
    DEFAULT_COUNT_LENGTH_LIMIT,
    DEFAULT_MERGE_COUNT_LENGTH_LIMIT,
    DEFAULT_MERGE_LENGTH_LIMIT,
    DEFAULT_NODE_BUDGET,
)

_LOW = -(1 << 60)
_HIGH = 1 << 60


# ---------------------------------------------------------------------------
# report records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AvoidanceCount:
    pattern: Permutation
    n: int
    count: int


@dataclass(frozen=True)
class SwEstimate:
    """Finite-length growth estimate count**(1/n) for one length."""

    n: int
    count: int
    value: float


@dataclass(frozen=True)
class MergeQuery:
    """Host permutation plus the two forbidden patterns, one per color."""

    host: Permutation
    red_pattern: Permutation
    blue_pattern: Permutation

    def __post_init__(self):
        if self.red_pattern.n == 0 or self.blue_pattern.n == 0:
            raise EmptyPattern("merge patterns must be nonempty")


@dataclass(frozen=True)
class JvInclusionReport:
    """Result of checking that every avoider of the three-part sum splits
    into a red part avoiding part1+part2 and a blue part avoiding
    part2+part3."""

    parts: tuple[Permutation, Permutation, Permutation]
    n: int
    combined: Permutation
    red_pattern: Permutation
    blue_pattern: Permutation
    checked: int
    holds: bool
    counterexample: Permutation | None

    def to_jsonable(self) -> dict:
        return {
            "parts": [str(p) for p in self.parts],
            "n": self.n,
            "combined": str(self.combined),
            "red_pattern": str(self.red_pattern),
            "blue_pattern": str(self.blue_pattern),
            "checked": self.checked,
            "holds": self.holds,
            "counterexample": (
                None if self.counterexample is None else str(self.counterexample)
            ),
        }


@dataclass(frozen=True)
class MergeCountReport:
    """Mergeable-permutation count at length n against two right-hand
    sides.

    ``rhs`` is the plain product form sum_i C(n,i)*|red_i|*|blue_(n-i)|;
    picking which i positions are red independently of which values land
    there needs the square of the binomial, so ``rhs_refined`` uses
    C(n,i)^2 and is the side that is always an upper bound.  ``rhs`` can
    genuinely fall below the left side at moderate n.
    """

    red_pattern: Permutation
    blue_pattern: Permutation
    n: int
    lhs: int
    rhs: int
    rhs_refined: int
    holds: bool
    holds_refined: bool

    def to_jsonable(self) -> dict:
        return {
            "red_pattern": str(self.red_pattern),
            "blue_pattern": str(self.blue_pattern),
            "n": self.n,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "rhs_refined": str(self.rhs_refined),
            "holds": self.holds,
            "holds_refined": self.holds_refined,
        }


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def count_avoiders(
    pattern: Permutation,
    n: int,
    *,
    max_n: int = DEFAULT_COUNT_LENGTH_LIMIT,
    node_budget: int | None = None,
) -> int:
    """Exact number of length-n permutations avoiding ``pattern``."""
    if pattern.n == 0:
        raise EmptyPattern("avoidance is defined for nonempty patterns")
    if n < 0:
        raise PreconditionViolated(f"need n >= 0, got {n}")
    if n > max_n:
        raise ResourceLimit(f"n={n} exceeds the configured limit {max_n}")
    budget = DEFAULT_NODE_BUDGET if node_budget is None else node_budget
    k = pattern.n
    if k > n:
        return math.factorial(n)
    if k == 1:
        return 0
    if k == 3:
        return _count3(pattern.entries, n, budget)
    return _count_generic(pattern.entries, n, budget)


def _count_generic(pvals, n, budget):
    used = bytearray(n + 1)
    prefix = []
    total = 0
    nodes = 0

    def rec(depth):
        nonlocal total, nodes
        if depth == n:
            total += 1
            return
        for v in range(1, n + 1):
            if used[v]:
                continue
            nodes += 1
            if nodes > budget:
                raise ResourceLimit(f"node budget {budget} exhausted")
            if completes_at_end(prefix, v, pvals):
                continue
            used[v] = 1
            prefix.append(v)
            rec(depth + 1)
            prefix.pop()
            used[v] = 0

    rec(0)
    return total


def _count3(pvals, n, budget):
    # each 3-pattern gets its own machine; all six are cross-checked
    # against the naive filter in the tests
    if pvals == (1, 2, 3):
        return _count_123(n, budget)
    if pvals == (3, 2, 1):
        return _count_321(n, budget)
    if pvals == (2, 1, 3):
        return _count_213(n, budget)
    if pvals == (2, 3, 1):
        return _count_231(n, budget)
    if pvals == (1, 3, 2):
        return _count_mid(n, budget, rising_pairs=True)
    return _count_mid(n, budget, rising_pairs=False)  # (3, 1, 2)


def _budget_guard(budget):
    raise ResourceLimit(f"node budget {budget} exhausted")


def _count_123(n, budget):
    # a new max entry v completes 123 iff some rising pair sits wholly
    # below it; th = least top of a rising pair, mn = least entry
    used = bytearray(n + 1)
    total = 0
    nodes = 0

    def rec(depth, mn, th):
        nonlocal total, nodes
        nodes += 1
        if nodes > budget:
            _budget_guard(budget)
        if depth == n:
            total += 1
            return
        for v in range(1, n + 1):
            if used[v] or v > th:
                continue
            used[v] = 1
            rec(depth + 1, v if v < mn else mn, v if v > mn else th)
            used[v] = 0

    rec(0, _HIGH, _HIGH)
    return total


def _count_321(n, budget):
    used = bytearray(n + 1)
    total = 0
    nodes = 0

    def rec(depth, mx, th):
        nonlocal total, nodes
        nodes += 1
        if nodes > budget:
            _budget_guard(budget)
        if depth == n:
            total += 1
            return
        for v in range(1, n + 1):
            if used[v] or v < th:
                continue
            used[v] = 1
            rec(depth + 1, v if v > mx else mx, v if v < mx else th)
            used[v] = 0

    rec(0, _LOW, _LOW)
    return total


def _count_213(n, budget):
    # v completes 213 iff some falling pair sits wholly below it;
    # th = least top of a falling pair.  Appending v creates falling
    # pairs whose top is the least used value above v.
    used = bytearray(n + 1)
    total = 0
    nodes = 0

    def rec(depth, th):
        nonlocal total, nodes
        nodes += 1
        if nodes > budget:
            _budget_guard(budget)
        if depth == n:
            total += 1
            return
        for v in range(1, n + 1):
            if used[v] or v > th:
                continue
            w = v + 1
            while w <= n and not used[w]:
                w += 1
            child = th if w > n or w >= th else w
            used[v] = 1
            rec(depth + 1, child)
            used[v] = 0

    rec(0, _HIGH)
    return total


def _count_231(n, budget):
    # v completes 231 iff some rising pair sits wholly above it;
    # th = greatest bottom of a rising pair
    used = bytearray(n + 1)
    total = 0
    nodes = 0

    def rec(depth, th):
        nonlocal total, nodes
        nodes += 1
        if nodes > budget:
            _budget_guard(budget)
        if depth == n:
            total += 1
            return
        for v in range(1, n + 1):
            if used[v] or v < th:
                continue
            w = v - 1
            while w >= 1 and not used[w]:
                w -= 1
            child = th if w < 1 or w <= th else w
            used[v] = 1
            rec(depth + 1, child)
            used[v] = 0

    rec(0, _LOW)
    return total


def _count_mid(n, budget, rising_pairs):
    # patterns whose last entry is the middle value: v completes iff it
    # falls strictly inside the value gap of some ordered pair.  Per
    # node, bucket each pair by its lower end and sweep candidates in
    # increasing order with a running max of upper ends.
    used = bytearray(n + 1)
    prefix = []
    total = 0
    nodes = 0
    low_to_high = [0] * (n + 2)

    def rec(depth):
        nonlocal total, nodes
        nodes += 1
        if nodes > budget:
            _budget_guard(budget)
        if depth == n:
            total += 1
            return
        touched = []
        if rising_pairs:
            run = _HIGH  # least entry so far; pairs are (run, w) rising
            for w in prefix:
                if run < w:
                    if w > low_to_high[run]:
                        low_to_high[run] = w
                        touched.append(run)
                if w < run:
                    run = w
        else:
            run = _LOW  # greatest entry so far; pairs are (run, w) falling
            for w in prefix:
                if run > w:
                    if run > low_to_high[w]:
                        low_to_high[w] = run
                        touched.append(w)
                if w > run:
                    run = w
        top = 0
        for v in range(1, n + 1):
            if low_to_high[v - 1] > top:
                top = low_to_high[v - 1]
            if used[v] or top > v:
                continue
            used[v] = 1
            prefix.append(v)
            rec(depth + 1)
            prefix.pop()
            used[v] = 0
        for w in touched:
            low_to_high[w] = 0

    rec(0)
    return total


def avoiders(
    pattern: Permutation,
    n: int,
    *,
    max_n: int = DEFAULT_COUNT_LENGTH_LIMIT,
    node_budget: int | None = None,
):
    """Yield every length-n avoider of ``pattern`` as a value tuple, in
    lexicographic order."""
    if pattern.n == 0:
        raise EmptyPattern("avoidance is defined for nonempty patterns")
    if n < 0:
        raise PreconditionViolated(f"need n >= 0, got {n}")
    if n > max_n:
        raise ResourceLimit(f"n={n} exceeds the configured limit {max_n}")
    budget = DEFAULT_NODE_BUDGET if node_budget is None else node_budget
    pvals = pattern.entries
    used = bytearray(n + 1)
    prefix = []
    nodes = 0

    def rec(depth):
        nonlocal nodes
        if depth == n:
            yield tuple(prefix)
            return
        for v in range(1, n + 1):
            if used[v]:
                continue
            nodes += 1
            if nodes > budget:
                raise ResourceLimit(f"node budget {budget} exhausted")
            if completes_at_end(prefix, v, pvals):
                continue
            used[v] = 1
            prefix.append(v)
            yield from rec(depth + 1)
            prefix.pop()
            used[v] = 0

    yield from rec(0)


def sw_estimate_sequence(
    pattern: Permutation,
    n_max: int,
    *,
    max_n: int = DEFAULT_COUNT_LENGTH_LIMIT,
    node_budget: int | None = None,
) -> list[SwEstimate]:
    """Exact counts with count**(1/n) growth estimates for n = 1..n_max."""
    if n_max < 1:
        raise PreconditionViolated(f"need n_max >= 1, got {n_max}")
    out = []
    for n in range(1, n_max + 1):
        count = count_avoiders(pattern, n, max_n=max_n, node_budget=node_budget)
        value = float(count) ** (1.0 / n) if count > 0 else 0.0
        out.append(SwEstimate(n, count, value))
    return out


# ---------------------------------------------------------------------------
# merges
# ---------------------------------------------------------------------------

def merge_coloring(
    q: MergeQuery,
    *,
    max_n: int = DEFAULT_MERGE_LENGTH_LIMIT,
    node_budget: int | None = None,
) -> tuple[str, ...] | None:
    """A per-entry ("red"/"blue") coloring whose red subsequence avoids
    the red pattern and blue subsequence avoids the blue pattern, or
    None if no such coloring exists."""
    n = q.host.n
    if n > max_n:
        raise ResourceLimit(f"host length {n} exceeds the configured limit {max_n}")
    budget = DEFAULT_NODE_BUDGET if node_budget is None else node_budget
    hvals = q.host.entries
    rvals, bvals = q.red_pattern.entries, q.blue_pattern.entries
    red, blue = [], []
    color = [""] * n
    nodes = 0

    def rec(i):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceLimit(f"node budget {budget} exhausted")
        if i == n:
            return True
        v = hvals[i]
        if not completes_at_end(red, v, rvals):
            red.append(v)
            color[i] = "red"
            if rec(i + 1):
                return True
            red.pop()
        if not completes_at_end(blue, v, bvals):
            blue.append(v)
            color[i] = "blue"
            if rec(i + 1):
                return True
            blue.pop()
        return False

    if rec(0):
        return tuple(color)
    return None


def merge_member(
    q: MergeQuery,
    *,
    max_n: int = DEFAULT_MERGE_LENGTH_LIMIT,
    node_budget: int | None = None,
) -> bool:
    """True iff the host's entries 2-color so that red avoids the red
    pattern and blue avoids the blue pattern."""
    return merge_coloring(q, max_n=max_n, node_budget=node_budget) is not None


def verify_jv_inclusion(
    a: Permutation,
    b: Permutation,
    c: Permutation,
    n: int,
    *,
    max_n: int = DEFAULT_COUNT_LENGTH_LIMIT,
    node_budget: int | None = None,
) -> JvInclusionReport:
    """Check, for every length-n avoider of a+b+c (direct sum), that it
    merges from an avoider of a+b and an avoider of b+c.

    Exhaustive at desk scale; reports the first counterexample if the
    inclusion ever failed (none is expected).
    """
    if a.n == 0 or b.n == 0 or c.n == 0:
        raise EmptyPattern("all three parts must be nonempty")
    combined = direct_sum(direct_sum(a, b), c)
    red_pattern = direct_sum(a, b)
    blue_pattern = direct_sum(b, c)
    checked = 0
    counterexample = None
    for values in avoiders(combined, n, max_n=max_n, node_budget=node_budget):
        checked += 1
        q = MergeQuery(Permutation(values), red_pattern, blue_pattern)
        if not merge_member(q, node_budget=node_budget):
            counterexample = Permutation(values)
            break
    return JvInclusionReport(
        parts=(a, b, c),
        n=n,
        combined=combined,
        red_pattern=red_pattern,
        blue_pattern=blue_pattern,
        checked=checked,
        holds=counterexample is None,
        counterexample=counterexample,
    )


def merge_count_upper_check(
    red_pattern: Permutation,
    blue_pattern: Permutation,
    n: int,
    *,
    max_n: int = DEFAULT_MERGE_COUNT_LENGTH_LIMIT,
    node_budget: int | None = None,
) -> MergeCountReport:
    """Count mergeable length-n permutations and compare against the
    binomial-sum right-hand sides (see :class:`MergeCountReport`)."""
    if red_pattern.n == 0 or blue_pattern.n == 0:
        raise EmptyPattern("merge patterns must be nonempty")
    if n < 0:
        raise PreconditionViolated(f"need n >= 0, got {n}")
    if n > max_n:
        raise ResourceLimit(f"n={n} exceeds the configured limit {max_n}")
    lhs = 0
    for values in itertools.permutations(range(1, n + 1)):
        q = MergeQuery(Permutation(values), red_pattern, blue_pattern)
        if merge_member(q, node_budget=node_budget):
            lhs += 1
    red_counts = [
        count_avoiders(red_pattern, i, node_budget=node_budget) for i in range(n + 1)
    ]
    blue_counts = [
        count_avoiders(blue_pattern, i, node_budget=node_budget) for i in range(n + 1)
    ]
    rhs = sum(
        math.comb(n, i) * red_counts[i] * blue_counts[n - i] for i in range(n + 1)
    )
    rhs_refined = sum(
        math.comb(n, i) ** 2 * red_counts[i] * blue_counts[n - i]
        for i in range(n + 1)
    )
    return MergeCountReport(
        red_pattern=red_pattern,
        blue_pattern=blue_pattern,
        n=n,
        lhs=lhs,
        rhs=rhs,
        rhs_refined=rhs_refined,
        holds=lhs <= rhs,
        holds_refined=lhs <= rhs_refined,
    )
