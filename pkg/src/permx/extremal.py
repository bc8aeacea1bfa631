"""Exact search for extremal quantities of 0-1 matrices that avoid a
permutation-matrix pattern.

exfn_exact maximizes ones in an n x n host; fpts_exact maximizes the
row count of a width-t host with at least s ones per row; gpts_exact is
the column analog, computed through a quarter-turn rotation.  On top of
the searches sit two certifiers that compare exact values against the
closed-form bounds from the bounds module.

Hosts grow one cell (or one row) at a time, so containment checks only
need to consider occurrences whose bottom pattern row lands on the new
cell or row: all earlier configurations were checked when they appeared.
Rows are column bitmasks; transversals are greedy lowest-bit scans.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .bounds import _as_fraction, _pow_ka, lemma21_bound, lemma22_rhs
from .core import (
    BinaryMatrix,
    PermutationMatrix,
    blockable_decompositions,
    from_matrix,
    matrix_from_masks,
    matrix_occurrence_masks,
    rotate90,
)
from .errors import (
    HypothesisUnverified,
    NotBlockable,
    PreconditionViolated,
    ResourceLimit,
    ZeroRowWeight,
)
from .limits import DEFAULT_NODE_BUDGET, DEFAULT_ROW_CAP, MAX_WIDTH


@dataclass(frozen=True)
class ExtremalResult:
    """Outcome of an exfn search.  When proven_optimal is False the
    value is the best found before the node budget ran out."""

    value: int
    witness: BinaryMatrix
    nodes_explored: int
    proven_optimal: bool

    def to_jsonable(self) -> dict:
        return {
            "value": self.value,
            "witness": self.witness.to_json(),
            "nodes_explored": self.nodes_explored,
            "proven_optimal": self.proven_optimal,
        }


@dataclass(frozen=True)
class FptsResult:
    """Outcome of an fpts/gpts search.  hit_row_cap marks searches that
    reached the row cap, so the true value may exceed `value`."""

    value: int
    witness: BinaryMatrix
    nodes_explored: int
    proven_optimal: bool
    hit_row_cap: bool

    def to_jsonable(self) -> dict:
        return {
            "value": self.value,
            "witness": self.witness.to_json(),
            "nodes_explored": self.nodes_explored,
            "proven_optimal": self.proven_optimal,
            "hit_row_cap": self.hit_row_cap,
        }


def _pattern_order(P: PermutationMatrix):
    """Pattern rows sorted by the column of their one; the greedy
    transversal consumes rows in this order."""
    cols = P.col_of_row()
    return sorted(range(len(cols)), key=cols.__getitem__)


def _cell_completes(masks, r: int, c: int, order, k: int) -> bool:
    """Would setting cell (r, c) create an occurrence?  Any new
    occurrence must use (r, c) for the bottom pattern row, with the
    other pattern rows on earlier nonempty host rows."""
    if k == 1:
        return True
    prev_rows = [i for i in range(r) if masks[i]]
    if len(prev_rows) < k - 1:
        return False
    last = k - 1
    for combo in itertools.combinations(prev_rows, k - 1):
        col = -1
        ok = True
        for j in order:
            if j == last:
                if c <= col:
                    ok = False
                    break
                col = c
            else:
                m = masks[combo[j]] >> (col + 1)
                if m == 0:
                    ok = False
                    break
                col += (m & -m).bit_length()
        if ok:
            return True
    return False


def _row_completes(prev_masks, new_mask: int, order, k: int) -> bool:
    """Would appending new_mask as the next host row create an
    occurrence ending in that row?"""
    if k == 1:
        return new_mask != 0
    if len(prev_masks) < k - 1:
        return False
    last = k - 1
    for combo in itertools.combinations(range(len(prev_masks)), k - 1):
        col = -1
        ok = True
        for j in order:
            m = (new_mask if j == last else prev_masks[combo[j]]) >> (col + 1)
            if m == 0:
                ok = False
                break
            col += (m & -m).bit_length()
        if ok:
            return True
    return False


def exfn_exact(
    P: PermutationMatrix, n: int, budget: int = DEFAULT_NODE_BUDGET
) -> ExtremalResult:
    """Maximum number of ones in an n x n matrix avoiding P, by
    branch-and-bound over cells in row-major order.

    Tries to set each cell before leaving it clear, prunes when even
    filling every remaining cell cannot beat the best, and checks
    containment incrementally at the newly set cell only.  Budget
    exhaustion returns the best-so-far flagged not proven.
    """
    if n < 1:
        raise PreconditionViolated(f"need n >= 1, got {n}")
    k = P.k
    if k == 1:
        return ExtremalResult(0, BinaryMatrix(n, n, frozenset()), 0, True)
    order = _pattern_order(P)
    total = n * n
    masks = [0] * n
    best_value = 0
    best_masks = list(masks)
    nodes = 0
    exceeded = False

    def rec(idx: int, ones: int):
        nonlocal best_value, best_masks, nodes, exceeded
        nodes += 1
        if nodes > budget:
            exceeded = True
            return
        if idx == total:
            if ones > best_value:
                best_value = ones
                best_masks = list(masks)
            return
        if ones + (total - idx) <= best_value:
            return
        r, c = divmod(idx, n)
        if not _cell_completes(masks, r, c, order, k):
            masks[r] |= 1 << c
            rec(idx + 1, ones + 1)
            masks[r] &= ~(1 << c)
            if exceeded:
                return
        rec(idx + 1, ones)

    rec(0, 0)
    witness = matrix_from_masks(best_masks, n)
    return ExtremalResult(best_value, witness, nodes, not exceeded)


def exfn_enumerate(P: PermutationMatrix, n: int) -> int:
    """Independent oracle: sweep all 2^(n^2) matrices.  Desk scale only."""
    if n < 1:
        raise PreconditionViolated(f"need n >= 1, got {n}")
    if n * n > 16:
        raise ResourceLimit(f"enumeration over 2^{n * n} matrices refused")
    if P.k == 1:
        return 0
    pat_masks = P.matrix.row_masks()
    best = 0
    for code in range(1 << (n * n)):
        if code.bit_count() <= best:
            continue
        rows = [(code >> (n * i)) & ((1 << n) - 1) for i in range(n)]
        if matrix_occurrence_masks(rows, n, pat_masks, P.k) is None:
            best = code.bit_count()
    return best


def fpts_exact(
    P: PermutationMatrix,
    t: int,
    s: int,
    n_cap: int = DEFAULT_ROW_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> FptsResult:
    """Maximum N such that some N x t matrix with at least s ones per
    row avoids P, found by depth-first search over row contents.

    Candidate rows are the weight >= s masks in descending numeric
    order, a witness-finding heuristic only: every extension of every
    prefix is explored, because row order matters for containment.
    Reaching n_cap sets hit_row_cap (the true value may be larger);
    budget exhaustion returns best-so-far flagged not proven.
    """
    if t < 1:
        raise PreconditionViolated(f"need t >= 1, got {t}")
    if t > MAX_WIDTH:
        raise ResourceLimit(f"width {t} exceeds the {MAX_WIDTH}-bit row limit")
    if s < 0:
        raise PreconditionViolated(f"need s >= 0, got {s}")
    if s == 0:
        raise ZeroRowWeight("s = 0 admits unlimited all-zero rows; refusing")
    if n_cap < 1:
        raise PreconditionViolated(f"need n_cap >= 1, got {n_cap}")
    k = P.k
    if s > t or k == 1:
        return FptsResult(0, matrix_from_masks([], t), 0, True, False)

    order = _pattern_order(P)
    candidates = [m for m in range((1 << t) - 1, 0, -1) if m.bit_count() >= s]
    rows: list[int] = []
    best_rows: list[int] = []
    nodes = 0
    hit_cap = False
    exceeded = False

    def rec():
        nonlocal best_rows, nodes, hit_cap, exceeded
        if len(rows) > len(best_rows):
            best_rows = list(rows)
        if len(rows) == n_cap:
            hit_cap = True
            return
        for m in candidates:
            nodes += 1
            if nodes > budget:
                exceeded = True
                return
            if not _row_completes(rows, m, order, k):
                rows.append(m)
                rec()
                rows.pop()
                if exceeded or hit_cap:
                    return

    rec()
    witness = matrix_from_masks(best_rows, t)
    proven = not exceeded and not hit_cap
    return FptsResult(len(best_rows), witness, nodes, proven, hit_cap)


def gpts_exact(
    P: PermutationMatrix,
    t: int,
    s: int,
    n_cap: int = DEFAULT_ROW_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> FptsResult:
    """Column analog: maximum N such that some t x N matrix with at
    least s ones per column avoids P.  A quarter turn maps such hosts
    to row-weighted hosts of the rotated pattern, so this is
    fpts_exact(rotate90(P), t, s)."""
    return fpts_exact(rotate90(P), t, s, n_cap, budget)


def gpts_direct(P: PermutationMatrix, t: int, s: int, n_cap: int) -> int:
    """Slow column-by-column oracle for the rotation identity; grows the
    host one column at a time and re-checks containment from scratch."""
    if t < 1:
        raise PreconditionViolated(f"need t >= 1, got {t}")
    if s < 0:
        raise PreconditionViolated(f"need s >= 0, got {s}")
    if s == 0:
        raise ZeroRowWeight("s = 0 admits unlimited all-zero columns; refusing")
    if s > t or P.k == 1:
        return 0
    pat_masks = P.matrix.row_masks()
    candidates = [m for m in range((1 << t) - 1, 0, -1) if m.bit_count() >= s]
    best = 0

    def avoids(col_masks) -> bool:
        width = len(col_masks)
        rows = [
            sum(((col_masks[j] >> i) & 1) << j for j in range(width))
            for i in range(t)
        ]
        return matrix_occurrence_masks(rows, width, pat_masks, P.k) is None

    def rec(cols):
        nonlocal best
        if len(cols) > best:
            best = len(cols)
        if len(cols) == n_cap:
            return
        for m in candidates:
            if avoids(cols + [m]):
                rec(cols + [m])

    rec([])
    return best


@dataclass(frozen=True)
class Lemma21Report:
    """Exact row count versus the closed-form row bound."""

    k: int
    a: float
    t: int
    s: int
    lhs_value: int
    rhs_bound: Fraction
    holds: bool
    nodes_explored: int
    hypothesis_checked_upto: int
    wall_ms: float | None = None

    def to_jsonable(self) -> dict:
        return {
            "lhs": self.lhs_value,
            "rhs": str(self.rhs_bound),
            "pass": self.holds,
            "nodes": self.nodes_explored,
            "wall_ms": self.wall_ms,
            "k": self.k,
            "a": self.a,
            "t": self.t,
            "s": self.s,
            "hypothesis_checked_upto": self.hypothesis_checked_upto,
        }


def check_lemma21(
    P: PermutationMatrix,
    a,
    t: int,
    s: int,
    hypothesis_n: int = 4,
    budget: int = DEFAULT_NODE_BUDGET,
) -> Lemma21Report:
    """Certify fpts_exact(P, t, s) <= k^a * t / (s - k^a).

    First verifies the linear extremal hypothesis ex_P(n) <= k^a * n
    for n up to hypothesis_n via exfn_exact (HypothesisUnverified
    otherwise), then compares the exact search against the bound.  The
    row cap is set just above the bound, so hitting the cap refutes the
    inequality decisively rather than leaving it open.
    """
    k = P.k
    bound = lemma21_bound(k, a, t, s)
    ka = _pow_ka(k, a)
    nodes = 0
    for n in range(1, hypothesis_n + 1):
        res = exfn_exact(P, n, budget)
        nodes += res.nodes_explored
        if not res.proven_optimal:
            raise ResourceLimit(f"budget exhausted while verifying ex at n={n}")
        if Fraction(res.value) > ka * n:
            raise HypothesisUnverified(
                f"ex(n={n}) = {res.value} exceeds k^a*n = {float(ka) * n:g}"
            )
    cap = min(DEFAULT_ROW_CAP, bound.numerator // bound.denominator + 1)
    fres = fpts_exact(P, t, s, cap, budget)
    nodes += fres.nodes_explored
    if fres.hit_row_cap and Fraction(cap) <= bound:
        raise ResourceLimit("row cap reached below the bound; verdict open")
    if not fres.proven_optimal and not fres.hit_row_cap:
        raise ResourceLimit("budget exhausted before the search completed")
    holds = Fraction(fres.value) <= bound and not fres.hit_row_cap
    return Lemma21Report(k, a, t, s, fres.value, bound, holds, nodes, hypothesis_n)


@dataclass(frozen=True)
class Lemma22Report:
    """Exact row count versus one step of the sectioning recursion."""

    k: int
    a: float
    c: int
    t: int
    s: int
    x: float
    y: float
    shrunk_t: int
    shrunk_s: int
    f_sub_value: int
    lhs_value: int
    rhs_value: Fraction
    holds: bool
    nodes_explored: int
    wall_ms: float | None = None

    def to_jsonable(self) -> dict:
        return {
            "lhs": self.lhs_value,
            "rhs": str(self.rhs_value),
            "pass": self.holds,
            "nodes": self.nodes_explored,
            "wall_ms": self.wall_ms,
            "k": self.k,
            "a": self.a,
            "c": self.c,
            "t": self.t,
            "s": self.s,
            "x": self.x,
            "y": self.y,
            "shrunk_t": self.shrunk_t,
            "shrunk_s": self.shrunk_s,
            "f_sub": self.f_sub_value,
        }


def check_lemma22(
    P: PermutationMatrix,
    a,
    c: int,
    t: int,
    s: int,
    x,
    y,
    budget: int = DEFAULT_NODE_BUDGET,
) -> Lemma22Report:
    """Certify one recursion step: the exact value at (t, s) is at most
    binom(c, floor(xc)) times the exact value at the shrunken instance
    plus the closed-form remainder.

    P must decompose into c blocks for the sectioning argument to
    apply.  The right side is assembled from an exact sub-search; the
    verdict is only reported when it is decisive (an under-resolved
    sub-search can understate the right side, so a failed comparison
    against it raises ResourceLimit instead of reporting False).
    """
    k = P.k
    if not blockable_decompositions(from_matrix(P), c):
        raise NotBlockable(f"pattern admits no {c}-block decomposition")
    # validates constants and the denominator before any search runs
    remainder = lemma22_rhs(k, a, c, t, s, x, y, 0)
    xf = _as_fraction(x, "x")
    yf = _as_fraction(y, "y")
    fxc = int(xf * c)
    shrunk_t = t * fxc // c
    shrunk_s = int(Fraction(s) * yf)
    if shrunk_s == 0:
        raise ZeroRowWeight("floor(s*y) = 0 makes the shrunken search unbounded")
    if shrunk_t == 0:
        raise PreconditionViolated("floor(t*floor(xc)/c) = 0 leaves no columns")
    sub = fpts_exact(P, shrunk_t, shrunk_s, DEFAULT_ROW_CAP, budget)
    sub_exact = sub.proven_optimal
    rhs = lemma22_rhs(k, a, c, t, s, x, y, sub.value)
    cap = min(DEFAULT_ROW_CAP, rhs.numerator // rhs.denominator + 1)
    lhs_res = fpts_exact(P, t, s, cap, budget)
    nodes = sub.nodes_explored + lhs_res.nodes_explored

    if lhs_res.proven_optimal:
        lhs_exceeds = Fraction(lhs_res.value) > rhs
    elif lhs_res.hit_row_cap and Fraction(cap) > rhs:
        lhs_exceeds = True  # cap sits above rhs, so the true value does too
    else:
        raise ResourceLimit("search for the left side did not finish")
    if lhs_exceeds and not sub_exact:
        raise ResourceLimit(
            "left side exceeds a right side built from an unfinished sub-search"
        )
    holds = not lhs_exceeds
    return Lemma22Report(
        k, a, c, t, s, x, y, shrunk_t, shrunk_s, sub.value,
        lhs_res.value, rhs, holds, nodes,
    )
