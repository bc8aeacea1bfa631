"""Permutations, 0-1 matrices, containment, sums, and inflation.

Conventions fixed once, used everywhere:

* A permutation of length n is a tuple of the values 1..n in one-line
  notation; ``entries[i]`` is the image of position i+1.
* Matrix cells are (row, col), 1-indexed, row 1 drawn at the top.
* A permutation p of length k corresponds to the permutation matrix with
  ones at cells (k + 1 - p[j], j+1), so the dot plot read bottom-up
  matches one-line notation.  ``to_matrix``/``from_matrix`` implement
  exactly this correspondence and nothing else relies on a drawing.

The containment kernels at the bottom operate on raw value sequences and
bitmask rows; the dataclass API wraps them.  Callers in hot loops
(enumeration, search) use the kernels directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    ArityMismatch,
    EmptyBlock,
    EmptyOperand,
    EmptyPattern,
    MalformedInput,
    NotABijection,
    NotPermutationMatrix,
    PreconditionViolated,
)

_LOW = -(1 << 60)
_HIGH = 1 << 60


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    """A bijection on {1..n} in one-line notation."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if sorted(entries) != list(range(1, len(entries) + 1)):
            raise NotABijection(f"not a bijection on 1..{len(entries)}: {entries!r}")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self) -> str:
        if self.n == 0:
            return "()"
        if all(v <= 9 for v in self.entries):
            return "".join(str(v) for v in self.entries)
        return " ".join(str(v) for v in self.entries)


@dataclass(frozen=True)
class BinaryMatrix:
    """An m x n 0-1 matrix stored as its set of one-cells (1-indexed)."""

    rows: int
    cols: int
    ones: frozenset[tuple[int, int]]

    def __post_init__(self):
        ones = frozenset((int(r), int(c)) for r, c in self.ones)
        object.__setattr__(self, "ones", ones)
        if self.rows < 0 or self.cols < 0:
            raise PreconditionViolated("matrix dimensions must be nonnegative")
        for r, c in ones:
            if not (1 <= r <= self.rows and 1 <= c <= self.cols):
                raise PreconditionViolated(
                    f"cell {(r, c)} outside {self.rows}x{self.cols}"
                )

    @classmethod
    def from_strings(cls, rows: list[str]) -> "BinaryMatrix":
        """Build from rows of '0'/'1' characters, e.g. ["01", "10"]."""
        ncols = len(rows[0]) if rows else 0
        ones = {
            (i + 1, j + 1)
            for i, row in enumerate(rows)
            for j, ch in enumerate(row)
            if ch == "1"
        }
        return cls(len(rows), ncols, frozenset(ones))

    def row_masks(self) -> list[int]:
        """Rows as bitmasks; bit c-1 set iff (row, c) is a one."""
        masks = [0] * self.rows
        for r, c in self.ones:
            masks[r - 1] |= 1 << (c - 1)
        return masks

    def count_ones(self) -> int:
        return len(self.ones)

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "ones": sorted([r, c] for r, c in self.ones),
        }

    @classmethod
    def from_json(cls, data: dict) -> "BinaryMatrix":
        try:
            return cls(
                int(data["rows"]),
                int(data["cols"]),
                frozenset((int(r), int(c)) for r, c in data["ones"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad matrix JSON: {exc}") from exc

    def __str__(self) -> str:
        cells = self.ones
        return "\n".join(
            "".join("1" if (r, c) in cells else "0" for c in range(1, self.cols + 1))
            for r in range(1, self.rows + 1)
        )


def matrix_from_masks(masks: list[int], cols: int) -> BinaryMatrix:
    ones = {
        (i + 1, c + 1)
        for i, mask in enumerate(masks)
        for c in range(cols)
        if mask >> c & 1
    }
    return BinaryMatrix(len(masks), cols, frozenset(ones))


@dataclass(frozen=True)
class PermutationMatrix:
    """A square 0-1 matrix with exactly one 1 per row and per column."""

    matrix: BinaryMatrix

    def __post_init__(self):
        m = self.matrix
        if m.rows != m.cols:
            raise NotPermutationMatrix(f"not square: {m.rows}x{m.cols}")
        if len(m.ones) != m.rows:
            raise NotPermutationMatrix("wrong number of ones")
        if len({r for r, _ in m.ones}) != m.rows or len({c for _, c in m.ones}) != m.rows:
            raise NotPermutationMatrix("needs exactly one 1 per row and per column")

    @property
    def k(self) -> int:
        return self.matrix.rows

    @classmethod
    def identity(cls, k: int) -> "PermutationMatrix":
        return cls(BinaryMatrix(k, k, frozenset((i, i) for i in range(1, k + 1))))

    def col_of_row(self) -> list[int]:
        """0-based column of the one in each 0-based row, top to bottom."""
        out = [0] * self.k
        for r, c in self.matrix.ones:
            out[r - 1] = c - 1
        return out


@dataclass(frozen=True)
class Occurrence:
    """Witness of a containment: host positions (or host cells) chosen
    in pattern order."""

    positions: tuple

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(self.positions))


@dataclass(frozen=True)
class BlockDecomposition:
    """A skeleton permutation plus the blocks that inflate back to the
    decomposed permutation."""

    skeleton: Permutation
    blocks: tuple[Permutation, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if self.skeleton.n != len(self.blocks):
            raise ArityMismatch(
                f"skeleton length {self.skeleton.n} != {len(self.blocks)} blocks"
            )
        if self.skeleton.n < 1:
            raise PreconditionViolated("need at least one block")
        if any(b.n == 0 for b in self.blocks):
            raise EmptyBlock("blocks must be nonempty")


# ---------------------------------------------------------------------------
# parsing and normal forms
# ---------------------------------------------------------------------------

def parse_permutation(text: str) -> Permutation:
    """Parse whitespace-separated values, or a compact digit string when
    every value is a single digit ("42153")."""
    text = text.strip()
    if not text:
        raise MalformedInput("empty permutation text")
    if any(ch.isspace() for ch in text):
        try:
            values = tuple(int(tok) for tok in text.split())
        except ValueError as exc:
            raise MalformedInput(f"non-integer token in {text!r}") from exc
    else:
        if not text.isdigit():
            raise MalformedInput(f"not a digit string: {text!r}")
        values = tuple(int(ch) for ch in text)
    return Permutation(values)


def pattern_of(values) -> tuple[int, ...]:
    """Relative order of a sequence of distinct values, as values 1..m."""
    ranking = {v: i + 1 for i, v in enumerate(sorted(values))}
    return tuple(ranking[v] for v in values)


# ---------------------------------------------------------------------------
# permutation containment
# ---------------------------------------------------------------------------

def occurrence_in_values(hvals, pvals):
    """First occurrence (0-based host indices) of the pattern ``pvals``
    in the value sequence ``hvals``, or None.

    Backtracks over pattern positions left to right; at each step the
    candidate value must sit strictly inside the window forced by the
    already-placed entries, which prunes most of the search.
    """
    n, k = len(hvals), len(pvals)
    if k > n:
        return None
    chosen = [0] * k

    def extend(j, start):
        pj = pvals[j]
        lo, hi = _LOW, _HIGH
        for m in range(j):
            if pvals[m] < pj:
                v = hvals[chosen[m]]
                if v > lo:
                    lo = v
            else:
                v = hvals[chosen[m]]
                if v < hi:
                    hi = v
        last = j == k - 1
        for i in range(start, n - (k - 1 - j)):
            if lo < hvals[i] < hi:
                chosen[j] = i
                if last or extend(j + 1, i + 1):
                    return True
        return False

    if extend(0, 0):
        return tuple(chosen)
    return None


def contains_values(hvals, pvals) -> bool:
    return occurrence_in_values(hvals, pvals) is not None


def completes_at_end(prefix, v, pvals) -> bool:
    """Does appending value ``v`` to ``prefix`` complete an occurrence of
    ``pvals`` whose last element is the new entry?

    This is the incremental step used by avoidance enumeration and merge
    coloring: a previously avoiding sequence can only start containing
    the pattern through an occurrence that ends at the new entry.
    Patterns of length <= 3 get linear scans; longer patterns fall back
    to pinned backtracking.
    """
    k = len(pvals)
    if k == 1:
        return True
    if k == 2:
        if pvals[0] < pvals[1]:
            return any(w < v for w in prefix)
        return any(w > v for w in prefix)
    if k == 3:
        return _completes3(prefix, v, pvals[0] < pvals[1], pvals[0] < pvals[2],
                           pvals[1] < pvals[2])
    return _completes_pinned(prefix, v, pvals)


def _completes3(prefix, v, p01, p02, p12):
    # One pass over candidate middle entries; a running extremum stands in
    # for the best possible first entry.
    if p01:
        if p02:
            m = _HIGH  # min so far
            for w in prefix:
                if ((w < v) == p12) and m < w and m < v:
                    return True
                if w < m:
                    m = w
        else:
            m = _HIGH  # min of values above v
            for w in prefix:
                if ((w < v) == p12) and m < w:
                    return True
                if v < w < m:
                    m = w
    else:
        if p02:
            m = _LOW  # max of values below v
            for w in prefix:
                if ((w < v) == p12) and m > w:
                    return True
                if m < w < v:
                    m = w
        else:
            m = _LOW  # max so far
            for w in prefix:
                if ((w < v) == p12) and m > w and m > v:
                    return True
                if w > m:
                    m = w
    return False


def _completes_pinned(prefix, v, pvals):
    k = len(pvals)
    n = len(prefix)
    if k - 1 > n:
        return False
    plast = pvals[k - 1]
    vals = [0] * (k - 1)

    def extend(j, start):
        pj = pvals[j]
        lo, hi = (_LOW, v) if pj < plast else (v, _HIGH)
        for m in range(j):
            if pvals[m] < pj:
                if vals[m] > lo:
                    lo = vals[m]
            elif vals[m] < hi:
                hi = vals[m]
        last = j == k - 2
        for i in range(start, n - (k - 2 - j)):
            w = prefix[i]
            if lo < w < hi:
                vals[j] = w
                if last or extend(j + 1, i + 1):
                    return True
        return False

    return extend(0, 0)


def contains(host: Permutation, pattern: Permutation) -> bool:
    """True iff some subsequence of the host has the same relative order
    as the pattern."""
    if pattern.n == 0:
        raise EmptyPattern("containment is defined for nonempty patterns")
    return contains_values(host.entries, pattern.entries)


def find_occurrence(host: Permutation, pattern: Permutation) -> Occurrence | None:
    """Like :func:`contains` but returns 1-based witness positions."""
    if pattern.n == 0:
        raise EmptyPattern("containment is defined for nonempty patterns")
    idx = occurrence_in_values(host.entries, pattern.entries)
    if idx is None:
        return None
    return Occurrence(tuple(i + 1 for i in idx))


def avoids(host: Permutation, pattern: Permutation) -> bool:
    return not contains(host, pattern)


# ---------------------------------------------------------------------------
# matrix containment
# ---------------------------------------------------------------------------

def _greedy_transversal(col_masks):
    """Strictly increasing column choice with one column per entry of
    ``col_masks``; returns chosen 0-based columns or None."""
    cols = []
    c = -1
    for mask in col_masks:
        m = mask >> (c + 1)
        if m == 0:
            return None
        c += 1 + ((m & -m).bit_length() - 1)
        cols.append(c)
    return cols


def matrix_occurrence_masks(host_masks, host_cols, pat_masks, pat_cols):
    """Submatrix containment on raw bitmask rows.

    Returns (row_selection, col_selection) in 0-based indices, or None.
    Extra ones in the host are allowed; a host 1 is required wherever the
    pattern has one.
    """
    hk, pk = len(host_masks), len(pat_masks)
    if pk > hk or pat_cols > host_cols:
        return None
    # per pattern column, the pattern rows that require a one there
    need = [[a for a in range(pk) if pat_masks[a] >> b & 1] for b in range(pat_cols)]
    full = (1 << host_cols) - 1
    rows_sel = [0] * pk

    def choose(a, start):
        if a == pk:
            allowed = []
            for b in range(pat_cols):
                mask = full
                for r in need[b]:
                    mask &= host_masks[rows_sel[r]]
                allowed.append(mask)
            cols = _greedy_transversal(allowed)
            return cols
        for i in range(start, hk - (pk - 1 - a)):
            rows_sel[a] = i
            cols = choose(a + 1, i + 1)
            if cols is not None:
                return cols
        return None

    cols = choose(0, 0)
    if cols is None:
        return None
    return list(rows_sel), cols


def matrix_contains(host: BinaryMatrix, pattern: BinaryMatrix) -> bool:
    """True iff some order-preserving row/column selection of the host
    dominates the pattern's ones."""
    if not pattern.ones:
        raise EmptyPattern("matrix containment needs a pattern with at least one 1")
    return (
        matrix_occurrence_masks(
            host.row_masks(), host.cols, pattern.row_masks(), pattern.cols
        )
        is not None
    )


def find_matrix_occurrence(host: BinaryMatrix, pattern: BinaryMatrix) -> Occurrence | None:
    """Witness cells, one per pattern one (pattern ones in sorted order)."""
    if not pattern.ones:
        raise EmptyPattern("matrix containment needs a pattern with at least one 1")
    sel = matrix_occurrence_masks(
        host.row_masks(), host.cols, pattern.row_masks(), pattern.cols
    )
    if sel is None:
        return None
    rows_sel, cols_sel = sel
    cells = tuple(
        (rows_sel[a - 1] + 1, cols_sel[b - 1] + 1) for a, b in sorted(pattern.ones)
    )
    return Occurrence(cells)


def matrix_avoids(host: BinaryMatrix, pattern: BinaryMatrix) -> bool:
    return not matrix_contains(host, pattern)


# ---------------------------------------------------------------------------
# permutation <-> matrix
# ---------------------------------------------------------------------------

def to_matrix(p: Permutation) -> PermutationMatrix:
    """Permutation matrix with ones at (k + 1 - p[j], j+1)."""
    k = p.n
    ones = frozenset((k + 1 - v, j + 1) for j, v in enumerate(p.entries))
    return PermutationMatrix(BinaryMatrix(k, k, ones))


def from_matrix(m: PermutationMatrix | BinaryMatrix) -> Permutation:
    """Inverse of :func:`to_matrix`; validates the one-per-row/column
    invariant first."""
    if isinstance(m, BinaryMatrix):
        m = PermutationMatrix(m)
    k = m.k
    values = [0] * k
    for r, c in m.matrix.ones:
        values[c - 1] = k + 1 - r
    return Permutation(tuple(values))


def rotate90(m):
    """Quarter turn: cell (i, j) of an m x n matrix goes to (j, m+1-i) of
    the n x m result.  Accepts and returns PermutationMatrix unchanged in
    kind."""
    if isinstance(m, PermutationMatrix):
        return PermutationMatrix(rotate90(m.matrix))
    ones = frozenset((c, m.rows + 1 - r) for r, c in m.ones)
    return BinaryMatrix(m.cols, m.rows, ones)


# ---------------------------------------------------------------------------
# symmetries and sums
# ---------------------------------------------------------------------------

def reverse(p: Permutation) -> Permutation:
    return Permutation(tuple(reversed(p.entries)))


def complement(p: Permutation) -> Permutation:
    n = p.n
    return Permutation(tuple(n + 1 - v for v in p.entries))


def inverse(p: Permutation) -> Permutation:
    out = [0] * p.n
    for i, v in enumerate(p.entries):
        out[v - 1] = i + 1
    return Permutation(tuple(out))


def direct_sum(p: Permutation, q: Permutation) -> Permutation:
    """q's values placed above p's, positions after p's."""
    if p.n == 0 or q.n == 0:
        raise EmptyOperand("direct sum needs nonempty operands")
    return Permutation(p.entries + tuple(v + p.n for v in q.entries))


def skew_sum(p: Permutation, q: Permutation) -> Permutation:
    """p's values placed above q's, positions before q's."""
    if p.n == 0 or q.n == 0:
        raise EmptyOperand("skew sum needs nonempty operands")
    return Permutation(tuple(v + q.n for v in p.entries) + q.entries)


# ---------------------------------------------------------------------------
# inflation and block structure
# ---------------------------------------------------------------------------

def inflate(skeleton: Permutation, blocks) -> Permutation:
    """Replace entry i of the skeleton by an interval order-isomorphic to
    blocks[i]; intervals are arranged like the skeleton."""
    blocks = list(blocks)
    if len(blocks) != skeleton.n:
        raise ArityMismatch(f"{skeleton.n} skeleton entries, {len(blocks)} blocks")
    if any(b.n == 0 for b in blocks):
        raise EmptyBlock("inflation blocks must be nonempty")
    sizes = [b.n for b in blocks]
    # value offset of segment i = total size of segments ranked below it
    offsets = [0] * len(blocks)
    for i, rank in enumerate(skeleton.entries):
        offsets[i] = sum(sizes[j] for j, rk in enumerate(skeleton.entries) if rk < rank)
    out = []
    for i, b in enumerate(blocks):
        out.extend(offsets[i] + v for v in b.entries)
    return Permutation(tuple(out))


def blockable_decompositions(p: Permutation, c: int) -> list[BlockDecomposition]:
    """All ways to cut the positions of ``p`` into exactly ``c``
    contiguous segments whose value sets are contiguous intervals.

    Enumerates all C(n-1, c-1) cut sets directly; empty list means ``p``
    is not c-blockable.  Every returned decomposition round-trips through
    :func:`inflate`.
    """
    n = p.n
    if not 1 <= c <= n:
        raise PreconditionViolated(f"need 1 <= c <= {n}, got {c}")
    entries = p.entries
    found = []
    for cuts in itertools.combinations(range(1, n), c - 1):
        bounds = (0, *cuts, n)
        segments = [entries[bounds[i]:bounds[i + 1]] for i in range(c)]
        mins = []
        ok = True
        for seg in segments:
            lo, hi = min(seg), max(seg)
            if hi - lo + 1 != len(seg):
                ok = False
                break
            mins.append(lo)
        if not ok:
            continue
        skeleton = Permutation(pattern_of(mins))
        blocks = tuple(Permutation(pattern_of(seg)) for seg in segments)
        found.append(BlockDecomposition(skeleton, blocks))
    return found
