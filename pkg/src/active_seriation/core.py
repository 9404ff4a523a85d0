"""Domain types for orderings and similarity matrices, plus structural checks.

Conventions used across the package:

* Items are labelled 1..n. A `Permutation` stores 1-based ranks: `pos[i-1]`
  is the position of item i in the ordering.
* An ordering is only identifiable up to reversal, so success of any
  recovery procedure is judged by `is_recovery_success`, which accepts the
  target permutation and its reverse alike.
* A matrix is "strictly Robinson" when every row/column of the upper
  triangle strictly decreases while moving away from the diagonal. It is
  "pre-R" when some simultaneous row/column permutation makes it strictly
  Robinson; `brute_force_seriate` finds that permutation by exhaustive
  search for small n and is the ground-truth oracle the rest of the test
  suite leans on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class SeriationError(Exception):
    """Base class for errors raised by this package."""


class SizeLimitError(SeriationError):
    """Instance too large for an exhaustive-search operation."""


class DimensionMismatchError(SeriationError):
    """Operands with incompatible sizes."""


BRUTE_FORCE_MAX_N = 10


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}; ``pos[i-1]`` is the rank of item i."""

    pos: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.pos) != list(range(1, len(self.pos) + 1)):
            raise ValueError(f"pos is not a bijection of 1..{len(self.pos)}: {self.pos}")

    @property
    def n(self) -> int:
        return len(self.pos)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_ordering(cls, ordering: Sequence[int]) -> "Permutation":
        """Build from the item sequence listed by increasing rank."""
        pos = [0] * len(ordering)
        for rank, item in enumerate(ordering, start=1):
            pos[item - 1] = rank
        return cls(tuple(pos))

    def ordering(self) -> tuple[int, ...]:
        """Items listed by increasing rank."""
        out = [0] * self.n
        for item, rank in enumerate(self.pos, start=1):
            out[rank - 1] = item
        return tuple(out)

    def rank_of(self, item: int) -> int:
        return self.pos[item - 1]

    def reverse(self) -> "Permutation":
        n = self.n
        return Permutation(tuple(n + 1 - r for r in self.pos))

    def inverse(self) -> "Permutation":
        return Permutation.from_ordering([r for r in self.pos])


def reverse(p: Permutation) -> Permutation:
    """Reversed ordering: rank r becomes n+1-r. Involution."""
    return p.reverse()


def random_permutation(rng, n: int) -> Permutation:
    """Uniform permutation of {1..n} drawn from a PortableRng stream."""
    return Permutation.from_ordering(rng.shuffled(list(range(1, n + 1))))


def is_recovery_success(estimate: Permutation, truth: Permutation) -> bool:
    """True iff the estimate equals the truth or its reversal."""
    if estimate.n != truth.n:
        raise DimensionMismatchError(f"size mismatch: {estimate.n} vs {truth.n}")
    if estimate.pos == truth.pos:
        return True
    n = truth.n
    return all(e == n + 1 - t for e, t in zip(estimate.pos, truth.pos))


@dataclass(frozen=True)
class RankMap:
    """A bijection from an item subset S onto {1..|S|}."""

    items: tuple[int, ...]  # sorted ascending
    rank: dict

    def __post_init__(self) -> None:
        if tuple(sorted(self.items)) != self.items:
            raise ValueError("items must be sorted ascending")
        ranks = sorted(self.rank[i] for i in self.items)
        if set(self.rank) != set(self.items) or ranks != list(range(1, len(self.items) + 1)):
            raise ValueError("rank must map items bijectively onto 1..|S|")

    @classmethod
    def from_ordering(cls, ordering: Sequence[int]) -> "RankMap":
        return cls(
            items=tuple(sorted(ordering)),
            rank={item: r for r, item in enumerate(ordering, start=1)},
        )

    @property
    def size(self) -> int:
        return len(self.items)

    def ordering(self) -> tuple[int, ...]:
        return tuple(sorted(self.items, key=lambda i: self.rank[i]))

    def as_permutation_over_items(self) -> Permutation:
        """Relabel items 1..|S| by ascending index and return their ranks."""
        return Permutation(tuple(self.rank[i] for i in self.items))


def relative_ranks(p: Permutation, items: Iterable[int]) -> Permutation:
    """Ranks of `items` (ascending item index) relative to each other in p."""
    items = sorted(items)
    by_rank = sorted(items, key=p.rank_of)
    rel = {item: r for r, item in enumerate(by_rank, start=1)}
    return Permutation(tuple(rel[i] for i in items))


class SimilarityMatrix:
    """Symmetric real n-by-n matrix of similarity scores (read-only)."""

    __slots__ = ("entries",)

    def __init__(self, entries: np.ndarray | Sequence[Sequence[float]]):
        a = np.array(entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix must be symmetric")
        a.flags.writeable = False
        self.entries = a

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def value(self, i: int, j: int) -> float:
        """Entry for the 1-based item pair (i, j)."""
        return float(self.entries[i - 1, j - 1])

    def submatrix(self, items: Sequence[int]) -> "SimilarityMatrix":
        idx = [i - 1 for i in items]
        return SimilarityMatrix(self.entries[np.ix_(idx, idx)])

    def __eq__(self, other) -> bool:
        return isinstance(other, SimilarityMatrix) and np.array_equal(
            self.entries, other.entries
        )

    def __repr__(self) -> str:
        return f"SimilarityMatrix(n={self.n})"


@dataclass(frozen=True)
class MinimalGapReport:
    """Smallest adjacent difference of a Robinson-ordered matrix.

    `witness` names the two 1-based positions whose difference attains the
    minimum, as ((i, j), (i2, j2)) with gap = R[i,j] - R[i2,j2]. It is None
    only for n = 1 where no adjacent difference exists (gap = +inf).
    """

    gap: float
    witness: Optional[tuple[tuple[int, int], tuple[int, int]]]


def _adjacent_differences(a: np.ndarray):
    """Yield (diff, (i, j), (i2, j2)) over all well-defined upper-triangle
    adjacent differences: row steps R[i,j]-R[i-1,j] for 2 <= i <= j, and
    column steps R[i,j]-R[i,j+1] for i <= j <= n-1. 1-based positions."""
    n = a.shape[0]
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if i >= 2:
                yield a[i - 1, j - 1] - a[i - 2, j - 1], (i, j), (i - 1, j)
            if j <= n - 1:
                yield a[i - 1, j - 1] - a[i - 1, j], (i, j), (i, j + 1)


def minimal_gap(m: SimilarityMatrix, *, restricted: bool = False) -> MinimalGapReport:
    """Minimum adjacent difference over the upper triangle.

    A strictly Robinson matrix has gap > 0; a non-Robinson input yields a
    report with gap <= 0 whose witness points at a violated inequality
    (callers branch on the sign rather than catching an exception).

    With restricted=True only differences with 1 < i < j <= n-1 enter the
    minimum (an intentionally narrower index range kept for comparison;
    empty for n <= 3, reported as gap = +inf).
    """
    a = m.entries
    best = math.inf
    best_witness = None
    for diff, p1, p2 in _adjacent_differences(a):
        if restricted:
            i, j = p1
            if not (1 < i < j <= m.n - 1):
                continue
        if diff < best:
            best = float(diff)
            best_witness = (p1, p2)
    return MinimalGapReport(gap=best, witness=best_witness)


def is_robinson(m: SimilarityMatrix, strict: bool = True) -> bool:
    """Whether entries decrease (strictly, or weakly) away from the diagonal."""
    a = m.entries
    n = m.n
    if n == 1:
        return True
    iu, ju = np.triu_indices(n)
    # row steps need i >= 2 (0-based: i >= 1); column steps need j <= n-2
    row_mask = iu >= 1
    col_mask = ju <= n - 2
    row_diffs = a[iu[row_mask], ju[row_mask]] - a[iu[row_mask] - 1, ju[row_mask]]
    col_diffs = a[iu[col_mask], ju[col_mask]] - a[iu[col_mask], ju[col_mask] + 1]
    if strict:
        return bool(np.all(row_diffs > 0) and np.all(col_diffs > 0))
    return bool(np.all(row_diffs >= 0) and np.all(col_diffs >= 0))


def _extend_ok(a: np.ndarray, seq: list[int], new: int) -> bool:
    """Check the strict-Robinson constraints introduced by appending item
    `new` (0-based matrix index) as the next column/row of the reordered
    leading block. Constraints within a leading block never involve later
    items, so prefix pruning is sound."""
    t = len(seq)  # new occupies 0-based position t
    # column step: B[i][t-1] > B[i][t] for i <= t-1
    for i in range(t):
        if not (a[seq[i], seq[t - 1]] > a[seq[i], new]):
            return False
    # row step: B[i][t] > B[i-1][t] for 1 <= i <= t (diagonal included)
    prev = a[seq[0], new]
    for i in range(1, t):
        cur = a[seq[i], new]
        if not (cur > prev):
            return False
        prev = cur
    if not (a[new, new] > prev):
        return False
    return True


def brute_force_seriate(m: SimilarityMatrix) -> Optional[Permutation]:
    """Exhaustively search for a permutation making the matrix strictly
    Robinson; None when no ordering works.

    Enumeration runs as a depth-first search over orderings with prefix
    pruning (a strict-Robinson violation inside a leading block can never
    be repaired by later items), which is equivalent to scanning all n!
    candidates but fast on real inputs. The result is oriented so that
    item 1 ranks below item 2, resolving the two-orderings ambiguity.
    """
    n = m.n
    if n > BRUTE_FORCE_MAX_N:
        raise SizeLimitError(f"n={n} exceeds brute-force limit {BRUTE_FORCE_MAX_N}")
    if n == 1:
        return Permutation((1,))
    a = m.entries

    def search(seq: list[int], remaining: set[int]) -> Optional[list[int]]:
        if not remaining:
            return seq
        for cand in sorted(remaining):
            if _extend_ok(a, seq, cand):
                found = search(seq + [cand], remaining - {cand})
                if found is not None:
                    return found
        return None

    for first in range(n):
        found = search([first], set(range(n)) - {first})
        if found is not None:
            perm = Permutation.from_ordering([i + 1 for i in found])
            if perm.rank_of(1) > perm.rank_of(2):
                perm = perm.reverse()
            return perm
    return None
