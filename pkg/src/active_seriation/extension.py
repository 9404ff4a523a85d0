"""Tolerance-based seriation for matrices without uniform separation.

When some items are closer than a resolution delta_tilde, no procedure can
place them reliably. The variant here mirrors the iterative-insertion
procedure but (i) replaces the three-way comparison with a margin test
that may return NULL when no alternative wins by delta_tilde / 2, and
(ii) validates every interior insertion position against its two would-be
neighbours before committing. Items failing either gate are discarded; the
output is the ordered subset that was kept, which at high signal-to-noise
is delta_tilde-maximal: no discarded item could rejoin without dropping
the restricted matrix's minimal gap below delta_tilde.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .asii import MIN_TEST_BUDGET, BbsTrace, bbs
from .core import (
    Permutation,
    RankMap,
    SeriationError,
    SimilarityMatrix,
    SizeLimitError,
    brute_force_seriate,
    minimal_gap,
)
from .oracle import Oracle
from .scenarios import apply_permutation


class MarginTestOutcome(enum.Enum):
    LEFT = -1
    MIDDLE = 0
    RIGHT = 1
    NULL = "null"


def margin_test(
    oracle: Oracle, k: int, l: int, r: int, t0: int, delta_tilde: float
) -> MarginTestOutcome:
    """Three-way placement of k against (l, r), demanding a margin.

    Draws t0 // 3 samples per pair (same order as the plain test) and
    checks, in this order, whether the pair {l,r} / {k,r} / {k,l} is
    separated from the other two means by more than delta_tilde / 2; with
    a positive margin and exact means at most one event can hold, so the
    order only matters under noise (first hit wins). NULL when none holds.
    """
    if k == l or k == r or l == r:
        raise SeriationError(f"test requires distinct items, got ({k}, {l}, {r})")
    if delta_tilde <= 0:
        raise ValueError("delta_tilde must be positive")
    per_pair = t0 // 3
    m_lr = oracle.sample_pair_mean(l, r, per_pair)
    m_kl = oracle.sample_pair_mean(k, l, per_pair)
    m_kr = oracle.sample_pair_mean(k, r, per_pair)
    half = delta_tilde / 2.0
    if m_lr + half < min(m_kl, m_kr):
        return MarginTestOutcome.MIDDLE
    if m_kr + half < min(m_kl, m_lr):
        return MarginTestOutcome.LEFT
    if m_kl + half < min(m_kr, m_lr):
        return MarginTestOutcome.RIGHT
    return MarginTestOutcome.NULL


FIRST_TEST_NULL = "first-test-null"
VALIDATION_FAILED = "validation-failed"


@dataclass(frozen=True)
class DiscardRecord:
    item: int
    iteration: int
    reason: str


@dataclass
class ExtensionResult:
    """Ordered kept subset plus the discard log; kept items and discarded
    items always partition {1..n} exactly."""

    kept: RankMap
    discarded: list[DiscardRecord]

    @property
    def kept_size(self) -> int:
        return self.kept.size


@dataclass
class ExtensionTrace:
    n_tilde: int = 0
    bbs_traces: list[BbsTrace] = field(default_factory=list)
    budget_overrun: bool = False


def asii_extension(
    oracle: Oracle,
    n: int,
    budget_t: int,
    delta_tilde: float,
    partial: Optional[Permutation] = None,
    *,
    trace: Optional[ExtensionTrace] = None,
) -> ExtensionResult:
    """Insert items at resolution delta_tilde, discarding unresolvable ones.

    The extremes test and the post-search validation test each run with
    budget T // (4 * n_tilde); the inner search keeps its own split. A
    supplied partial ordering is trusted unconditionally, even at a
    tolerance that would have discarded some of its items.
    """
    if n < 1:
        raise SeriationError("n must be >= 1")
    if delta_tilde <= 0:
        raise ValueError("delta_tilde must be positive")
    if partial is not None and partial.n >= 3:
        if partial.n > n:
            raise SeriationError(f"partial ordering covers {partial.n} > n={n} items")
        order = list(partial.ordering())
        n_tilde = n - partial.n
    else:
        order = [1, 2] if n >= 2 else [1]
        n_tilde = n
    if trace is not None:
        trace.n_tilde = n_tilde
    k0 = max(2, n - n_tilde)
    discarded: list[DiscardRecord] = []
    if n <= len(order):
        return ExtensionResult(kept=RankMap.from_ordering(order[:n]), discarded=discarded)

    raw = budget_t // (4 * n_tilde)
    t0 = max(MIN_TEST_BUDGET, raw)
    if trace is not None and raw < MIN_TEST_BUDGET:
        trace.budget_overrun = True

    for k in range(k0 + 1, n + 1):
        b = margin_test(oracle, k, order[0], order[-1], t0, delta_tilde)
        if b is MarginTestOutcome.NULL:
            discarded.append(DiscardRecord(item=k, iteration=k, reason=FIRST_TEST_NULL))
            continue
        if b is MarginTestOutcome.LEFT:
            order.insert(0, k)
            continue
        if b is MarginTestOutcome.RIGHT:
            order.append(k)
            continue
        position, bbs_trace = bbs(
            oracle, order, k, budget_t, n_tilde, collect_trace=trace is not None
        )
        if trace is not None and bbs_trace is not None:
            trace.bbs_traces.append(bbs_trace)
            if bbs_trace.budget_overrun:
                trace.budget_overrun = True
        # An interior verdict at the extremes pins position in {2..|S|},
        # so both validation neighbours exist; anything else is a noise
        # pathology and the item is discarded conservatively.
        if not (2 <= position <= len(order)):
            discarded.append(DiscardRecord(item=k, iteration=k, reason=VALIDATION_FAILED))
            continue
        left_nb = order[position - 2]
        right_nb = order[position - 1]
        b_val = margin_test(oracle, k, left_nb, right_nb, t0, delta_tilde)
        if b_val is MarginTestOutcome.MIDDLE:
            order.insert(position - 1, k)
        else:
            discarded.append(DiscardRecord(item=k, iteration=k, reason=VALIDATION_FAILED))

    return ExtensionResult(kept=RankMap.from_ordering(order), discarded=discarded)


VERIFY_MAX_SUBSET = 10
VERIFY_MAX_N = 12

# slack for the gap-vs-delta comparison: recomputing a gap from permuted
# entries accumulates a few ulps of dust for non-dyadic values
GAP_COMPARISON_SLACK = 1e-9


def _gap_if_seriable(m: SimilarityMatrix) -> Optional[float]:
    """Minimal gap of the matrix in its seriated form, None when the matrix
    admits no strict-Robinson reordering."""
    perm = brute_force_seriate(m)
    if perm is None:
        return None
    return minimal_gap(apply_permutation(m, perm.inverse())).gap


def verify_delta_maximal(m: SimilarityMatrix, s, delta: float) -> bool:
    """Exhaustive check of delta-maximality of item subset s.

    True iff the restriction of m to s can be reordered into a strict
    Robinson matrix with minimal gap >= delta, while adding any single
    outside item breaks that property. Small instances only (the check
    runs the brute-force seriation oracle up to n+1 times).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    items = sorted(s)
    if len(items) > VERIFY_MAX_SUBSET or m.n > VERIFY_MAX_N:
        raise SizeLimitError(
            f"verify_delta_maximal limited to |s|<={VERIFY_MAX_SUBSET}, n<={VERIFY_MAX_N}"
        )
    if not items:
        raise ValueError("s must be nonempty")
    threshold = delta - GAP_COMPARISON_SLACK * max(1.0, abs(delta))

    def qualifies(subset) -> bool:
        gap = _gap_if_seriable(m.submatrix(subset))
        return gap is not None and gap >= threshold

    if not qualifies(items):
        return False
    return not any(
        qualifies(sorted(items + [k])) for k in range(1, m.n + 1) if k not in s
    )
