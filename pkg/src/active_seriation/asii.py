"""Active seriation by iterative insertion (ASII).

The procedure builds the ordering one item at a time. For the item under
insertion it first runs a three-way comparison (`triplet_test`) against the
two extremes of the current ordering; an interior verdict hands over to a
noisy binary search with backtracking (`bbs`) that maintains a stack of
nested candidate intervals and pops the stack whenever a sanity re-test of
the active interval flags an inconsistency.

Budget discipline (total budget T, n_tilde items to insert):

* extremes test: T // (3 * n_tilde) per call;
* search steps:  T // (3 * n_tilde * t_steps) per call, with
  t_steps = 3 * ceil(log2(k)) search iterations for the k-th item.

Each `triplet_test` with budget t0 consumes exactly 3 * (t0 // 3) oracle
draws. Per-test budgets are clamped below at 3 (one draw per pair) so that
tiny budgets degrade gracefully instead of erroring; any clamping raises a
budget-overrun flag on the trace, since the <= T accounting only holds for
unclamped allocations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import DimensionMismatchError, Permutation, SeriationError
from .oracle import Oracle

MIN_TEST_BUDGET = 3  # one sample per pair


class TestOutcome(enum.Enum):
    __test__ = False  # not a pytest class despite the name

    LEFT = -1
    MIDDLE = 0
    RIGHT = 1


def ceil_log2(k: int) -> int:
    if k < 1:
        raise ValueError("k must be >= 1")
    return (k - 1).bit_length()


def triplet_test(oracle: Oracle, k: int, l: int, r: int, t0: int) -> TestOutcome:
    """Place item k relative to the pair (l, r) from noisy samples.

    Draws t0 // 3 samples for each of {l,r}, {k,l}, {k,r} (in that order)
    and compares the empirical means: the smallest mean identifies the two
    items farthest apart. Exact ties resolve through the if/else chain
    below, i.e. towards RIGHT.
    """
    if k == l or k == r or l == r:
        raise SeriationError(f"test requires distinct items, got ({k}, {l}, {r})")
    per_pair = t0 // 3
    m_lr = oracle.sample_pair_mean(l, r, per_pair)
    m_kl = oracle.sample_pair_mean(k, l, per_pair)
    m_kr = oracle.sample_pair_mean(k, r, per_pair)
    if m_lr < min(m_kl, m_kr):
        return TestOutcome.MIDDLE
    if m_kl > m_kr:
        return TestOutcome.LEFT
    return TestOutcome.RIGHT


def truthful_test(truth: Permutation) -> Callable[..., TestOutcome]:
    """Infinite-sample stand-in for `triplet_test`: answers from the true
    ordering and consumes no budget. Requires oriented reference pairs
    (truth rank of l below truth rank of r), which every search that only
    ever descends into sub-intervals of an oriented interval preserves."""

    def fn(oracle: Oracle, k: int, l: int, r: int, t0: int) -> TestOutcome:
        pk, pl, pr = truth.rank_of(k), truth.rank_of(l), truth.rank_of(r)
        if pl >= pr:
            raise SeriationError(f"disoriented reference pair ({l}, {r})")
        if pk < pl:
            return TestOutcome.LEFT
        if pk > pr:
            return TestOutcome.RIGHT
        return TestOutcome.MIDDLE

    return fn


class IntervalStack:
    """The list of nested search intervals; the last entry is active.

    Kept non-empty at all times: the initial interval can never be popped.
    Index semantics follow the convention that `last_index` is len - 1, so
    a single-entry stack has last_index 0.
    """

    __slots__ = ("entries",)

    def __init__(self, l0: int, r0: int):
        self.entries: list[tuple[int, int]] = [(l0, r0)]

    @property
    def active(self) -> tuple[int, int]:
        return self.entries[-1]

    @property
    def last_index(self) -> int:
        return len(self.entries) - 1

    def push(self, pair: tuple[int, int]) -> None:
        self.entries.append(pair)

    def pop(self) -> tuple[int, int]:
        if len(self.entries) < 2:
            raise SeriationError("cannot pop the initial interval")
        return self.entries.pop()

    def snapshot(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.entries)

    def validate_nesting(self, rank_of: dict) -> None:
        """Every entry's rank interval must lie inside its predecessor's."""
        for (pl, pr), (cl, cr) in zip(self.entries, self.entries[1:]):
            if not (rank_of[pl] <= rank_of[cl] and rank_of[cr] <= rank_of[pr]):
                raise SeriationError(
                    f"interval nesting violated: ({cl},{cr}) not inside ({pl},{pr})"
                )


@dataclass
class BbsStep:
    """One search iteration; `stack_index` is the post-step last index,
    `last_good` / `potential` are filled only when a truth permutation was
    supplied (they are unobservable otherwise)."""

    t: int
    action: str  # backtrack | descend-left | descend-right | hold
    stack_index: int
    tests: int
    stack: tuple[tuple[int, int], ...]
    last_good: Optional[int] = None
    potential: Optional[int] = None


@dataclass
class BbsTrace:
    item: int
    t_steps: int
    per_test_budget: int
    per_test_raw: int
    steps: list[BbsStep] = field(default_factory=list)
    tests_run: int = 0
    queries: int = 0
    budget_overrun: bool = False


def _last_good_index(stack: IntervalStack, item: int, truth: Permutation) -> int:
    """Largest stack index whose interval contains the item under the true
    ordering; -1 when none does (possible only for a bad initial interval)."""
    for idx in range(len(stack.entries) - 1, -1, -1):
        l, r = stack.entries[idx]
        lo, hi = truth.rank_of(l), truth.rank_of(r)
        if lo < truth.rank_of(item) < hi:
            return idx
    return -1


def bbs(
    oracle: Oracle,
    order: list[int],
    item: int,
    budget_t: int,
    n_tilde: int,
    *,
    truth: Optional[Permutation] = None,
    collect_trace: bool = False,
    test_fn: Callable[..., TestOutcome] = triplet_test,
) -> tuple[int, Optional[BbsTrace]]:
    """Binary & backtracking search for the insertion rank of `item`.

    `order` lists the already-inserted items by increasing rank and is not
    modified. Runs exactly t_steps iterations; each one either backtracks
    (stack holds >= 2 intervals and the sanity re-test of the active
    interval comes back non-middle), holds (active rank width <= 1), or
    descends into the half selected by testing against the rank-midpoint
    item. Returns rank(final left endpoint) + 1, in {2, ..., len(order)};
    a final width above 1 is not an error, correctness is probabilistic.
    """
    if len(order) < 2:
        raise SeriationError("bbs needs an ordering of at least two items")
    k = len(order) + 1
    t_steps = 3 * ceil_log2(k)
    raw = budget_t // (3 * n_tilde * t_steps)
    t0 = max(MIN_TEST_BUDGET, raw)
    rank_of = {it: idx + 1 for idx, it in enumerate(order)}

    tracing = collect_trace or truth is not None
    trace = (
        BbsTrace(
            item=item,
            t_steps=t_steps,
            per_test_budget=t0,
            per_test_raw=raw,
            budget_overrun=raw < MIN_TEST_BUDGET,
        )
        if tracing
        else None
    )
    ledger_before = oracle.ledger.total

    stack = IntervalStack(order[0], order[-1])

    def record(t: int, action: str, tests: int) -> None:
        if trace is None:
            return
        trace.tests_run += tests
        stack.validate_nesting(rank_of)
        step = BbsStep(
            t=t,
            action=action,
            stack_index=stack.last_index,
            tests=tests,
            stack=stack.snapshot(),
        )
        if truth is not None:
            w = _last_good_index(stack, item, truth)
            step.last_good = w
            step.potential = stack.last_index + ceil_log2(k) - 2 * w
        trace.steps.append(step)

    for t in range(1, t_steps + 1):
        if stack.last_index >= 1:
            l, r = stack.active
            if test_fn(oracle, item, l, r, t0) is not TestOutcome.MIDDLE:
                stack.pop()
                record(t, "backtrack", 1)
                continue
            sanity_tests = 1
        else:
            sanity_tests = 0
        l, r = stack.active
        if rank_of[r] - rank_of[l] <= 1:
            stack.push((l, r))
            record(t, "hold", sanity_tests)
            continue
        mid_rank = (rank_of[l] + rank_of[r]) // 2
        m_item = order[mid_rank - 1]
        if test_fn(oracle, item, l, m_item, t0) is TestOutcome.MIDDLE:
            stack.push((l, m_item))
            record(t, "descend-left", sanity_tests + 1)
        else:
            stack.push((m_item, r))
            record(t, "descend-right", sanity_tests + 1)

    if trace is not None:
        trace.queries = oracle.ledger.total - ledger_before
    return rank_of[stack.active[0]] + 1, trace


@dataclass
class InsertionRecord:
    item: int
    extremes_outcome: TestOutcome
    extremes_budget: int
    extremes_budget_raw: int
    extremes_queries: int
    position: int
    bbs_trace: Optional[BbsTrace]
    bbs_queries: int
    order_after: tuple[int, ...]


@dataclass
class AsiiTrace:
    """Optional per-insertion instrumentation collector; pass a fresh
    instance to `asii` to fill it. Leave `truth` unset except in test runs
    that check search-potential bookkeeping against the real ordering."""

    truth: Optional[Permutation] = None
    n_tilde: int = 0
    insertions: list[InsertionRecord] = field(default_factory=list)
    budget_overrun: bool = False


def _start_order(n: int, partial: Optional[Permutation]) -> tuple[list[int], int]:
    """Initial ordering and n_tilde. A partial ordering on fewer than three
    items carries no information (reversal ambiguity) and is ignored."""
    if partial is not None:
        if partial.n > n:
            raise SeriationError(f"partial ordering covers {partial.n} > n={n} items")
        if partial.n >= 3:
            return list(partial.ordering()), n - partial.n
    return [1, 2] if n >= 2 else [1], n


def asii(
    oracle: Oracle,
    n: int,
    budget_t: int,
    partial: Optional[Permutation] = None,
    *,
    trace: Optional[AsiiTrace] = None,
) -> Permutation:
    """Recover the latent ordering of n items within a sampling budget.

    `partial`, when it covers at least three items, must be a correct
    relative ordering of items 1..m; the remaining items m+1..n are
    inserted one at a time. Budgets are per-insertion as described in the
    module docstring; the ledger total stays <= budget_t whenever no
    per-test clamp fires (see `AsiiTrace.budget_overrun`).
    """
    if n < 1:
        raise SeriationError("n must be >= 1")
    if oracle.matrix.n != n:
        raise DimensionMismatchError(
            f"n={n} does not match the oracle matrix size {oracle.matrix.n}"
        )
    order, n_tilde = _start_order(n, partial)
    if trace is not None:
        trace.n_tilde = n_tilde
    k0 = max(2, n - n_tilde)
    if n <= len(order):
        return Permutation.from_ordering(order[:n])

    raw_extremes = budget_t // (3 * n_tilde)
    t0_extremes = max(MIN_TEST_BUDGET, raw_extremes)
    if trace is not None and raw_extremes < MIN_TEST_BUDGET:
        trace.budget_overrun = True

    for k in range(k0 + 1, n + 1):
        before = oracle.ledger.total
        outcome = triplet_test(oracle, k, order[0], order[-1], t0_extremes)
        extremes_queries = oracle.ledger.total - before

        bbs_trace = None
        bbs_queries = 0
        if outcome is TestOutcome.LEFT:
            position = 1
        elif outcome is TestOutcome.RIGHT:
            position = len(order) + 1
        else:
            before = oracle.ledger.total
            position, bbs_trace = bbs(
                oracle,
                order,
                k,
                budget_t,
                n_tilde,
                truth=trace.truth if trace is not None else None,
                collect_trace=trace is not None,
            )
            bbs_queries = oracle.ledger.total - before
        order.insert(position - 1, k)

        if trace is not None:
            if bbs_trace is not None and bbs_trace.budget_overrun:
                trace.budget_overrun = True
            trace.insertions.append(
                InsertionRecord(
                    item=k,
                    extremes_outcome=outcome,
                    extremes_budget=t0_extremes,
                    extremes_budget_raw=raw_extremes,
                    extremes_queries=extremes_queries,
                    position=position,
                    bbs_trace=bbs_trace,
                    bbs_queries=bbs_queries,
                    order_after=tuple(order),
                )
            )

    return Permutation.from_ordering(order)
