"""Competitor algorithms: naive insertion, adaptive sorting, spectral.

Naive insertion shares the iterative-insertion skeleton but replaces the
backtracking search with a plain binary search (no sanity re-tests, no
recovery from a wrong descent). The two batch algorithms consume a single
noisy matrix built by spreading the budget uniformly over all pairs
(`batch_observe`), which is how batch methods are put on an equal sampling
footing with the active ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .asii import MIN_TEST_BUDGET, AsiiTrace, TestOutcome, triplet_test
from .core import DimensionMismatchError, Permutation, SeriationError, SimilarityMatrix
from .jacobi import jacobi_eigh
from .oracle import Oracle

ADAPTIVE_PAIRINGS = ("positional", "exclude-both")


@dataclass(frozen=True)
class BatchObservation:
    """One noisy matrix Y assembled from uniform pair sampling.

    The diagonal is zero and never sampled (self-similarities are outside
    the observation model); row statistics downstream therefore use
    off-diagonal sums only.
    """

    y: SimilarityMatrix
    samples_per_pair: int


def batch_observe(oracle: Oracle, budget_t: int) -> BatchObservation:
    """Average budget_t // n^2 draws per unordered pair into a matrix."""
    n = oracle.matrix.n
    per_pair = budget_t // (n * n)
    if per_pair < 1:
        raise SeriationError(
            f"budget {budget_t} too small for one sample per pair at n={n}"
        )
    y = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            y[i - 1, j - 1] = y[j - 1, i - 1] = oracle.sample_pair_mean(i, j, per_pair)
    return BatchObservation(y=SimilarityMatrix(y), samples_per_pair=per_pair)


def naive_insertion(
    oracle: Oracle,
    n: int,
    budget_t: int,
    partial: Optional[Permutation] = None,
    *,
    trace: Optional[AsiiTrace] = None,
) -> Permutation:
    """Iterative insertion with a plain (non-backtracking) binary search.

    The extremes test keeps the T // (3 * n_tilde) budget; each binary
    search step runs with T // (n * ln k) where k is the item being
    inserted (clamped to >= 3 samples for tiny budgets, natural log).
    """
    if n < 1:
        raise SeriationError("n must be >= 1")
    if oracle.matrix.n != n:
        raise DimensionMismatchError(
            f"n={n} does not match the oracle matrix size {oracle.matrix.n}"
        )
    from .asii import _start_order  # same initialisation rules

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
        outcome = triplet_test(oracle, k, order[0], order[-1], t0_extremes)
        if outcome is TestOutcome.LEFT:
            position = 1
        elif outcome is TestOutcome.RIGHT:
            position = len(order) + 1
        else:
            raw = int(budget_t / (n * math.log(k)))
            t0 = max(MIN_TEST_BUDGET, raw)
            if trace is not None and raw < MIN_TEST_BUDGET:
                trace.budget_overrun = True
            rank_of = {it: idx + 1 for idx, it in enumerate(order)}
            left, right = order[0], order[-1]
            while rank_of[right] - rank_of[left] > 1:
                mid = order[(rank_of[left] + rank_of[right]) // 2 - 1]
                if triplet_test(oracle, k, left, mid, t0) is TestOutcome.MIDDLE:
                    right = mid
                else:
                    left = mid
            position = rank_of[left] + 1
        order.insert(position - 1, k)

    return Permutation.from_ordering(order)


def _l1_chain_distance(y: np.ndarray, j: int, prev: int, pairing: str) -> float:
    """L1 distance between rows j and prev (0-based), each with its own
    diagonal position deleted.

    positional: literal reading, the two (n-1)-vectors are compared slot by
    slot (deleted positions differ, so slots between them straddle by one).
    exclude-both: both indices are dropped from both rows so that the
    remaining coordinates align by column label.
    """
    n = y.shape[0]
    if pairing == "positional":
        a = np.delete(y[j], j)
        b = np.delete(y[prev], prev)
        return float(np.sum(np.abs(a - b)))
    keep = [c for c in range(n) if c != j and c != prev]
    return float(np.sum(np.abs(y[j, keep] - y[prev, keep])))


def adaptive_sorting(
    batch: BatchObservation, *, pairing: str = "positional"
) -> Permutation:
    """Chain items greedily by row-profile similarity.

    The first item minimises the row sum; each next one minimises the L1
    distance of its row to the previous item's row. Argmin ties break
    towards the lowest item index. Deterministic in Y.
    """
    if pairing not in ADAPTIVE_PAIRINGS:
        raise ValueError(f"unknown pairing {pairing!r}")
    y = batch.y.entries
    n = batch.y.n
    if n < 2:
        raise SeriationError("adaptive sorting needs n >= 2")
    scores = y.sum(axis=1)  # diagonal is zero, so this is the off-diagonal sum
    chain = [int(np.argmin(scores))]
    remaining = set(range(n)) - {chain[0]}
    while remaining:
        prev = chain[-1]
        best = min(
            remaining,
            key=lambda j: (_l1_chain_distance(y, j, prev, pairing), j),
        )
        chain.append(best)
        remaining.discard(best)
    return Permutation.from_ordering([i + 1 for i in chain])


def spectral_seriation(batch: BatchObservation) -> Permutation:
    """Order by the eigenvector of the second-smallest Laplacian eigenvalue.

    L = D - Y with D the diagonal of row sums. Items are ranked by
    ascending eigenvector entry (stable in the item index on exact ties,
    which also fixes the degenerate constant-matrix case). The eigenvector
    sign is arbitrary; both signs are valid orderings of each other's
    reverse. Deterministic in Y.
    """
    y = batch.y.entries
    n = batch.y.n
    if n < 2:
        raise SeriationError("spectral seriation needs n >= 2")
    laplacian = np.diag(y.sum(axis=1)) - y
    _, vectors = jacobi_eigh(laplacian)
    fiedler = vectors[:, 1]
    by_entry = np.argsort(fiedler, kind="stable")
    return Permutation.from_ordering([int(i) + 1 for i in by_entry])
