"""Active observation channel: noisy samples of hidden similarities.

All algorithms obtain data exclusively through `Oracle.sample_pair_mean`,
which draws independent noisy observations of a single matrix entry and
accounts for every draw in a `QueryLedger`. The oracle never refuses a
query; budget enforcement is post-hoc (the harness checks the ledger
against T after a run), because a hard cutoff would change algorithm
behaviour mid-run in ways that are not defined anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SeriationError, SimilarityMatrix
from .rng import PortableRng

NOISE_KINDS = ("gaussian", "bounded-uniform", "noiseless")


class SelfPairError(SeriationError):
    """Self-similarities are outside the observation model."""


class DegenerateBudgetError(SeriationError):
    """A query was requested with a zero sample count.

    Raised at the oracle level; algorithm-level callers clamp their per-test
    budgets to at least one sample per pair and set a budget-overrun flag
    instead of letting this propagate.
    """


@dataclass(frozen=True)
class NoiseModel:
    """Observation noise. sigma is the sub-Gaussian scale parameter.

    gaussian: N(0, sigma^2) additive noise.
    bounded-uniform: additive Uniform[-sigma*sqrt(3), sigma*sqrt(3)]
        (variance sigma^2; sub-Gaussian with parameter sigma*sqrt(3)).
        Exists to exercise non-Gaussian sub-Gaussian observations in tests.
    noiseless: exact entries; requires sigma = 0.
    """

    kind: str = "gaussian"
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if self.kind == "noiseless" and self.sigma != 0:
            raise ValueError("noiseless model requires sigma = 0")

    @classmethod
    def noiseless(cls) -> "NoiseModel":
        return cls(kind="noiseless", sigma=0.0)


@dataclass
class QueryLedger:
    """Counts of draws, in total and per unordered pair."""

    total: int = 0
    per_pair: dict = field(default_factory=dict)

    def record(self, i: int, j: int, count: int) -> None:
        key = (i, j) if i < j else (j, i)
        self.per_pair[key] = self.per_pair.get(key, 0) + count
        self.total += count

    def pair_count(self, i: int, j: int) -> int:
        key = (i, j) if i < j else (j, i)
        return self.per_pair.get(key, 0)


class Oracle:
    """Noisy view of a hidden similarity matrix, with seeded noise.

    Two oracles built from the same (matrix, noise, seed) produce identical
    observation streams for identical query sequences. A zero-sigma model
    short-circuits the generator (exact means, no stream consumption).
    Instances are single-threaded: the ledger and generator counter mutate.
    """

    def __init__(self, matrix: SimilarityMatrix, noise: NoiseModel, seed: int):
        self.matrix = matrix
        self.noise = noise
        self.ledger = QueryLedger()
        self._rng = PortableRng(seed)

    def sample_pair_mean(self, i: int, j: int, count: int) -> float:
        """Mean of `count` independent noisy draws of entry (i, j)."""
        if i == j:
            raise SelfPairError(f"self-pair ({i}, {i}) cannot be sampled")
        if count < 1:
            raise DegenerateBudgetError("sample count must be >= 1")
        if not (1 <= i <= self.matrix.n and 1 <= j <= self.matrix.n):
            raise ValueError(f"item out of range: ({i}, {j}) with n={self.matrix.n}")
        self.ledger.record(i, j, count)
        mean = self.matrix.value(i, j)
        sigma = self.noise.sigma
        if sigma == 0.0:
            return mean
        if self.noise.kind == "gaussian":
            return mean + sigma * float(np.mean(self._rng.normals(count)))
        # bounded-uniform on [-sigma*sqrt(3), sigma*sqrt(3)]
        half_width = sigma * math.sqrt(3.0)
        u = self._rng.uniforms(count)
        return mean + half_width * float(np.mean(2.0 * u - 1.0))

    def remaining_budget(self, budget_t: int) -> int:
        """budget_t minus draws so far; negative when overspent."""
        return budget_t - self.ledger.total
