"""Monte Carlo experiment runner and result aggregation.

A sweep is a grid over (scenario, algorithm, delta) at fixed (n, T, sigma).
Every replicate derives its own 64-bit seed from (master_seed, scenario,
algorithm, delta-bits, replicate), and from that seed three independent
substreams: the latent permutation draw, the scenario matrix (random
family s4 regenerates per replicate), and the observation noise. Records
are therefore reproducible cell by cell, bit for bit, and replicates can
fan out across a process pool without affecting the output (records are
keyed by replicate index, and gathering preserves grid order).

CSV schemas (both files carry a header row):

    records: scenario,algo,delta,rep,seed,success,queries,ms[,kept,discarded]
    curves:  scenario,algo,delta,mean_error,q10,q90,n_reps

`ms` is wall-clock and is the only nondeterministic column.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .asii import asii
from .baselines import adaptive_sorting, batch_observe, naive_insertion, spectral_seriation
from .core import (
    Permutation,
    SeriationError,
    SimilarityMatrix,
    is_recovery_success,
    random_permutation,
)
from .extension import asii_extension
from .oracle import NoiseModel, Oracle
from .rng import PortableRng, derive_seed, float_bits
from .scenarios import SCENARIO_IDS, ScenarioSpec, apply_permutation, generate, load_matrix_csv

ALGORITHMS = ("asii", "asii-ext", "naive", "adaptive-sorting", "spectral")
BATCH_ALGORITHMS = ("adaptive-sorting", "spectral")


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: every scenario x algorithm x delta cell runs
    `replicates` Monte Carlo replicates split into `groups` equal groups
    for the quantile bands."""

    scenarios: tuple[str, ...]
    algorithms: tuple[str, ...]
    delta_grid: tuple[float, ...]
    n: int
    budget_t: int
    sigma: float
    replicates: int = 100
    groups: int = 10
    master_seed: int = 0
    delta_tilde: Optional[float] = None  # asii-ext tolerance; None -> the cell's delta
    noise_kind: str = "gaussian"

    def __post_init__(self) -> None:
        for s in self.scenarios:
            if s not in SCENARIO_IDS:
                raise ValueError(f"unknown scenario {s!r}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        if not self.delta_grid or any(
            b <= a for a, b in zip(self.delta_grid, self.delta_grid[1:])
        ):
            raise ValueError("delta_grid must be nonempty and strictly increasing")
        if self.replicates < 1 or self.groups < 1 or self.replicates % self.groups:
            raise ValueError("replicates must be a positive multiple of groups")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        kwargs = dict(data)
        for key in ("scenarios", "algorithms", "delta_grid"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


@dataclass(frozen=True)
class RunRecord:
    scenario: str
    algorithm: str
    delta: float
    replicate: int
    seed: int
    success: bool
    queries: int
    wall_ms: float
    kept_size: Optional[int] = None
    discard_count: Optional[int] = None
    error: Optional[str] = None  # failure reason; not serialised


def _noise_model(kind: str, sigma: float) -> NoiseModel:
    if sigma == 0:
        return NoiseModel.noiseless()
    return NoiseModel(kind=kind, sigma=sigma)


def run_replicate(
    scenario_id: str,
    algorithm_id: str,
    delta: float,
    replicate: int,
    seed: int,
    n: int,
    budget_t: int,
    sigma: float,
    delta_tilde: Optional[float] = None,
    noise_kind: str = "gaussian",
) -> RunRecord:
    """One Monte Carlo run; all randomness derives from `seed`."""
    scenario_seed = derive_seed(seed, "scenario-matrix")
    perm_rng = PortableRng(derive_seed(seed, "latent-permutation"))
    oracle_seed = derive_seed(seed, "oracle-noise")

    r_matrix = generate(ScenarioSpec(id=scenario_id, n=n, delta=delta, seed=scenario_seed))
    truth = random_permutation(perm_rng, n)
    hidden = apply_permutation(r_matrix, truth)
    oracle = Oracle(hidden, _noise_model(noise_kind, sigma), oracle_seed)

    kept_size = None
    discard_count = None
    error = None
    start = time.perf_counter()
    try:
        if algorithm_id == "asii":
            success = is_recovery_success(asii(oracle, n, budget_t), truth)
        elif algorithm_id == "naive":
            success = is_recovery_success(naive_insertion(oracle, n, budget_t), truth)
        elif algorithm_id == "asii-ext":
            tol = delta_tilde if delta_tilde is not None else delta
            result = asii_extension(oracle, n, budget_t, tol)
            kept_size = result.kept_size
            discard_count = len(result.discarded)
            success = kept_size == n and is_recovery_success(
                Permutation(tuple(result.kept.rank[i] for i in range(1, n + 1))), truth
            )
        elif algorithm_id == "adaptive-sorting":
            success = is_recovery_success(adaptive_sorting(batch_observe(oracle, budget_t)), truth)
        elif algorithm_id == "spectral":
            success = is_recovery_success(spectral_seriation(batch_observe(oracle, budget_t)), truth)
        else:
            raise ValueError(f"unknown algorithm {algorithm_id!r}")
    except SeriationError as exc:
        success = False
        error = str(exc)
    wall_ms = (time.perf_counter() - start) * 1000.0

    return RunRecord(
        scenario=scenario_id,
        algorithm=algorithm_id,
        delta=delta,
        replicate=replicate,
        seed=seed,
        success=success,
        queries=oracle.ledger.total,
        wall_ms=wall_ms,
        kept_size=kept_size,
        discard_count=discard_count,
        error=error,
    )


def _replicate_args(config: ExperimentConfig, scenario: str, algorithm: str, delta: float):
    for rep in range(config.replicates):
        seed = derive_seed(config.master_seed, scenario, algorithm, float_bits(delta), rep)
        yield (
            scenario,
            algorithm,
            delta,
            rep,
            seed,
            config.n,
            config.budget_t,
            config.sigma,
            config.delta_tilde,
            config.noise_kind,
        )


def run_cell(
    config: ExperimentConfig,
    scenario: str,
    algorithm: str,
    delta: float,
    workers: int = 1,
) -> list[RunRecord]:
    """All replicates of one grid cell, in replicate order."""
    args = list(_replicate_args(config, scenario, algorithm, delta))
    if workers <= 1:
        return [run_replicate(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_replicate_star, args))


def _run_replicate_star(args) -> RunRecord:
    return run_replicate(*args)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[RunRecord]:
    """Full sweep in declared grid order."""
    records: list[RunRecord] = []
    for scenario in config.scenarios:
        for algorithm in config.algorithms:
            for delta in config.delta_grid:
                records.extend(run_cell(config, scenario, algorithm, delta, workers))
    return records


@dataclass(frozen=True)
class CurveRow:
    scenario: str
    algorithm: str
    delta: float
    mean_error: float
    q10: float
    q90: float
    n_reps: int


def nearest_rank_quantile(sorted_values: Sequence[float], q: float) -> float:
    """Nearest-rank quantile: the ceil(q*m)-th smallest of m values."""
    if not sorted_values:
        raise ValueError("empty value list")
    if not 0 < q <= 1:
        raise ValueError("q must be in (0, 1]")
    rank = math.ceil(q * len(sorted_values))
    return sorted_values[rank - 1]


def summarize(records: Sequence[RunRecord], groups: int = 10) -> list[CurveRow]:
    """Per-cell error rates with 0.1/0.9 quantile bands over group means.

    Replicates are split by index into `groups` consecutive equal groups;
    the bands are nearest-rank quantiles of the group-wise error rates.
    The cell mean error is exactly 1 - successes/replicates.
    """
    if not records:
        raise ValueError("no records to summarise")
    cells: dict[tuple[str, str, float], list[RunRecord]] = {}
    for rec in records:
        cells.setdefault((rec.scenario, rec.algorithm, rec.delta), []).append(rec)
    rows = []
    for (scenario, algorithm, delta), recs in cells.items():
        recs = sorted(recs, key=lambda r: r.replicate)
        m = len(recs)
        if m % groups:
            raise ValueError(
                f"cell ({scenario}, {algorithm}, {delta}) has {m} replicates, "
                f"not divisible into {groups} groups"
            )
        errors = [0.0 if r.success else 1.0 for r in recs]
        size = m // groups
        group_means = sorted(
            sum(errors[g * size : (g + 1) * size]) / size for g in range(groups)
        )
        successes = sum(1 for r in recs if r.success)
        rows.append(
            CurveRow(
                scenario=scenario,
                algorithm=algorithm,
                delta=delta,
                mean_error=1.0 - successes / m,
                q10=nearest_rank_quantile(group_means, 0.1),
                q90=nearest_rank_quantile(group_means, 0.9),
                n_reps=m,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# CSV serialisation


def write_records_csv(records: Sequence[RunRecord], path) -> None:
    with_ext = any(r.kept_size is not None for r in records)
    header = "scenario,algo,delta,rep,seed,success,queries,ms"
    if with_ext:
        header += ",kept,discarded"
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for r in records:
            row = (
                f"{r.scenario},{r.algorithm},{r.delta!r},{r.replicate},{r.seed},"
                f"{1 if r.success else 0},{r.queries},{r.wall_ms:.3f}"
            )
            if with_ext:
                kept = "" if r.kept_size is None else str(r.kept_size)
                disc = "" if r.discard_count is None else str(r.discard_count)
                row += f",{kept},{disc}"
            fh.write(row + "\n")


def read_records_csv(path) -> list[RunRecord]:
    records = []
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        expected = ["scenario", "algo", "delta", "rep", "seed", "success", "queries", "ms"]
        if header[: len(expected)] != expected:
            raise SeriationError(f"{path}: unexpected records header {header}")
        with_ext = len(header) > len(expected)
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            records.append(
                RunRecord(
                    scenario=parts[0],
                    algorithm=parts[1],
                    delta=float(parts[2]),
                    replicate=int(parts[3]),
                    seed=int(parts[4]),
                    success=parts[5] == "1",
                    queries=int(parts[6]),
                    wall_ms=float(parts[7]),
                    kept_size=int(parts[8]) if with_ext and parts[8] else None,
                    discard_count=int(parts[9]) if with_ext and parts[9] else None,
                )
            )
    return records


def write_curves_csv(rows: Sequence[CurveRow], path) -> None:
    with open(path, "w") as fh:
        fh.write("scenario,algo,delta,mean_error,q10,q90,n_reps\n")
        for r in rows:
            fh.write(
                f"{r.scenario},{r.algorithm},{r.delta!r},{r.mean_error!r},"
                f"{r.q10!r},{r.q90!r},{r.n_reps}\n"
            )


# ---------------------------------------------------------------------------
# One-shot seriation of a user-supplied matrix


@dataclass
class SeriationOutput:
    ordering: tuple[int, ...]  # items by increasing recovered rank
    reordered: SimilarityMatrix
    queries: int
    discarded: Optional[list] = None  # extension only


def seriate_file(
    path,
    algorithm: str,
    budget_t: int,
    sigma: float,
    seed: int,
    delta_tilde: Optional[float] = None,
    noise_kind: str = "gaussian",
) -> SeriationOutput:
    """Treat a matrix file as the hidden similarities and reorder it.

    The recovered ordering lists item indices (1-based, rank 1 first); the
    reordered matrix is the input permuted into that order, restricted to
    the kept subset for the tolerance-based algorithm.
    """
    matrix = load_matrix_csv(path)
    n = matrix.n
    oracle = Oracle(matrix, _noise_model(noise_kind, sigma), seed)
    discarded = None
    if algorithm == "asii":
        ordering = asii(oracle, n, budget_t).ordering()
    elif algorithm == "naive":
        ordering = naive_insertion(oracle, n, budget_t).ordering()
    elif algorithm == "asii-ext":
        if delta_tilde is None:
            raise SeriationError("asii-ext requires delta_tilde")
        result = asii_extension(oracle, n, budget_t, delta_tilde)
        ordering = result.kept.ordering()
        discarded = list(result.discarded)
    elif algorithm == "adaptive-sorting":
        ordering = adaptive_sorting(batch_observe(oracle, budget_t)).ordering()
    elif algorithm == "spectral":
        ordering = spectral_seriation(batch_observe(oracle, budget_t)).ordering()
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    idx = np.array(ordering) - 1
    reordered = SimilarityMatrix(matrix.entries[np.ix_(idx, idx)])
    return SeriationOutput(
        ordering=tuple(int(i) for i in ordering),
        reordered=reordered,
        queries=oracle.ledger.total,
        discarded=discarded,
    )


def write_ordering_csv(ordering: Sequence[int], path) -> None:
    """One item index per line, rank 1 first."""
    with open(path, "w") as fh:
        for item in ordering:
            fh.write(f"{item}\n")


def write_discards_csv(discards, path) -> None:
    with open(path, "w") as fh:
        fh.write("item,iteration,reason\n")
        for d in discards:
            fh.write(f"{d.item},{d.iteration},{d.reason}\n")
