"""Active seriation: recover a latent item ordering from adaptively
sampled noisy pairwise similarities, plus baselines and an experiment
harness reproducing the error-curve benchmarks."""

from .asii import AsiiTrace, BbsTrace, IntervalStack, TestOutcome, asii, bbs, triplet_test
from .baselines import (
    BatchObservation,
    adaptive_sorting,
    batch_observe,
    naive_insertion,
    spectral_seriation,
)
from .core import (
    MinimalGapReport,
    Permutation,
    RankMap,
    SeriationError,
    SimilarityMatrix,
    brute_force_seriate,
    is_recovery_success,
    is_robinson,
    minimal_gap,
    relative_ranks,
    reverse,
)
from .extension import (
    ExtensionResult,
    MarginTestOutcome,
    asii_extension,
    margin_test,
    verify_delta_maximal,
)
from .harness import ExperimentConfig, RunRecord, run_cell, run_experiment, seriate_file, summarize
from .oracle import NoiseModel, Oracle, QueryLedger
from .rng import PortableRng, derive_seed
from .scenarios import ScenarioSpec, apply_permutation, generate, load_matrix_csv, save_matrix_csv

__all__ = [
    "AsiiTrace",
    "BatchObservation",
    "BbsTrace",
    "ExperimentConfig",
    "ExtensionResult",
    "IntervalStack",
    "MarginTestOutcome",
    "MinimalGapReport",
    "NoiseModel",
    "Oracle",
    "Permutation",
    "PortableRng",
    "QueryLedger",
    "RankMap",
    "RunRecord",
    "ScenarioSpec",
    "SeriationError",
    "SimilarityMatrix",
    "TestOutcome",
    "adaptive_sorting",
    "apply_permutation",
    "asii",
    "asii_extension",
    "batch_observe",
    "bbs",
    "brute_force_seriate",
    "derive_seed",
    "generate",
    "is_recovery_success",
    "is_robinson",
    "load_matrix_csv",
    "margin_test",
    "minimal_gap",
    "naive_insertion",
    "relative_ranks",
    "reverse",
    "run_cell",
    "run_experiment",
    "save_matrix_csv",
    "seriate_file",
    "spectral_seriation",
    "summarize",
    "triplet_test",
    "verify_delta_maximal",
]
