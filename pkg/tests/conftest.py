"""Shared fixtures: scenario draws, duplicate planting, scripted testers."""

from __future__ import annotations

import numpy as np
import pytest

from active_seriation import (
    NoiseModel,
    Oracle,
    Permutation,
    ScenarioSpec,
    SimilarityMatrix,
    apply_permutation,
    derive_seed,
    generate,
)
from active_seriation.asii import TestOutcome, truthful_test
from active_seriation.core import random_permutation
from active_seriation.rng import PortableRng


def scenario_matrix(scenario_id: str, n: int, delta: float, seed: int = 0) -> SimilarityMatrix:
    return generate(ScenarioSpec(id=scenario_id, n=n, delta=delta, seed=seed))


def draw_instance(scenario_id: str, n: int, delta: float, seed: int):
    """(hidden matrix, truth) for a fresh latent permutation."""
    r = scenario_matrix(scenario_id, n, delta, seed=derive_seed(seed, "matrix"))
    truth = random_permutation(PortableRng(derive_seed(seed, "perm")), n)
    return apply_permutation(r, truth), truth


def noiseless_oracle(matrix: SimilarityMatrix, seed: int = 0) -> Oracle:
    return Oracle(matrix, NoiseModel.noiseless(), seed)


def gaussian_oracle(matrix: SimilarityMatrix, sigma: float, seed: int) -> Oracle:
    return Oracle(matrix, NoiseModel(kind="gaussian", sigma=sigma), seed)


def plant_duplicate(base_n: int, delta: float, dup_position: int, base_scenario: str = "s1",
                    seed: int = 0) -> SimilarityMatrix:
    """A (base_n+1)-item matrix where the last item exactly duplicates the
    item at `dup_position` (1-based) of a strict-Robinson base. The twins'
    mutual similarity is set to the base diagonal value, so any subset
    containing both twins fails the strict-Robinson property while dropping
    either twin restores the base matrix with its full gap."""
    base = scenario_matrix(base_scenario, base_n, delta, seed=seed).entries
    n = base_n + 1
    a = np.zeros((n, n))
    a[:base_n, :base_n] = base
    p = dup_position - 1
    a[base_n, :base_n] = base[p, :]
    a[:base_n, base_n] = base[:, p]
    a[base_n, base_n] = base[p, p]
    a[base_n, p] = a[p, base_n] = base[p, p]
    return SimilarityMatrix(a)


def twin_items(matrix_n: int, truth: Permutation, dup_position: int) -> tuple[int, int]:
    """Item labels of the planted twins after permuting by `truth` (the
    twins occupy pre-permutation indices dup_position and matrix_n)."""
    inv = truth.inverse()
    return inv.pos[dup_position - 1], inv.pos[matrix_n - 1]


def expected_kept_relative(truth: Permutation, kept_items, base_n: int, dup_pos: int) -> Permutation:
    """Expected relative ordering of kept items for a planted-duplicate
    matrix: the twin planted at matrix index base_n+1 occupies the
    duplicated POSITION dup_pos, so ranks go through positions."""
    position = {
        i: (truth.pos[i - 1] if truth.pos[i - 1] <= base_n else dup_pos)
        for i in kept_items
    }
    by_position = sorted(kept_items, key=position.__getitem__)
    return Permutation(tuple(by_position.index(i) + 1 for i in kept_items))


def flipping_test(truth: Permutation, flips: set[int]):
    """Truthful tester that corrupts the outcomes of the given call indices
    (0-based). A corrupted MIDDLE becomes RIGHT and vice versa."""
    base = truthful_test(truth)
    state = {"calls": 0}

    def fn(oracle, k, l, r, t0):
        outcome = base(oracle, k, l, r, t0)
        if state["calls"] in flips:
            outcome = (
                TestOutcome.RIGHT if outcome is TestOutcome.MIDDLE else TestOutcome.MIDDLE
            )
        state["calls"] += 1
        return outcome

    return fn


@pytest.fixture
def s1_n5():
    return scenario_matrix("s1", 5, 1.0)
