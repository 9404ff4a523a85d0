"""Synthetic Robinson matrix families and matrix (de)serialisation.

Four generator families, all parameterised by a separation level delta
(written D below) and symmetric by construction; entries below are for
row i > column j with d = i - j:

    s1: D * (n - d)                       (Toeplitz, affine in the offset)
    s2: D * (n - d) * max(j, n-i)**1.5    (non-Toeplitz)
    s3: D * (n - d) * max(j, n-i), with the factor D boosted to 10*D
        for near-diagonal offsets d <= n/4
    s4: random; diagonal ~ Uniform(1, 10), then entries filled in
        increasing offset order via min(upper, right neighbour) minus
        Uniform(D, 10*D)

s2/s3 leave the diagonal undefined; it is set to (max off-diagonal entry)
+ D, which keeps strict unimodality at the diagonal and is never sampled
by any algorithm (self-pairs are outside the observation model). Every
generated matrix is verified strictly Robinson before being returned;
a violation is a generation error, never a silently invalid benchmark
input. s4's minimal gap is random but at least D by construction; s1's
equals D exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Permutation, SeriationError, SimilarityMatrix, minimal_gap
from .rng import PortableRng

SCENARIO_IDS = ("s1", "s2", "s3", "s4")

SYMMETRY_TOLERANCE = 1e-9


class GenerationError(SeriationError):
    """A generator produced a non-Robinson matrix for the given (n, delta)."""


class MatrixFormatError(SeriationError):
    """Malformed matrix file: not numeric, not square, or non-finite."""


@dataclass(frozen=True)
class ScenarioSpec:
    """One synthetic family instance (or an external file source)."""

    id: str
    n: int = 0
    delta: float = 0.0
    seed: int = 0
    path: Optional[str] = None

    def __post_init__(self) -> None:
        if self.id not in SCENARIO_IDS + ("file",):
            raise ValueError(f"unknown scenario id {self.id!r}")
        if self.id == "file":
            if not self.path:
                raise ValueError("file scenario requires a path")
        else:
            if self.n < 2:
                raise ValueError("scenario generation requires n >= 2")
            if self.delta <= 0:
                raise ValueError("delta must be positive")


def _fill_symmetric(n: int, lower_value) -> np.ndarray:
    a = np.zeros((n, n))
    for i in range(2, n + 1):
        for j in range(1, i):
            a[i - 1, j - 1] = lower_value(i, j)
    a = a + a.T
    return a


def _toeplitz_affine(n: int, delta: float) -> np.ndarray:
    d = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    return delta * (n - d).astype(np.float64)


def generate(spec: ScenarioSpec) -> SimilarityMatrix:
    """Build the scenario's R-matrix (pre-permutation form)."""
    if spec.id == "file":
        return load_matrix_csv(spec.path)
    n, delta = spec.n, spec.delta
    if spec.id == "s1":
        a = _toeplitz_affine(n, delta)
    elif spec.id == "s2":
        a = _fill_symmetric(
            n, lambda i, j: delta * (n - (i - j)) * max(j, n - i) ** 1.5
        )
        np.fill_diagonal(a, a.max() + delta)
    elif spec.id == "s3":

        def s3_value(i: int, j: int) -> float:
            d = i - j
            if d <= n / 4:
                return 10.0 * delta * (n - d) * max(j, n - i)
            return delta * (n - d) * max(j, n - i)

        a = _fill_symmetric(n, s3_value)
        np.fill_diagonal(a, a.max() + delta)
    elif spec.id == "s4":
        rng = PortableRng(spec.seed)
        a = np.zeros((n, n))
        diag = 1.0 + 9.0 * rng.uniforms(n)
        np.fill_diagonal(a, diag)
        # increasing offset, left to right: both recursion inputs exist
        for d in range(1, n):
            for j in range(1, n - d + 1):
                i = j + d
                drop = delta + 9.0 * delta * rng.uniform()
                a[i - 1, j - 1] = min(a[i - 2, j - 1], a[i - 1, j]) - drop
        low = np.tril(a, -1)
        a = low + low.T + np.diag(diag)
    else:  # pragma: no cover - guarded by ScenarioSpec
        raise ValueError(spec.id)

    matrix = SimilarityMatrix(a)
    report = minimal_gap(matrix)
    if report.gap <= 0:
        raise GenerationError(
            f"scenario {spec.id} (n={n}, delta={delta}) is not strictly "
            f"Robinson: offending difference at {report.witness} = {report.gap}"
        )
    return matrix


def apply_permutation(r: SimilarityMatrix, p: Permutation) -> SimilarityMatrix:
    """Hide the structure: result[i][j] = R[p(i)][p(j)]."""
    if r.n != p.n:
        raise SeriationError(f"size mismatch: matrix {r.n}, permutation {p.n}")
    idx = np.asarray(p.pos) - 1
    return SimilarityMatrix(r.entries[np.ix_(idx, idx)])


def save_matrix_csv(m: SimilarityMatrix, path) -> None:
    """Comma-separated rows, no header, 17 significant digits (round-trip
    exact for doubles)."""
    with open(path, "w") as fh:
        for row in m.entries:
            fh.write(",".join("%.17g" % x for x in row))
            fh.write("\n")


def load_matrix_csv(path) -> SimilarityMatrix:
    """Read a square numeric CSV as a similarity matrix.

    Asymmetry is repaired by averaging with the transpose; beyond
    SYMMETRY_TOLERANCE this also emits a warning. Non-square shapes and
    non-finite values are errors.
    """
    rows: list[list[float]] = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise MatrixFormatError(f"{path}: line {line_no}: {exc}") from None
    if not rows:
        raise MatrixFormatError(f"{path}: empty matrix file")
    width = len(rows[0])
    if any(len(r) != width for r in rows) or len(rows) != width:
        raise MatrixFormatError(
            f"{path}: expected a square matrix, got {len(rows)} rows of width {width}"
        )
    a = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise MatrixFormatError(f"{path}: matrix contains NaN or infinite entries")
    skew = float(np.max(np.abs(a - a.T))) if width > 1 else 0.0
    if skew > SYMMETRY_TOLERANCE:
        warnings.warn(
            f"{path}: asymmetry up to {skew:g} exceeds {SYMMETRY_TOLERANCE:g}; "
            "symmetrised by averaging",
            stacklevel=2,
        )
    return SimilarityMatrix((a + a.T) / 2.0)
