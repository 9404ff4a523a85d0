"""Cyclic Jacobi eigendecomposition for symmetric matrices.

Self-contained and deterministic: rotations sweep the strict upper
triangle in fixed row-major order until the off-diagonal Frobenius norm
drops below tolerance. Chosen over power iteration because it delivers the
full spectrum with no dependency and is entirely adequate at the matrix
sizes handled here (up to a few hundred).
"""

from __future__ import annotations

import math

import numpy as np

from .core import SeriationError

DEFAULT_TOLERANCE = 1e-10
MAX_SWEEPS = 100


class EigensolverError(SeriationError):
    """Jacobi sweeps failed to converge within the sweep cap."""


def _offdiag_norm(a: np.ndarray) -> float:
    return math.sqrt(float(np.sum(np.square(a - np.diag(np.diag(a))))))


def jacobi_eigh(
    matrix: np.ndarray,
    tolerance: float = DEFAULT_TOLERANCE,
    max_sweeps: int = MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and matching eigenvector columns.

    Convergence criterion: off-diagonal Frobenius norm relative to the
    matrix Frobenius norm below `tolerance` (absolute for a zero matrix).
    Equal eigenvalues keep a deterministic order via stable sorting.
    """
    a = np.array(matrix, dtype=np.float64)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0.0, atol=0.0):
        raise ValueError("matrix must be symmetric")
    v = np.eye(n)
    scale = math.sqrt(float(np.sum(np.square(a)))) or 1.0
    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= tolerance * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # rotation angle zeroing a[p, q]
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                col_p = c * v[:, p] - s * v[:, q]
                col_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = col_p, col_q
    else:
        raise EigensolverError(
            f"no convergence after {max_sweeps} sweeps "
            f"(off-diagonal norm {_offdiag_norm(a):g})"
        )
    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]
