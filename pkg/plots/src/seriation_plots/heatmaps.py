"""Similarity-matrix heatmaps: single matrices and before/after pairs.

Matrix files are headerless numeric CSVs, one row per line. The pair
renderer shares one colour scale across both panels so that a reordering
is visually comparable to its input.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class MatrixFileError(ValueError):
    """Malformed matrix CSV (non-numeric, ragged, or empty)."""


def read_matrix_csv(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise MatrixFileError(f"{path}: line {line_no}: {exc}") from None
    if not rows:
        raise MatrixFileError(f"{path}: empty matrix file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MatrixFileError(f"{path}: ragged rows")
    return np.array(rows, dtype=np.float64)


def plot_matrix_heatmap(matrix_csv, out_image, title: str | None = None) -> None:
    matrix = read_matrix_csv(matrix_csv)
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    image = ax.imshow(matrix, cmap="viridis", interpolation="nearest")
    fig.colorbar(image, ax=ax)
    ax.set_title(title or "similarity matrix")
    fig.tight_layout()
    fig.savefig(out_image, format="png", dpi=120)
    plt.close(fig)


def plot_reorder_pair(before_csv, after_csv, out_image, title: str | None = None) -> None:
    before = read_matrix_csv(before_csv)
    after = read_matrix_csv(after_csv)
    if before.shape != after.shape:
        raise MatrixFileError(
            f"matrix shapes differ: {before.shape} vs {after.shape}"
        )
    vmin = min(before.min(), after.min())
    vmax = max(before.max(), after.max())
    fig, axes = plt.subplots(1, 2, figsize=(9.6, 4.2))
    for ax, matrix, label in ((axes[0], before, "before"), (axes[1], after, "after")):
        image = ax.imshow(matrix, cmap="viridis", interpolation="nearest",
                          vmin=vmin, vmax=vmax)
        ax.set_title(label)
    fig.colorbar(image, ax=list(axes), shrink=0.9)
    if title:
        fig.suptitle(title)
    fig.savefig(out_image, format="png", dpi=120)
    plt.close(fig)
