"""Error-curve figures from a curves CSV.

Input schema (header required):

    scenario,algo,delta,mean_error,q10,q90,n_reps

One panel per scenario, one line per algorithm; y is the empirical error
probability in [0, 1] with asymmetric bars spanning the 0.1/0.9 quantiles
of the group-wise error rates. Rendering is non-interactive and
deterministic for a fixed toolchain (Agg backend, fixed figure geometry).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

CURVES_HEADER = ["scenario", "algo", "delta", "mean_error", "q10", "q90", "n_reps"]


class CurvesFormatError(ValueError):
    """The input file does not follow the curves CSV schema."""


@dataclass(frozen=True)
class CurvePoint:
    scenario: str
    algo: str
    delta: float
    mean_error: float
    q10: float
    q90: float
    n_reps: int


def read_curves_csv(path) -> list[CurvePoint]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CurvesFormatError(f"{path}: empty file") from None
        if header != CURVES_HEADER:
            raise CurvesFormatError(
                f"{path}: expected header {','.join(CURVES_HEADER)}, got {','.join(header)}"
            )
        points = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(CURVES_HEADER):
                raise CurvesFormatError(f"{path}: malformed row {row}")
            points.append(
                CurvePoint(
                    scenario=row[0],
                    algo=row[1],
                    delta=float(row[2]),
                    mean_error=float(row[3]),
                    q10=float(row[4]),
                    q90=float(row[5]),
                    n_reps=int(row[6]),
                )
            )
    if not points:
        raise CurvesFormatError(f"{path}: no data rows")
    return points


def plot_error_curves(curves_csv, out_image, title: str | None = None) -> None:
    """Render one panel per scenario into a single PNG."""
    points = read_curves_csv(curves_csv)
    scenarios = sorted({p.scenario for p in points})
    cols = 2 if len(scenarios) > 1 else 1
    rows = (len(scenarios) + cols - 1) // cols
    fig, axes = plt.subplots(
        rows, cols, figsize=(5.0 * cols, 3.6 * rows), squeeze=False
    )
    for idx, scenario in enumerate(scenarios):
        ax = axes[idx // cols][idx % cols]
        panel = [p for p in points if p.scenario == scenario]
        for algo in sorted({p.algo for p in panel}):
            series = sorted((p for p in panel if p.algo == algo), key=lambda p: p.delta)
            deltas = [p.delta for p in series]
            means = [p.mean_error for p in series]
            # quantiles of group means can land on either side of the mean;
            # matplotlib wants nonnegative bar lengths
            low = [max(0.0, p.mean_error - p.q10) for p in series]
            high = [max(0.0, p.q90 - p.mean_error) for p in series]
            ax.errorbar(
                deltas, means, yerr=[low, high], marker="o", capsize=3, label=algo
            )
        ax.set_title(f"scenario {scenario}")
        ax.set_xlabel("separation delta")
        ax.set_ylabel("error probability")
        ax.set_ylim(-0.05, 1.05)
        ax.legend()
    for idx in range(len(scenarios), rows * cols):
        axes[idx // cols][idx % cols].set_axis_off()
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(out_image, format="png", dpi=120)
    plt.close(fig)
