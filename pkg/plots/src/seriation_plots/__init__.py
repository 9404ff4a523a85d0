"""Figure rendering for active-seriation result CSVs."""

from .curves import CurvesFormatError, plot_error_curves, read_curves_csv
from .heatmaps import MatrixFileError, plot_matrix_heatmap, plot_reorder_pair, read_matrix_csv

__all__ = [
    "CurvesFormatError",
    "MatrixFileError",
    "plot_error_curves",
    "plot_matrix_heatmap",
    "plot_reorder_pair",
    "read_curves_csv",
    "read_matrix_csv",
]
