"""Figure renderer for seriation result files.

    seriation-plots --kind error-curves  --in curves.csv --out fig.png
    seriation-plots --kind matrix-heatmap --in matrix.csv --out fig.png
    seriation-plots --kind reorder-pair  --in before.csv after.csv --out fig.png
"""

from __future__ import annotations

import argparse
import sys

from .curves import plot_error_curves
from .heatmaps import plot_matrix_heatmap, plot_reorder_pair

KINDS = ("error-curves", "matrix-heatmap", "reorder-pair")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seriation-plots", description=__doc__)
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        help="input CSV path(s); reorder-pair takes two")
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.kind == "reorder-pair":
        if len(args.inputs) != 2:
            build_parser().error("reorder-pair needs exactly two --in paths")
        plot_reorder_pair(args.inputs[0], args.inputs[1], args.out, title=args.title)
    else:
        if len(args.inputs) != 1:
            build_parser().error(f"{args.kind} takes exactly one --in path")
        if args.kind == "error-curves":
            plot_error_curves(args.inputs[0], args.out, title=args.title)
        else:
            plot_matrix_heatmap(args.inputs[0], args.out, title=args.title)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
