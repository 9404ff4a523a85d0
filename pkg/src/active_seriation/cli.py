"""Command-line front end.

Subcommands:

    gen        generate a scenario matrix and write it as CSV
    run        run a Monte Carlo sweep and write a records CSV
    seriate    reorder a user-supplied similarity matrix
    summarize  turn a records CSV into an error-curves CSV

`run` takes either --config (flat JSON mirroring ExperimentConfig fields)
or inline flags. Seeds are 64-bit unsigned integers.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    ExperimentConfig,
    read_records_csv,
    run_experiment,
    seriate_file,
    summarize,
    write_curves_csv,
    write_discards_csv,
    write_ordering_csv,
    write_records_csv,
)
from .scenarios import ScenarioSpec, generate, save_matrix_csv


def _uint64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok)


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(tok for tok in text.split(",") if tok)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="active-seriation",
        description="Active seriation: simulation harness and file reordering",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a scenario matrix CSV")
    gen.add_argument("--scenario", required=True, choices=["s1", "s2", "s3", "s4"])
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--delta", type=float, required=True)
    gen.add_argument("--seed", type=_uint64, default=0)
    gen.add_argument("--out", required=True)

    run = sub.add_parser("run", help="run a Monte Carlo sweep")
    run.add_argument("--config", help="JSON config file (overrides inline flags)")
    run.add_argument("--scenario", type=_str_list, default=("s1",))
    run.add_argument("--algo", type=_str_list, default=("asii",))
    run.add_argument("--n", type=int, default=10)
    run.add_argument("--t", type=int, default=10000, help="total sampling budget")
    run.add_argument("--sigma", type=float, default=1.0)
    run.add_argument("--delta-grid", type=_float_list, default=(0.05, 0.1, 0.2, 0.3, 0.5))
    run.add_argument("--reps", type=int, default=100)
    run.add_argument("--groups", type=int, default=10)
    run.add_argument("--seed", type=_uint64, default=0)
    run.add_argument("--delta-tilde", type=float, default=None)
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--out", default="records.csv")

    ser = sub.add_parser("seriate", help="reorder a similarity matrix file")
    ser.add_argument("--in", dest="path", required=True)
    ser.add_argument(
        "--algo",
        default="asii",
        choices=["asii", "asii-ext", "naive", "adaptive-sorting", "spectral"],
    )
    ser.add_argument("--t", type=int, required=True)
    ser.add_argument("--sigma", type=float, default=0.0)
    ser.add_argument("--seed", type=_uint64, default=0)
    ser.add_argument("--delta-tilde", type=float, default=None)
    ser.add_argument("--out-order", required=True)
    ser.add_argument("--out-matrix", required=True)
    ser.add_argument("--out-discards", default=None)

    summ = sub.add_parser("summarize", help="records CSV -> error curves CSV")
    summ.add_argument("--in", dest="path", required=True)
    summ.add_argument("--groups", type=int, default=10)
    summ.add_argument("--out", required=True)

    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        with open(args.config) as fh:
            return ExperimentConfig.from_dict(json.load(fh))
    return ExperimentConfig(
        scenarios=args.scenario,
        algorithms=args.algo,
        delta_grid=args.delta_grid,
        n=args.n,
        budget_t=args.t,
        sigma=args.sigma,
        replicates=args.reps,
        groups=args.groups,
        master_seed=args.seed,
        delta_tilde=args.delta_tilde,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "gen":
        matrix = generate(
            ScenarioSpec(id=args.scenario, n=args.n, delta=args.delta, seed=args.seed)
        )
        save_matrix_csv(matrix, args.out)
        print(f"wrote {args.scenario} matrix (n={args.n}, delta={args.delta}) to {args.out}")
        return 0

    if args.command == "run":
        config = _config_from_args(args)
        records = run_experiment(config, workers=args.workers)
        write_records_csv(records, args.out)
        failures = sum(1 for r in records if not r.success)
        print(f"wrote {len(records)} records to {args.out} ({failures} failures)")
        return 0

    if args.command == "seriate":
        result = seriate_file(
            args.path,
            algorithm=args.algo,
            budget_t=args.t,
            sigma=args.sigma,
            seed=args.seed,
            delta_tilde=args.delta_tilde,
        )
        write_ordering_csv(result.ordering, args.out_order)
        save_matrix_csv(result.reordered, args.out_matrix)
        if result.discarded is not None and args.out_discards:
            write_discards_csv(result.discarded, args.out_discards)
        kept = len(result.ordering)
        print(
            f"seriated {args.path} with {args.algo}: kept {kept} items, "
            f"{result.queries} queries; ordering -> {args.out_order}, "
            f"matrix -> {args.out_matrix}"
        )
        return 0

    if args.command == "summarize":
        records = read_records_csv(args.path)
        rows = summarize(records, groups=args.groups)
        write_curves_csv(rows, args.out)
        print(f"wrote {len(rows)} curve rows to {args.out}")
        return 0

    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
