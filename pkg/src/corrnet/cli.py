"""Command line: ``corrnet run | synth | validate``.

Exit codes: 0 success, 2 validation failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .ingest import (
    FormatError,
    parse_ff49_daily,
    parse_returns,
    read_text,
    to_month,
    validate_panel,
    write_panel_csv,
)
from .pipeline import NumericalFailure, PipelineConfig, ValidationFailed, run_pipeline
from .synth import FactorSpec, factor_returns

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _range_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="French-library daily file (.csv, .txt or .zip) or round-trip CSV")
    p.add_argument("--window-months", type=int, default=3)
    p.add_argument("--first", default="1969-09", help="first label month YYYY-MM (window end)")
    p.add_argument("--last", default="2011-12", help="last label month YYYY-MM")
    p.add_argument("--universe", choices=("ff49", "any"), default="ff49",
                   help="ff49 requires the 49 industry columns; any accepts the file header")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="corrnet", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full analysis and write tables + SVG heatmaps")
    _range_args(run)
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--restarts", type=int, default=100)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--weighted", action="store_true", help="random walk proportional to edge correlations")
    run.add_argument("--bits", action="store_true", help="link mutual information in bits instead of nats")
    run.add_argument("--impute", choices=("zero",), default=None, help="fill missing cells instead of failing")
    run.add_argument("--reference", default="BusSv", help="asset whose eigenvector component is made positive")
    run.add_argument("--no-svg", action="store_true", help="skip heatmap rendering")

    synth = sub.add_parser("synth", help="write a synthetic factor-model panel")
    synth.add_argument("--spec", required=True, help="JSON file with FactorSpec fields")
    synth.add_argument("--out", required=True)

    val = sub.add_parser("validate", help="check an input file over the analysis range")
    _range_args(val)
    return parser


def _cmd_run(args) -> int:
    config = PipelineConfig(
        input_path=args.input,
        output_dir=args.out,
        window_months=args.window_months,
        first_label=args.first,
        last_label=args.last,
        restarts=args.restarts,
        seed=args.seed,
        weighted=args.weighted,
        bits=args.bits,
        impute=args.impute,
        universe=args.universe,
        reference=args.reference,
        render=not args.no_svg,
    )
    try:
        result = run_pipeline(config)
    except (FormatError, ValidationFailed) as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        if isinstance(exc, ValidationFailed):
            print(exc.report.summary(), file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalFailure as exc:
        print(f"numerical failure at {exc.month} ({exc.stage}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    sizes = result.partition.sizes()
    print(f"{len(result.labels)} months {result.labels[0]}..{result.labels[-1]}; "
          f"{result.partition.n_communities} communities {sizes}; outputs in {result.output_dir}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    spec = FactorSpec.from_json(args.spec)
    write_panel_csv(factor_returns(spec), args.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        text = read_text(args.input)
        panel = parse_ff49_daily(text) if args.universe == "ff49" else parse_returns(text)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    start = to_month(args.first) - (args.window_months - 1)
    report = validate_panel(panel, start, args.last)
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_VALIDATION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handler = {"run": _cmd_run, "synth": _cmd_synth, "validate": _cmd_validate}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
