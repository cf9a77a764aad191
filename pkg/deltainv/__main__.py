#!/usr/bin/env python3

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from deltainv.applications.catalog import DEFAULT_CATALOG
from deltainv.applications.records import ManifoldRecord, RecordKind
from deltainv.combinatorics import asymptotic_cardinality, cardinality, nash_dimension
from deltainv.config import DEFAULT_OPTIONS, DEFAULT_TOLERANCES, OptimizerOptions, resolve_seed
from deltainv.custom_types import TupleSpec
from deltainv.exceptions import DeltaInvError
from deltainv.lagrangian.inequalities import LagrangianCase
from deltainv.report.emit import read_report, render
from deltainv.report.model import ReportRecord, to_plain, utc_timestamp
from deltainv.sampling import interior_grid
from deltainv.spec.loader import load_spec
from deltainv.sweep import CHECK_KINDS, SweepSettings, compute_at_point, run_check

logging.basicConfig(level=logging.WARNING)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# tolerance that --tol replaces for each check family
PRIMARY_TOLERANCE = {
    "chen": "margin",
    "lagrangian": "margin",
    "warped": "margin",
    "spectral": "margin",
    "ideality": "margin",
    "obstruction": "obstruction",
    "gauss": "gauss",
}

COMPUTE_COLUMNS = (
    "name",
    "point",
    "tuple",
    "delta",
    "normalized",
    "coefficient",
    "tau",
    "max_ricci",
    "constant_curvature",
    "H2",
    "certified",
    "method",
    "converged",
    "restarts",
    "seed",
    "timestamp",
)


class UsageError(Exception):
    """Raised by the ``run_*`` functions for argument combinations argparse cannot see."""


def parse_point(text: str) -> list[float]:
    """Parse ``"0.1,0.2"`` into coordinates."""
    try:
        return [float(x) for x in text.strip().strip("()[]").split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid point '{text}': {exc}") from exc


def resolve_record(args: argparse.Namespace) -> ManifoldRecord:
    """Manifold named by ``--catalog`` or described by ``--spec``."""
    if args.catalog is not None:
        return DEFAULT_CATALOG.resolve(args.catalog)
    return load_spec(args.spec).to_record()


def optimizer_options(args: argparse.Namespace, tol: float | None) -> OptimizerOptions:
    update = {"seed": resolve_seed(args.seed)}
    if args.restarts is not None:
        update["restarts"] = args.restarts
    if args.max_iters is not None:
        update["max_iters"] = args.max_iters
    if tol is not None:
        update["tol"] = tol
    return DEFAULT_OPTIONS.model_copy(update=update)


def timestamp_for(args: argparse.Namespace) -> str | None:
    return None if args.no_timestamp else utc_timestamp()


def emit(text: str, output: str | None) -> None:
    """Write ``text`` to ``output`` when given, else to stdout."""
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")


def exit_code_for(records: list[ReportRecord]) -> int:
    return EXIT_OK if all(record.passed for record in records) else EXIT_FAILED


def run_partitions(args: argparse.Namespace) -> int:
    lines = [str(cardinality(args.n))]
    if args.asymptotic:
        lines.append(f"{asymptotic_cardinality(args.n):.6g}")
    if args.nash:
        lines.append(str(nash_dimension(args.n)))
    emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def run_catalog(args: argparse.Namespace) -> int:
    summaries = [DEFAULT_CATALOG.resolve(name).summary() for name in DEFAULT_CATALOG.names]
    if args.format == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(summaries[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(summaries)
        emit(buffer.getvalue(), args.output)
    else:
        emit(json.dumps(to_plain(summaries), indent=2) + "\n", args.output)
    return EXIT_OK


def run_compute(args: argparse.Namespace) -> int:
    """
    evaluate the curvature summary and delta invariants at one point

    Parameters
    ----------
    args : argparse.Namespace
        Parsed command-line arguments
    """
    record = resolve_record(args)
    if record.kind is RecordKind.POINT_DATA:
        point = None
    elif args.point is None:
        point = interior_grid(record.domain, 1)[0]
        logger.info(f"No --point given; using the chart center {point.tolist()}")
    else:
        point = args.point
        if len(point) != record.dim:
            raise UsageError(f"--point has {len(point)} coordinates, '{record.name}' has dimension {record.dim}")
    tuple_spec = TupleSpec.parse(record.dim, args.tuple) if args.tuple is not None else None
    settings = SweepSettings(
        opts=optimizer_options(args, args.tol),
        tuple_spec=tuple_spec,
        all_tuples=args.all_tuples or tuple_spec is None,
        timestamp=timestamp_for(args),
    )
    rows = compute_at_point(record, point, settings)
    if args.format == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=COMPUTE_COLUMNS, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in to_plain(rows):
            writer.writerow({key: json.dumps(value) if isinstance(value, list) else value for key, value in row.items()})
        emit(buffer.getvalue(), args.output)
    else:
        emit(json.dumps(to_plain(rows), indent=2) + "\n", args.output)
    return EXIT_OK


def run_check_command(args: argparse.Namespace) -> int:
    """
    run one theorem check over the sample grid and emit its report

    Parameters
    ----------
    args : argparse.Namespace
        Parsed command-line arguments

    Returns
    -------
    int
        0 if every record passed, 1 otherwise
    """
    record = resolve_record(args)
    tolerances = DEFAULT_TOLERANCES
    if args.tol is not None:
        tolerances = tolerances.model_copy(update={PRIMARY_TOLERANCE[args.check_kind]: args.tol})
    tuple_spec = TupleSpec.parse(record.dim, args.tuple) if args.tuple is not None else None
    if args.point is not None and any(len(p) != record.dim for p in args.point):
        raise UsageError(f"every --point needs {record.dim} coordinates for '{record.name}'")
    settings = SweepSettings(
        opts=optimizer_options(args, args.opt_tol),
        tolerances=tolerances,
        grid=args.grid,
        tuple_spec=tuple_spec,
        all_tuples=args.all_tuples or tuple_spec is None,
        case=LagrangianCase(args.case),
        rigidity=args.rigidity,
        workers=args.workers,
        timestamp=timestamp_for(args),
        points=args.point,
    )
    records = run_check(args.check_kind, record, settings)
    emit(render(records, args.format), args.output)
    return exit_code_for(records)


def run_report(args: argparse.Namespace) -> int:
    records = read_report(args.input)
    logger.info(f"Read {len(records)} records from {args.input}")
    emit(render(records, args.format), args.output)
    return exit_code_for(records)


def check_parser_errors(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Checks for invalid CLI calls

    Parameters
    ----------
    args : argparse.Namespace
        Parsed command-line arguments
    parser : argparse.ArgumentParser
        Parser object to allow for parser errors
    """
    if args.restarts is not None and args.restarts < 1:
        parser.error("--restarts must be at least 1")
    if args.max_iters is not None and args.max_iters < 1:
        parser.error("--max-iters must be at least 1")
    if args.command == "partitions" and args.n < 2:
        parser.error("--n must be at least 2")
    if args.command == "report":
        if not Path(args.input).is_file():
            parser.error(f"Input report '{args.input}' is not a file")
    if args.command in ("compute", "check"):
        if args.spec is not None and not Path(args.spec).is_file():
            parser.error(f"Spec file '{args.spec}' is not a file")
        if args.tol is not None and args.tol <= 0:
            parser.error("--tol must be positive")
    if args.command == "check":
        if args.grid < 1:
            parser.error("--grid must be at least 1")
        if args.workers < 1:
            parser.error("--workers must be at least 1")
        if args.opt_tol is not None and args.opt_tol <= 0:
            parser.error("--opt-tol must be positive")
        if args.case != LagrangianCase.L1.value and args.check_kind != "lagrangian":
            parser.error("--case only applies to 'check lagrangian'")
        if args.rigidity is not None and args.check_kind != "ideality":
            parser.error("--rigidity only applies to 'check ideality'")
        if args.rigidity not in (None, "sphere") and not args.rigidity.isdigit():
            parser.error("--rigidity takes 'sphere' or the flat factor dimension n1 (an integer)")
    if getattr(args, "format", None) is None:
        args.format = "json"


def add_source_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", metavar="FILE", help="JSON spec file describing the manifold")
    source.add_argument("--catalog", metavar="NAME", help="Built-in manifold, e.g. sphere:3 or whitney:3")
    parser.add_argument(
        "--tuple",
        metavar="T",
        default=None,
        help="Tuple of S(n) as comma-separated parts, e.g. 2 or 2,3 ('' for the empty tuple)",
    )
    parser.add_argument("--all-tuples", action="store_true", help="Evaluate every tuple of S(n)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=None, help="Master seed (default: $DINV_SEED, otherwise 0)"
    )
    common.add_argument("--restarts", type=int, default=None, help="Random restarts of the delta optimizer")
    common.add_argument("--max-iters", type=int, default=None, help="Iteration cap per optimizer restart")
    common.add_argument("--output", metavar="FILE", default=None, help="Write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default=None, help="Report format (default json)")
    common.add_argument("--no-timestamp", action="store_true", help="Omit timestamps so reports are reproducible")
    common.add_argument("--verbose", "-v", action="count", default=0, help="-v for progress, -vv for debug output")

    parser = argparse.ArgumentParser(
        prog="dinv",
        description="Numerical delta-invariants of Riemannian manifolds and checks of the inequalities they satisfy",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    partitions = sub.add_parser("partitions", parents=[common], help="Size of the tuple set S(n)")
    partitions.add_argument("--n", type=int, required=True, help="Manifold dimension")
    partitions.add_argument("--asymptotic", action="store_true", help="Also print the Hardy-Ramanujan estimate")
    partitions.add_argument("--nash", action="store_true", help="Also print the Nash embedding dimension")
    partitions.set_defaults(func=run_partitions)

    catalog = sub.add_parser("catalog", parents=[common], help="Built-in manifolds")
    catalog.add_argument("action", choices=["list"])
    catalog.set_defaults(func=run_catalog)

    compute = sub.add_parser("compute", parents=[common], help="Delta invariants at one point")
    add_source_arguments(compute)
    compute.add_argument("--point", type=parse_point, default=None, help="Chart coordinates, e.g. 0,0,0")
    compute.add_argument("--tol", type=float, default=None, help="Optimizer convergence tolerance")
    compute.set_defaults(func=run_compute)

    check = sub.add_parser("check", parents=[common], help="Check an inequality over a sample grid")
    check.add_argument("check_kind", choices=CHECK_KINDS, metavar="KIND", help=f"One of {', '.join(CHECK_KINDS)}")
    add_source_arguments(check)
    check.add_argument("--grid", type=int, default=4, help="Interior grid points per axis")
    check.add_argument(
        "--point", type=parse_point, action="append", default=None, help="Explicit sample point (repeatable)"
    )
    check.add_argument("--tol", type=float, default=None, help="Acceptance tolerance of the check")
    check.add_argument("--opt-tol", type=float, default=None, help="Optimizer convergence tolerance")
    check.add_argument(
        "--case", choices=[case.value for case in LagrangianCase], default=LagrangianCase.L1.value,
        help="Lagrangian inequality variant",
    )
    check.add_argument("--rigidity", default=None, help="Also check a rigidity bound: 'sphere' or n1")
    check.add_argument("--workers", type=int, default=1, help="Threads used to evaluate grid points")
    check.set_defaults(func=run_check_command)

    report = sub.add_parser("report", parents=[common], help="Re-emit a saved JSON report")
    report.add_argument("--input", required=True, metavar="FILE", help="JSON report written by 'check'")
    report.set_defaults(func=run_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Runs dinv from the CLI and returns the exit code"""
    parser = build_parser()
    try:
        args: argparse.Namespace = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG if args.verbose > 1 else logging.INFO)
    logger.debug(f"Arguments: {args}")
    try:
        check_parser_errors(args, parser)
        return args.func(args)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    except (DeltaInvError, UsageError, ValueError, OSError) as exc:
        print(f"dinv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
