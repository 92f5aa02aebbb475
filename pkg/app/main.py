"""Command-line entry point: ``mini-minkowski COMMAND --norm SOURCE [options]``.

The report object goes to standard output; diagnostics go to standard error.
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

# Add the parent directory to the path so we can import from app
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

try:
    from .database import Database
    from .models import Command, FigureKind, OutputFormat, RunConfig, SearchConfig, Tolerances
    from .runner import EXIT_INVALID, CommandRunner, RunOutcome
except ImportError:
    # Fallback for direct execution
    from app.database import Database
    from app.models import Command, FigureKind, OutputFormat, RunConfig, SearchConfig, Tolerances
    from app.runner import EXIT_INVALID, CommandRunner, RunOutcome

logger = logging.getLogger("app")

INTEGER_TOLERANCES = {"n_roberts", "n_fan"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mini-minkowski",
        description="Orthogonality, bisectors and geometric constants of normed planes",
    )
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("--norm", dest="norm_source", help="euclidean, lp:P, regular:K, polygon:FILE, sampled:FILE")
    parser.add_argument("--resolution", type=int, default=256)
    parser.add_argument("--inner-resolution", type=int, default=64)
    parser.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE")
    parser.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat], default="json")
    parser.add_argument("--svg", dest="svg_path")
    parser.add_argument("--deterministic", action="store_true")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--x", nargs=2, metavar=("U", "V"))
    parser.add_argument("--y", nargs=2, metavar=("U", "V"))
    parser.add_argument("--theta", type=float, help="ray angle of x on the unit circle (inner, figure)")
    parser.add_argument("--offset", type=float)
    parser.add_argument("--offset-max", type=float, default=3.0)
    parser.add_argument("--n-steps", type=int, default=64)
    parser.add_argument("--method", choices=["chords", "support", "both"], default="chords")
    parser.add_argument("--figure", choices=[k.value for k in FigureKind])
    parser.add_argument("--ledger", dest="ledger_url", help="SQLAlchemy URL of the run ledger")
    parser.add_argument("--limit", type=int, default=20)

    search = parser.add_argument_group("search")
    search.add_argument("--family", choices=["random", "affine-square"], default="random")
    search.add_argument("--count", type=int, default=20)
    search.add_argument("--n-half-min", type=int, default=2)
    search.add_argument("--n-half-max", type=int, default=6)
    search.add_argument("--search-resolution", type=int, default=128)
    search.add_argument("--search-inner-resolution", type=int, default=32)

    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def parse_tolerances(items: List[str]) -> Tolerances:
    overrides: Dict[str, Any] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--tol expects KEY=VALUE, got {item!r}")
        key = key.strip().replace("-", "_")
        overrides[key] = int(value) if key in INTEGER_TOLERANCES else float(value)
    return Tolerances().with_overrides(overrides)


def build_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        norm_source=args.norm_source,
        resolution=args.resolution,
        inner_resolution=args.inner_resolution,
        tolerances=parse_tolerances(args.tol),
        output_format=args.output_format,
        svg_path=args.svg_path,
        deterministic=args.deterministic,
        seed=args.seed,
        x=tuple(args.x) if args.x else None,
        y=tuple(args.y) if args.y else None,
        theta=args.theta,
        offset=args.offset,
        offset_max=args.offset_max,
        n_steps=args.n_steps,
        method=args.method,
        figure=args.figure,
        search=SearchConfig(
            family=args.family,
            count=args.count,
            n_half_min=args.n_half_min,
            n_half_max=args.n_half_max,
            seed=args.seed,
            resolution=args.search_resolution,
            inner_resolution=args.search_inner_resolution,
        ),
        ledger_url=args.ledger_url,
        limit=args.limit,
    )


def render(outcome: RunOutcome, config: RunConfig) -> str:
    if config.output_format == OutputFormat.CSV and outcome.table is not None:
        return outcome.table
    return json.dumps(outcome.report, sort_keys=True, indent=2) + "\n"


def run(config: RunConfig, database: Optional[Database] = None) -> RunOutcome:
    """Execute one configured command; the ledger is opened from ``config.ledger_url`` when given"""
    if database is None and config.ledger_url:
        database = Database(config.ledger_url)
        database.init_db()
    return CommandRunner(database).execute(config)


def configure_logging(verbosity: int):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(level)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = build_config(args)
    except (ValidationError, ValueError) as e:
        print(f"❌ Invalid configuration: {e}", file=sys.stderr)
        return EXIT_INVALID

    outcome = run(config)
    for line in outcome.logs:
        logger.info(line)
    sys.stdout.write(render(outcome, config))
    sys.stdout.flush()
    if outcome.exit_code == 0:
        print(f"✅ {outcome.logs[-1]}", file=sys.stderr)
    else:
        print(f"❌ {outcome.logs[-1]}", file=sys.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
