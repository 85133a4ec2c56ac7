"""Command line front end.

Usage:
    biblionet <stage> --config CONFIG [--out DIR] [--links PATH]
                      [--epsilon E] [--window W] [--seedless]
    biblionet --stage <stage> --config CONFIG ...

Stages: ingest, link, exclude, indicators, network, signing, report.
``report`` runs the whole pipeline and emits every table, the figures and
the manifest. ``--links`` loads a persisted link set export instead of
re-running the matching step. ``--seedless`` installs a guard that makes
any use of the random module fail, asserting that the run is free of
randomness.

Exit codes: 0 success, 1 stage error, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import random
import sys
from contextlib import contextmanager

from biblionet.config import load_config, validate_config
from biblionet.errors import BiblionetError, ConfigError
from biblionet.reports import STAGES, run_stage


@contextmanager
def _rng_guard():
    """Make global random-module calls raise for the duration of the run."""

    def _blocked(*_args, **_kwargs):
        raise RuntimeError("random number generation is disabled (--seedless)")

    names = ("random", "randint", "randrange", "choice", "choices",
             "shuffle", "sample", "uniform", "gauss")
    saved = {name: getattr(random, name) for name in names}
    try:
        for name in names:
            setattr(random, name, _blocked)
        yield
    finally:
        for name, fn in saved.items():
            setattr(random, name, fn)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biblionet",
        description="Evaluate a networked research programme from bibliographic records.",
    )
    parser.add_argument("stage_pos", nargs="?", choices=STAGES, metavar="stage",
                        help="pipeline stage to run (%(choices)s)")
    parser.add_argument("--stage", choices=STAGES, dest="stage_opt",
                        help="pipeline stage, alternative to the positional form")
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--out", help="output directory (overrides the configured one)")
    parser.add_argument("--links", help="persisted link set export to load instead of matching")
    parser.add_argument("--epsilon", type=float,
                        help="stabilization tolerance in percentage points")
    parser.add_argument("--window", type=int,
                        help="stabilization window length in years")
    parser.add_argument("--seedless", action="store_true",
                        help="assert that the run never touches the random module")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    stage = args.stage_pos or args.stage_opt
    if stage is None:
        print("error: no stage given (positional or --stage)", file=sys.stderr)
        return 2
    if args.stage_pos and args.stage_opt and args.stage_pos != args.stage_opt:
        print("error: conflicting stage arguments", file=sys.stderr)
        return 2

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.epsilon is not None:
        config.epsilon = args.epsilon
    if args.window is not None:
        config.stabilization_window = args.window

    findings = validate_config(config)
    if findings:
        for finding in findings:
            print(f"config: {finding.field}: {finding.message}", file=sys.stderr)
        return 2

    try:
        if args.seedless:
            with _rng_guard():
                bundle = run_stage(config, stage, links_path=args.links, out_dir=args.out)
        else:
            bundle = run_stage(config, stage, links_path=args.links, out_dir=args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BiblionetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for section in ("reports", "diagnostics", "figures"):
        for entry in bundle.manifest[section]:
            rows = f" ({entry['rows']} rows)" if "rows" in entry else ""
            print(f"wrote {entry['path']}{rows}")
    if stage == "report":
        print("wrote manifest.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
