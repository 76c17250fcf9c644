"""Command-line front end.

    oamshear list-scenarios
    oamshear validate SCENARIO
    oamshear run SCENARIO [--output DIR] [--workers N]

Exit codes: 0 success, 1 other failure, 2 invalid configuration,
3 numerical non-convergence. Relative output paths resolve against
``$OAMSHEAR_OUTPUT_ROOT`` (default: the working directory).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import ConfigError, QuadratureError
from .scenarios import DESCRIPTIONS, KINDS, parameters_for, validate_config

OUTPUT_ROOT_ENV = "OAMSHEAR_OUTPUT_ROOT"
EXIT_OK, EXIT_FAILURE, EXIT_CONFIG, EXIT_NONCONVERGENCE = 0, 1, 2, 3


def _output_dir(scenario, override):
    root = Path(os.environ.get(OUTPUT_ROOT_ENV, "."))
    target = Path(override or scenario.output or scenario.kind)
    return target if target.is_absolute() else root / target


def _error_record(exc, code, kind=None):
    rec = {"status": "error", "error_type": type(exc).__name__, "message": str(exc), "exit_code": code}
    if kind:
        rec["kind"] = kind
    if isinstance(exc, ConfigError):
        rec["diagnostics"] = exc.diagnostics
    return rec


def cmd_list(args) -> int:
    for kind in KINDS:
        print(f"{kind:22s} {DESCRIPTIONS[kind]}")
        if args.verbose:
            for name, spec in parameters_for(kind).items():
                print(f"    {name:26s} default={spec.default!r}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        scenario = validate_config(args.scenario)
    except ConfigError as exc:
        print(json.dumps(_error_record(exc, EXIT_CONFIG), indent=2), file=sys.stderr)
        return EXIT_CONFIG
    print(json.dumps(scenario.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_run(args) -> int:
    from .runner import run_scenario

    try:
        scenario = validate_config(args.scenario)
    except ConfigError as exc:
        print(json.dumps(_error_record(exc, EXIT_CONFIG), indent=2), file=sys.stderr)
        return EXIT_CONFIG
    out = _output_dir(scenario, args.output)
    try:
        files = run_scenario(scenario, out, workers=args.workers)
    except Exception as exc:  # every module error aborts with a record
        code = EXIT_NONCONVERGENCE if isinstance(exc, QuadratureError) else EXIT_FAILURE
        rec = _error_record(exc, code, scenario.kind)
        out.mkdir(parents=True, exist_ok=True)
        (out / "error.json").write_text(json.dumps(rec, indent=2) + "\n")
        print(json.dumps(rec, indent=2), file=sys.stderr)
        return code
    for f in files:
        print(f)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oamshear", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("list-scenarios", help="list scenario kinds")
    p.add_argument("-v", "--verbose", action="store_true", help="also list parameters and defaults")
    p.set_defaults(func=cmd_list)
    p = sub.add_parser("validate", help="check a scenario file and print it normalised")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("run", help="run a scenario and write its CSV/SVG/JSON bundle")
    p.add_argument("scenario")
    p.add_argument("-o", "--output", help="output directory (overrides the file's 'output')")
    p.add_argument("-j", "--workers", type=int, default=1, help="worker processes for sweeps")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)
