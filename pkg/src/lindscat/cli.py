"""Command line entry point.

Exit codes: 0 when every verdict passes, 1 when a verdict fails, 2 when a
limit did not converge (this takes precedence over 1).
"""
from __future__ import annotations

import argparse
import sys
import time

from .acceptance import SUBSETS, run_criteria
from .pipeline import EXIT_NONCONVERGED, EXIT_OK, EXIT_VERDICT, run_command
from .report import REPORT_SCHEMA_ID, plain, write_outputs
from .scenario import PRESETS, ScenarioError, load_scenario, preset_scenario

SCENARIO_COMMANDS = ("run", "smoothness", "wave-op", "capture")


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lindscat", description="Scattering theory for Lindbladians on lattices.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--t-max", type=_positive_float, help="final checkpoint time")
    common.add_argument("--dt", type=_positive_float,
                        help="quadrature step for smoothness integrals (default: exact)")
    common.add_argument("--tol", type=_positive_float, help="plateau tolerance for Hilbert-space limits")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--out", help="output directory for report files")
    common.add_argument("--format", choices=("json", "json+csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("run", "full report"), ("smoothness", "smoothness constants"),
                       ("wave-op", "Hilbert-space wave operators"), ("capture", "capture sweep")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("scenario", help=f"scenario TOML file, or preset:<name> with name in {sorted(PRESETS)}")
    v = sub.add_parser("verify", parents=[common], help="run acceptance criteria")
    v.add_argument("subset", choices=sorted(SUBSETS))
    v.add_argument("--corrupt-dissipator", action="store_true",
                   help="test fixture: flip the dissipator sign in the semigroup checks")
    return parser


def _load(arg: str):
    if arg.startswith("preset:"):
        return preset_scenario(arg.split(":", 1)[1])
    return load_scenario(arg)


def _verify(args) -> int:
    numbers = SUBSETS[args.subset]
    results = run_criteria(numbers, seed=args.seed or 0, corrupt_sign=args.corrupt_dissipator)
    for r in results:
        print(r.line())
    passed = all(r.passed for r in results)
    report = plain({
        "schema": REPORT_SCHEMA_ID,
        "command": "verify",
        "scenario": None,
        "status": {"exit_code": EXIT_OK if passed else EXIT_VERDICT, "verdicts_passed": passed},
        "details": {"subset": args.subset, "corrupt_dissipator": bool(args.corrupt_dissipator)},
        "criteria": [r.as_dict() for r in results],
    })
    if args.out:
        write_outputs(report, args.out, args.format, sum(r.runtime for r in results), stem="verify")
    return report["status"]["exit_code"]


def _print_summary(report: dict) -> None:
    print(f"{report['command']}: {report['scenario']['name']}")
    for key, lim in sorted(report["limits"].items()):
        print(f"  limit {key}: {'converged' if lim['converged'] else 'NOT converged'}")
    for key, v in sorted(report["verdicts"].items()):
        print(f"  {'PASS' if v['passed'] else 'FAIL'} {key}: measured {v['measured']} threshold {v['threshold']}")
    print(f"exit code {report['status']['exit_code']}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return _verify(args)
    try:
        sc = _load(args.scenario).with_overrides(t_max=args.t_max, tol=args.tol, seed=args.seed)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    start = time.perf_counter()
    try:
        report = run_command(args.command, sc, dt=args.dt)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    runtime = time.perf_counter() - start
    _print_summary(report)
    if args.out:
        write_outputs(report, args.out, args.format, runtime)
    return report["status"]["exit_code"]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

__all__ = ["main", "build_parser", "SCENARIO_COMMANDS", "EXIT_NONCONVERGED"]
