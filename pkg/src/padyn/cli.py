"""Command-line front end: ``padyn {analyze,trajectory,verify,ergodic,report}``."""

from __future__ import annotations

import argparse
import sys

from .harness import (
    ERGODIC_CHECKS,
    EXIT_FAIL,
    EXIT_INPUT,
    EXIT_OK,
    FORMATS,
    VERIFY_CHECKS,
    Scenario,
    ScenarioError,
    build,
    emit,
    exponent_grid,
    parse_map_spec,
    read_scenario_data,
    run_scenario,
    trajectory_rows,
)
from .maps import iterate
from .radius import classify_sphere, siegel_radius


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="JSON scenario file; flags override its values")
    common.add_argument("--prime", type=int)
    common.add_argument("--map", help='coefficients, e.g. "a=1,b=25,d=1" or "alpha=-2,beta=0,delta=0"')
    common.add_argument("--point", action="append", default=None,
                        help="starting point as an integer or num/den (repeatable)")
    common.add_argument("--steps", type=int)
    common.add_argument("--level", type=int)
    common.add_argument("--format", choices=FORMATS, default="table")

    parser = argparse.ArgumentParser(prog="padyn",
                                     description="p-adic dynamics of (2,2)-rational maps")
    sub = parser.add_subparsers(dest="verb", required=True)
    sub.add_parser("analyze", parents=[common], help="invariants and sphere classification")
    sub.add_parser("trajectory", parents=[common], help="orbit dump with distances to x0")
    sub.add_parser("verify", parents=[common], help="norm identities and radius-map checks")
    sub.add_parser("ergodic", parents=[common], help="invariant spheres and non-ergodicity")
    rep = sub.add_parser("report", parents=[common], help="every applicable check")
    rep.add_argument("--checks", help="comma-separated check names (default: all)")
    return parser


def _load(args, default_checks) -> Scenario:
    data = {}
    if args.scenario:
        try:
            with open(args.scenario, encoding="utf-8") as fh:
                data = read_scenario_data(fh.read())
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario: {exc}") from exc
    if args.prime is not None:
        data["prime"] = args.prime
    if args.map:
        for k in ("a", "b", "c", "d", "e", "alpha", "beta", "delta", "family"):
            data.pop(k, None)
        data.update(parse_map_spec(args.map))
    if args.point is not None:
        data["points"] = args.point
    if args.steps is not None:
        data["steps"] = args.steps
    if args.level is not None:
        data["level"] = args.level
    checks = getattr(args, "checks", None)
    if checks:
        data["checks"] = [c.strip() for c in checks.split(",") if c.strip()]
    elif default_checks is not None:
        data["checks"] = list(default_checks)
    return Scenario.from_mapping(data)


def _analyze(s: Scenario) -> tuple[list, int]:
    run = build(s)
    inv = run.inv
    head = {"record": "invariants", "alpha": str(inv.alpha), "beta": str(inv.beta),
            "delta": str(inv.delta), "case": inv.case.value, "feasible": inv.feasible,
            "siegel_radius": str(siegel_radius(inv))}
    if run.canonical is not None:
        head["map"] = str(run.canonical)
        head["x0"] = run.canonical.x0
    rows = [{"record": "sphere", "radius": str(r), "fate": str(classify_sphere(inv, r))}
            for r in exponent_grid(inv)]
    return [head] + rows, EXIT_OK


def _trajectory(s: Scenario) -> tuple[list, int]:
    run = build(s)
    if run.canonical is None:
        raise ScenarioError("trajectory needs a concrete map")
    if not s.points:
        raise ScenarioError("trajectory needs at least one --point")
    rows = []
    for x in s.points:
        for row in trajectory_rows(iterate(run.canonical, x, s.steps)):
            rows.append({"start": x, **row})
    return rows, EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    defaults = {"verify": VERIFY_CHECKS, "ergodic": ERGODIC_CHECKS}.get(args.verb)
    try:
        s = _load(args, defaults)
        if args.verb == "analyze":
            out, code = _analyze(s)
        elif args.verb == "trajectory":
            out, code = _trajectory(s)
        else:
            report = run_scenario(s)
            out, code = report, report.exit_code
        if args.format == "csv" and args.verb != "trajectory":
            raise ScenarioError("csv output is only for the trajectory verb")
        sys.stdout.write(emit(out, args.format))
    except ScenarioError as exc:
        print(f"padyn: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"padyn: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code if code in (EXIT_OK, EXIT_FAIL, EXIT_INPUT) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
