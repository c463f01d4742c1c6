"""Command line entry point: `simulate <config>`, `verify`, `sweep <config>`.

Exit codes: 0 all enabled checks pass, 1 a check failed, 2 configuration
error (the message names the offending field), 3 numeric failure (a run
halted on a spacelikeness violation).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .scenarios import (ConfigError, ScenarioConfig, run_dirichlet_sweep,
                        run_nested_scenario, run_scenario_config,
                        write_run_artifacts, write_summary_json,
                        write_sweep_csv)
from .verification import run_identity_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON in {path}: {exc}")


def _out_dir(raw: dict, override: str | None) -> str:
    if override:
        return override
    out = raw.get("output_dir")
    if out is not None and not isinstance(out, str):
        raise ConfigError("output_dir", "expected a string path")
    return out or "mcflow_out"


def cmd_simulate(args) -> int:
    try:
        raw = _load_config(args.config)
        cfg = ScenarioConfig.from_dict(raw)
        out = _out_dir(raw, args.output_dir)
        result = run_scenario_config(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    write_run_artifacts(result, out)
    for check in result.checks:
        status = "PASS" if check["pass"] else "FAIL"
        print(f"{check['name']:32s} {status}")
    for warning in result.warnings:
        print(f"warning: {warning}")
    if result.numeric_failure:
        print("numeric failure: run halted on a spacelikeness violation",
              file=sys.stderr)
        return EXIT_NUMERIC
    if not result.all_passed:
        return EXIT_CHECK_FAILED
    if args.strict and result.warnings:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_verify(args) -> int:
    dims_raw = args.dimensions.strip()
    try:
        dims = tuple(int(s) for s in dims_raw.split(",") if s.strip())
    except ValueError:
        print(f"config error: --dimensions must be a comma list of integers, "
              f"got {args.dimensions!r}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run_identity_suite(seed=args.seed, dims=dims,
                                    inject_fault=args.inject_fault)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if report.empty:
        print("nothing to verify: empty sweep", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{'identity':34s} {'samples':>8s} {'deviation':>13s} "
          f"{'tolerance':>10s}  status")
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{check.name:34s} {check.samples:8d} {check.deviation:13.3e} "
              f"{check.tolerance:10.0e}  {status}")
    if not report.all_passed:
        worst = max((c for c in report.checks if not c.passed),
                    key=lambda c: c.deviation - c.tolerance)
        print(f"FAILED: {worst.name} deviated by {worst.deviation:.3e} "
              f"(tolerance {worst.tolerance:.0e})", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        raw = _load_config(args.config)
        sweep = raw.get("sweep")
        if not isinstance(sweep, dict):
            raise ConfigError("sweep", "missing sweep section")
        parameter = sweep.get("parameter")
        if parameter != "R":
            raise ConfigError("sweep.parameter",
                              f"only 'R' sweeps are supported, got {parameter!r}")
        values = sweep.get("values")
        if (not isinstance(values, list)
                or any(isinstance(v, bool) or not isinstance(v, (int, float))
                       for v in values)):
            raise ConfigError("sweep.values", "expected a list of numbers")
        if len(values) < 2:
            print("config error: sweep.values: need a grid of >= 2 points",
                  file=sys.stderr)
            return EXIT_CONFIG
        scenario = raw.get("scenario")
        out = _out_dir(raw, args.output_dir)
        os.makedirs(out, exist_ok=True)
        if scenario == "dirichlet":
            rows, fits, results = run_dirichlet_sweep(
                raw, values, out_dir=out, workers=args.workers)
            write_sweep_csv(rows, os.path.join(out, "sweep.csv"))
            summary = {"rows": rows, "fits": fits}
            rng = raw.get("expected_bound_exponent_range")
            checks_ok = all(r["pass"] for r in rows)
            if rng is not None:
                lo, hi = float(rng[0]), float(rng[1])
                in_range = (fits["bound_exponent"] is not None
                            and lo <= fits["bound_exponent"] <= hi)
                summary["bound_exponent_in_range"] = bool(in_range)
                checks_ok = checks_ok and in_range
            summary["pass"] = checks_ok
            write_summary_json(summary, os.path.join(out, "sweep_summary.json"))
            print(f"bound exponent: {fits['bound_exponent']}")
            print(f"measured exponent: {fits['measured_exponent']}")
            return EXIT_OK if checks_ok else EXIT_CHECK_FAILED
        if scenario == "nested_balls":
            cfg = ScenarioConfig.from_dict(raw)
            result = run_nested_scenario(cfg, R_values=values)
            payload = dict(result.summary)
            payload["warnings"] = sorted(result.warnings)
            payload["pass"] = result.all_passed
            write_summary_json(payload, os.path.join(out, "sweep_summary.json"))
            for row in result.summary["rows"]:
                print(f"R {row['R_small']:g} vs {row['R_large']:g}: "
                      f"max difference {row['max_difference']:.6e}")
            if args.strict and result.warnings:
                return EXIT_CHECK_FAILED
            return EXIT_OK
        raise ConfigError("scenario",
                          f"sweep supports dirichlet and nested_balls, "
                          f"got {scenario!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mcflow",
        description="Graphical spacelike curvature flow laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one scenario from a config")
    p_sim.add_argument("config")
    p_sim.add_argument("--output-dir", default=None)
    p_sim.add_argument("--strict", action="store_true",
                       help="promote warnings to failures")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run the closed-form identity suite")
    p_ver.add_argument("--seed", type=int, default=0,
                       help="seed for randomized sample points")
    p_ver.add_argument("--dimensions", default="3,4,5",
                       help="profile dimensions to sweep (comma list)")
    p_ver.add_argument("--inject-fault", default=None,
                       help="perturb the named identity (test mode)")
    p_ver.add_argument("--strict", action="store_true")
    p_ver.set_defaults(func=cmd_verify)

    p_swp = sub.add_parser("sweep", help="run a parameter sweep from a config")
    p_swp.add_argument("config")
    p_swp.add_argument("--output-dir", default=None)
    p_swp.add_argument("--workers", type=int, default=1)
    p_swp.add_argument("--strict", action="store_true")
    p_swp.add_argument("--seed", type=int, default=0)
    p_swp.set_defaults(func=cmd_sweep)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
