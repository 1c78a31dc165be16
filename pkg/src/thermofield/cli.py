"""Command-line entry point.

Subcommands:
  validate          run the full invariant suite; exit 0 only if all pass
  oscillator        run one oscillator scenario (--system nonunitary|unitary)
  kramers           run one position-coupled scenario (--system ...)
  propagator        two-point-function scan and closed-form comparison
  compare-pictures  occupation from master equation vs both Langevin pictures

Exit codes: 0 all checks pass, 1 at least one check failed, 2 bad
configuration or usage.  Identical (config, seed) pairs produce
byte-identical CSV output.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, RunConfig, parse_config
from .scenarios import (
    ScenarioReport,
    run_compare_pictures,
    run_kramers,
    run_oscillator_nonunitary,
    run_oscillator_unitary,
    run_propagator,
)
from .serialize import write_csv

_PARAM_FLAGS = [
    ("--omega", "omega", float),
    ("--kappa", "kappa", float),
    ("--nbar", "nbar", float),
    ("--temperature", "temperature", float),
    ("--n0", "n0", float),
    ("--m", "m", float),
    ("--nu", "nu", float),
    ("--x0", "x0", float),
    ("--p0", "p0", float),
    ("--cutoff", "cutoff", int),
    ("--guard", "guard", int),
    ("--dt", "dt", float),
    ("--t-end", "t_end", float),
    ("--ensemble", "ensemble", int),
    ("--threads", "threads", int),
]


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key = value configuration file")
    parser.add_argument("--seed", type=int, help="RNG seed (64-bit)")
    parser.add_argument("--out", help="output directory for CSV and report files")
    for flag, dest, typ in _PARAM_FLAGS:
        parser.add_argument(flag, dest=dest, type=typ)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermofield",
        description="Doubled-space laboratory for damped quantum oscillators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="run every invariant suite")
    _add_common(p_validate)

    p_osc = sub.add_parser("oscillator", help="damped-oscillator scenario")
    p_osc.add_argument("--system", choices=["nonunitary", "unitary"], default="nonunitary")
    _add_common(p_osc)

    p_kram = sub.add_parser("kramers", help="position-coupled scenario")
    p_kram.add_argument("--system", choices=["nonunitary", "unitary"], default="nonunitary")
    _add_common(p_kram)

    p_prop = sub.add_parser("propagator", help="two-point function scan")
    _add_common(p_prop)

    p_cmp = sub.add_parser("compare-pictures", help="master vs Langevin occupation")
    _add_common(p_cmp)
    return parser


def _config_from_args(args, scenario: str) -> RunConfig:
    overrides = {"scenario": scenario}
    for _, dest, _ in _PARAM_FLAGS:
        overrides[dest] = getattr(args, dest, None)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out"] = args.out
    return parse_config(args.config, overrides)


def _emit(report: ScenarioReport, artifacts: dict, out_dir: str) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = report.scenario
    (out / f"{stem}_report.json").write_text(report.to_json())
    for name, table in artifacts.items():
        header = list(table.keys())
        columns = [table[k] for k in header]
        write_csv(out / f"{stem}_{name}.csv", header, columns)
    summary_path = out / f"{stem}_summary.csv"
    write_csv(
        summary_path,
        ["check_index", "observed", "expected", "tolerance", "passed"],
        [
            [float(i) for i in range(len(report.checks))],
            [c.observed for c in report.checks],
            [c.expected for c in report.checks],
            [c.tolerance for c in report.checks],
            [1.0 if c.passed else 0.0 for c in report.checks],
        ],
    )


def _print_report(report: ScenarioReport) -> None:
    print(f"scenario: {report.scenario} (seed {report.seed})")
    for line in report.summary_lines():
        print(line)
    print(f"result: {'PASS' if report.passed else 'FAIL'} "
          f"({report.runtime_seconds:.2f}s)")


def _run_single(runner, cfg: RunConfig) -> int:
    report, artifacts = runner(cfg)
    _emit(report, artifacts, cfg.out)
    _print_report(report)
    return 0 if report.passed else 1


def _run_validate(cfg: RunConfig) -> int:
    """All scenario suites on one parameter set; parallel across scenarios."""
    jobs = [
        ("oscillator-nonunitary", lambda c: run_oscillator_nonunitary(c)),
        ("oscillator-unitary", lambda c: run_oscillator_unitary(c)),
        ("kramers-nonunitary", lambda c: run_kramers(c, "nonunitary")),
        ("kramers-unitary", lambda c: run_kramers(c, "unitary")),
        ("propagator", lambda c: run_propagator(c)),
        ("compare-pictures", lambda c: run_compare_pictures(c)),
    ]
    kramers_cfg = replace(cfg, kappa=min(cfg.kappa, 0.2), t_end=10.0)
    configs = {
        "kramers-nonunitary": kramers_cfg,
        "kramers-unitary": kramers_cfg,
        "propagator": replace(cfg, t_end=2.0),
    }
    results = []
    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        futures = [
            (name, pool.submit(runner, configs.get(name, cfg))) for name, runner in jobs
        ]
        for name, fut in futures:
            report, artifacts = fut.result()
            results.append((name, report, artifacts))
    ok = True
    for name, report, artifacts in results:
        _emit(report, artifacts, cfg.out)
        _print_report(report)
        ok = ok and report.passed
        print()
    print(f"validate: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            cfg = _config_from_args(args, "oscillator-nonunitary")
            return _run_validate(cfg)
        if args.command == "oscillator":
            scenario = f"oscillator-{args.system}"
            cfg = _config_from_args(args, scenario)
            runner = run_oscillator_nonunitary if args.system == "nonunitary" else run_oscillator_unitary
            return _run_single(runner, cfg)
        if args.command == "kramers":
            cfg = _config_from_args(args, f"kramers-{args.system}")
            return _run_single(lambda c: run_kramers(c, args.system), cfg)
        if args.command == "propagator":
            cfg = _config_from_args(args, "oscillator-nonunitary")
            return _run_single(run_propagator, cfg)
        if args.command == "compare-pictures":
            cfg = _config_from_args(args, "oscillator-nonunitary")
            return _run_single(run_compare_pictures, cfg)
        parser.error(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
