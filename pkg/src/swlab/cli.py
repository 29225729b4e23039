"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 identity failure.
Outputs go under ``$SWLAB_OUTPUT_ROOT`` (default ``./swlab-output``).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError, SolverError
from .experiments import PRESETS, compare_schemes, load_config, run_scenario, run_verifier

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_IDENTITY = 0, 2, 3, 4
OUTPUT_ENV = "SWLAB_OUTPUT_ROOT"


def output_root() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "swlab-output"))


def _with_overrides(cfg, args):
    kw = {}
    if getattr(args, "end_time", None) is not None:
        kw["T"] = args.end_time
    if getattr(args, "snapshot_every", None) is not None:
        kw["snapshot_every"] = args.snapshot_every
    return replace(cfg, **kw) if kw else cfg


def cmd_run(args) -> int:
    cfg = _with_overrides(load_config(args.scenario), args)
    out = Path(args.output) if args.output else output_root() / cfg.name
    try:
        res = run_scenario(cfg, out)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        print(f"partial output in {out}", file=sys.stderr)
        return EXIT_SOLVER
    print(f"{cfg.name}: {res.layers} layers written to {out}")
    for law, info in res.report.summary().items():
        if "max" in info:
            print(f"  {law:<16} max |residual| {info['max']:.3e}")
    if res.report.energy:
        print(f"  energy drift     max e_R {float(res.report.e_R.max()):.3e}")
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = run_verifier(args.seed, args.samples, inject_b22=args.inject_b22)
    sys.stdout.write(rep.text())
    return EXIT_OK if rep.passed else EXIT_IDENTITY


def cmd_compare(args) -> int:
    a = _with_overrides(load_config(args.a), args)
    b = _with_overrides(load_config(args.b), args)
    try:
        table = compare_schemes(a, b)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    out = Path(args.output) if args.output else output_root() / f"compare_{a.name}_vs_{b.name}"
    out.mkdir(parents=True, exist_ok=True)
    table.to_csv(out / "compare.csv")
    print(f"{a.name} vs {b.name}: {table.time.size} layers written to {out / 'compare.csv'}")
    print(f"  final e_R  {table.e_R_a[-1]:.3e}  {table.e_R_b[-1]:.3e}")
    print(f"  final log10 ratio {table.log_ratio[-1]:.2f}")
    return EXIT_OK


def cmd_list(args) -> int:
    for name, cfg in PRESETS.items():
        print(f"{name:<30} {cfg.coordinates:<10} {cfg.scheme:<10} T={cfg.T:g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a preset or an INI scenario file")
    r.add_argument("scenario", help="preset name or path to an INI file")
    r.add_argument("-o", "--output", help="output directory (default: $%s/<name>)" % OUTPUT_ENV)
    r.add_argument("--end-time", type=float, help="override the end time T")
    r.add_argument("--snapshot-every", type=int, help="write fields every N layers")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="run the algebraic identity suites")
    v.add_argument("--samples", type=int, default=10_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-b22", type=float, default=None, metavar="VALUE",
                   help="negative control: corrupt B22 in the energy identity")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compare", help="compare energy diagnostics of two scenarios")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("-o", "--output")
    c.add_argument("--end-time", type=float)
    c.set_defaults(func=cmd_compare)

    ls = sub.add_parser("list-presets", help="list built-in scenarios")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
