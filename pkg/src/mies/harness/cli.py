"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 property-check failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import ArtifactIOError, ConfigError
from .config import load_config, parse_seeds
from .figures import FIGURES, SCALES, reproduce_figure
from .runner import run_experiment, verify_trace

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_PROPERTY = 3


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    out = Path(args.out) if args.out else Path(args.config).with_suffix("")
    if out == Path(args.config):
        out = out.with_name(out.name + "_out")
    res = run_experiment(cfg, out, keep_traces=False)
    s = res.summary
    print(f"wrote {len(res.runs)} runs to {out}")
    print(f"hit {s['n_hit']}/{len(cfg.seeds)}  stagnated {s['n_stagnated']}/{len(cfg.seeds)}  "
          f"median T_eps {s['median_t_eps']}")
    for seed, msg in res.failures.items():
        print(f"seed {seed} failed: {msg}", file=sys.stderr)
    return EXIT_RUNTIME if res.failures else EXIT_OK


def _cmd_figure(args) -> int:
    seeds = None
    if args.seeds:
        seeds = parse_seeds(args.seeds, "--seeds")
    fig = reproduce_figure(args.fig_id, args.scale, args.out, seeds=seeds, budget_cap=args.budget_cap)
    for cell, res in fig.cells:
        print(f"{cell.label}: hit {res.n_hit}/{len(cell.config.seeds)} "
              f"stagnated {res.n_stagnated}/{len(cell.config.seeds)} "
              f"median final f {res.summary['median_final_f_elite']}")
    for note in fig.notes:
        print(f"note: {note}")
    for p in fig.figure_paths:
        print(f"wrote {p}")
    failed = any(res.failures for _, res in fig.cells)
    return EXIT_RUNTIME if failed else EXIT_OK


def _cmd_check_props(args) -> int:
    from .props import run_all

    results = run_all(quick=args.quick)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY


def _cmd_verify_trace(args) -> int:
    code = EXIT_OK
    for path in args.csv:
        chk = verify_trace(path, args.sigma_lb)
        status = "PASS" if chk.ok else "FAIL"
        where = "" if chk.ok else f", first violation at t={chk.first_violation_t}"
        print(f"{status} {path}: {chk.n_rows} rows, min sigma_d {chk.min_sigma_d!r} "
              f">= sigma_lb {chk.sigma_lb!r}{where}")
        if not chk.ok:
            code = EXIT_PROPERTY
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mies", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run every seed of a config file")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (default: config path without suffix)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("figure", help="reproduce a convergence figure preset")
    p.add_argument("fig_id", choices=FIGURES)
    p.add_argument("--scale", choices=SCALES, default="desk")
    p.add_argument("--out", default="figures")
    p.add_argument("--seeds", help="override seeds, e.g. 0-4")
    p.add_argument("--budget-cap", type=int, help="clip every budget (smoke runs)")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("check-props", help="grid and Monte-Carlo checks of the analytic bounds")
    p.add_argument("--quick", action="store_true", help="fewer replications")
    p.set_defaults(func=_cmd_check_props)

    p = sub.add_parser("verify-trace", help="check the margin floor on trace CSV rows")
    p.add_argument("csv", nargs="+")
    p.add_argument("--sigma-lb", type=float,
                   help="margin to check against (default: read from ensemble_summary.txt)")
    p.set_defaults(func=_cmd_verify_trace)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArtifactIOError, RuntimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
