"""Command line interface.

    stochnet simulate --config <file.toml> [--out <dir>] [--threads <k>]
    stochnet reduce   --config <file.toml>
    stochnet report   <run-dir> [--out <file.csv>]

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure
(integration or analysis error). Setting STOCHNET_SEED overrides the seed
from the config file.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .config import load_config
from .errors import ConfigError, StochnetError
from .pipeline import build_system, reduce_system, run_simulation, summarize_run
from .serialize import write_json


def _apply_seed_override(cfg):
    raw = os.environ.get("STOCHNET_SEED")
    if raw is None:
        return cfg
    try:
        seed = int(raw)
    except ValueError:
        raise ConfigError(f"STOCHNET_SEED must be an integer, got {raw!r}")
    if seed < 0:
        raise ConfigError("STOCHNET_SEED must be nonnegative")
    return dataclasses.replace(cfg, sde=dataclasses.replace(cfg.sde, seed=seed))


def cmd_simulate(args) -> int:
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    cfg = _apply_seed_override(load_config(args.config))
    out_dir = args.out if args.out else cfg.resolve(cfg.output.directory)
    manifest = run_simulation(cfg, out_dir, threads=args.threads)
    n_eps = len(manifest.epsilons)
    print(f"wrote {out_dir}: {n_eps} noise amplitude(s), "
          f"seed {manifest.seed}, {manifest.wall_time_s:.1f}s")
    for eps in manifest.epsilons:
        err = manifest.reduction_errors[str(eps)]
        score = manifest.scores[str(eps)]
        print(f"  epsilon={eps:g}: score={score:.4g} reduction_error={err:.4g}")
    if manifest.failures:
        print(f"  warning: blow-ups recorded in {sorted(manifest.failures)}")
    return 0


def cmd_reduce(args) -> int:
    cfg = _apply_seed_override(load_config(args.config))
    system = build_system(cfg)
    models = {}
    for eps in cfg.model.epsilon:
        eff = reduce_system(cfg, system, eps)
        models[str(eps)] = eff.to_json_dict()
    doc = models if len(models) > 1 else next(iter(models.values()))
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _format_report_rows(rows) -> str:
    header = (f"{'epsilon':>10} {'score':>12} {'converged':>10} "
              f"{'final/peak':>12} {'red_error':>12}")
    lines = [header]
    for row in rows:
        lines.append(
            f"{row['epsilon']:>10g} {row['score']:>12.4g} "
            f"{str(bool(row['decreasing_after_peak'])):>10} "
            f"{row['final_to_peak_ratio']:>12.4g} "
            f"{row['reduction_error']:>12.4g}"
        )
    return "\n".join(lines)


def cmd_report(args) -> int:
    rows = summarize_run(args.run_dir)
    text = _format_report_rows(rows)
    print(text)
    out_csv = args.out if args.out else os.path.join(args.run_dir, "report.csv")
    with open(out_csv, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("epsilon,score,decreasing_after_peak,"
                 "final_to_peak_ratio,reduction_error\n")
        for row in rows:
            fh.write(
                f"{row['epsilon']!r},{row['score']!r},"
                f"{str(bool(row['decreasing_after_peak'])).lower()},"
                f"{row['final_to_peak_ratio']!r},{row['reduction_error']!r}\n"
            )
    write_json(rows, os.path.join(args.run_dir, "report.json"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stochnet",
        description="Reduce stochastic dynamical networks to one dimension "
                    "and compare full and reduced simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser(
        "simulate", help="run full and effective ensembles, write artifacts")
    p_sim.add_argument("--config", required=True, help="TOML experiment file")
    p_sim.add_argument("--out", default=None,
                       help="output directory (default: from config)")
    p_sim.add_argument("--threads", type=int, default=1,
                       help="worker threads per ensemble (default 1)")
    p_sim.set_defaults(func=cmd_simulate)

    p_red = sub.add_parser(
        "reduce", help="print the one-dimensional effective model as JSON")
    p_red.add_argument("--config", required=True, help="TOML experiment file")
    p_red.set_defaults(func=cmd_reduce)

    p_rep = sub.add_parser(
        "report", help="summarize an existing run directory")
    p_rep.add_argument("run_dir", help="directory written by simulate")
    p_rep.add_argument("--out", default=None,
                       help="CSV path (default: <run-dir>/report.csv)")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StochnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
