"""Command-line front end: instance generation, single solves, campaigns,
and result summaries."""

from __future__ import annotations

import argparse
import sys

from . import harness, sadevps
from .harness import ExperimentError, parse_plan, run_experiment, summarize
from .scenario import (GenerationError, build_config, config_from_text,
                       generate_instance, load_instance, save_instance)


def _load_config(path, k=None):
    if path:
        with open(path) as fh:
            cfg = config_from_text(fh.read())
        if k is not None and cfg.K != k:
            cfg = build_config({**_config_raw(cfg), "K": k})
        return cfg
    raw = {} if k is None else {"K": k}
    return build_config(raw)


def _config_raw(cfg):
    from .scenario import _DEFAULTS
    return {key: getattr(cfg, key) for key in _DEFAULTS}


def cmd_gen_instance(args):
    cfg = _load_config(args.config, k=args.k)
    inst = generate_instance(cfg, args.seed)
    save_instance(inst, args.out)
    print(f"wrote {args.out} (K={cfg.K}, seed={args.seed})")


def cmd_solve(args):
    inst_loose = load_instance(args.instance)
    cfg = _load_config(args.config, k=inst_loose.k)
    inst = load_instance(args.instance, cfg)  # re-validates against the config
    algo, m_setting = harness.parse_algorithm_spec(
        args.algo if args.m is None else f"{args.algo}:{args.m}")
    record = harness.run_one(algo, m_setting, inst, cfg, args.seed, args.max_fe)
    harness.write_atomic(args.out, sadevps.record_to_json(record))
    if record.error is not None:
        print(f"run failed: {record.error}", file=sys.stderr)
        return 1
    print(f"wrote {args.out} (objective={record.final_breakdown.objective!r}, "
          f"M={record.final_deployment.m}, fe={record.trace[-1][0]})")
    return 0


def cmd_experiment(args):
    with open(args.plan) as fh:
        plan = parse_plan(fh.read())
    run_experiment(plan, args.out_dir, jobs=args.jobs)
    print(harness.format_summary(summarize(args.out_dir)), end="")


def cmd_summarize(args):
    print(harness.format_summary(summarize(args.in_dir)), end="")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="uavrelay",
        description="UAV relay deployment optimization experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-instance", help="generate a random instance file")
    p.add_argument("--k", type=int, required=True, help="number of terminals")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="flat key=value config file (defaults otherwise)")
    p.set_defaults(func=cmd_gen_instance)

    p = sub.add_parser("solve", help="run one solver on one instance")
    p.add_argument("--algo", required=True,
                   choices=["sadevps", "devips", "fixed-m-de"])
    p.add_argument("--instance", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-fe", type=int, required=True)
    p.add_argument("--m", help="hover-point count for fixed-m-de "
                               "(a number, 'mid', or 'max')")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("experiment", help="run a multi-seed campaign from a plan")
    p.add_argument("--plan", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--jobs", type=int, help="parallel workers (default: CPU count)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("summarize", help="tabulate a finished campaign")
    p.add_argument("--in-dir", required=True)
    p.set_defaults(func=cmd_summarize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except (ValueError, ExperimentError, GenerationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return result or 0


if __name__ == "__main__":
    sys.exit(main())
