"""Experiment runner: multi-seed, multi-algorithm campaigns with on-disk
results, per-cell mean convergence traces, and a summary table.

A campaign is a pure function of its plan: run seeds derive arithmetically
from the base seed, the shared instance per K is generated from the base
seed, and no timestamps enter the output files, so re-running a plan
reproduces every file byte for byte.
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import baselines, sadevps
from .scenario import ScenarioConfig, build_config, generate_instance, save_instance

CHECKPOINT_STEP = 1000

ALGO_SADEVPS = "sadevps"
ALGO_DEVIPS = "devips"
ALGO_FIXED_M = "fixed_m_de"


class ExperimentError(RuntimeError):
    """A campaign cell finished with zero successful runs."""


@dataclass
class ExperimentPlan:
    algorithms: list            # e.g. ["sadevps", "devips", "fixed_m_de:max"]
    k_values: list
    runs: int
    base_seed: int
    max_fe: int
    config_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("plan runs must be >= 1")
        if not self.algorithms:
            raise ValueError("plan needs at least one algorithm")
        if not self.k_values:
            raise ValueError("plan needs at least one K value")
        for spec in self.algorithms:
            parse_algorithm_spec(spec)


def parse_algorithm_spec(spec: str):
    """Split an algorithm spec into (tag, m-setting).

    The fixed-M solver takes a suffix: "fixed_m_de:mid", "fixed_m_de:max",
    or an explicit count like "fixed_m_de:52". Hyphens and underscores are
    interchangeable.
    """
    name, _, m_part = spec.replace("-", "_").partition(":")
    if name in (ALGO_SADEVPS, ALGO_DEVIPS):
        if m_part:
            raise ValueError(f"algorithm '{name}' takes no M setting")
        return name, None
    if name == ALGO_FIXED_M:
        if not m_part:
            raise ValueError("fixed_m_de needs an M setting (mid, max, or a count)")
        if m_part not in ("mid", "max"):
            int(m_part)  # raises ValueError on junk
        return name, m_part
    raise ValueError(f"unknown algorithm '{spec}'")


def resolve_m(m_setting, cfg: ScenarioConfig) -> int:
    if m_setting == "mid":
        return baselines.mid_m(cfg)
    if m_setting == "max":
        return cfg.m_max
    return int(m_setting)


def parse_plan(text: str) -> ExperimentPlan:
    """Parse a flat key=value plan document. Unknown keys are rejected."""
    entries = {}
    overrides = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"plan line {lineno}: expected key=value, got {line!r}")
        key, value = stripped.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key.startswith("config."):
            field_name = key[len("config."):]
            if field_name == "K":
                raise ValueError(f"plan line {lineno}: set K through k_values")
            overrides[field_name] = float(value)
        elif key in ("algorithms",):
            entries[key] = [item.strip() for item in value.split(",") if item.strip()]
        elif key in ("k_values",):
            entries[key] = [int(item) for item in value.split(",") if item.strip()]
        elif key in ("runs", "base_seed", "max_fe"):
            entries[key] = int(value)
        else:
            raise ValueError(f"plan line {lineno}: unknown key '{key}'")
    missing = {"algorithms", "k_values", "runs", "base_seed", "max_fe"} - entries.keys()
    if missing:
        raise ValueError(f"plan missing key '{sorted(missing)[0]}'")
    return ExperimentPlan(config_overrides=overrides, **entries)


def cell_label(algo: str, m_setting, k: int, cfg: ScenarioConfig) -> str:
    if algo == ALGO_FIXED_M:
        return f"fixed_m_de_m{resolve_m(m_setting, cfg)}_k{k}"
    return f"{algo}_k{k}"


def run_one(algo: str, m_setting, inst, cfg: ScenarioConfig, seed: int,
            max_fe: int) -> sadevps.RunRecord:
    if algo == ALGO_SADEVPS:
        return sadevps.run(inst, cfg, seed, max_fe)
    if algo == ALGO_DEVIPS:
        return baselines.run_devips(inst, cfg, seed, max_fe)
    if algo == ALGO_FIXED_M:
        return baselines.run_fixed_m_de(inst, cfg, resolve_m(m_setting, cfg),
                                        seed, max_fe)
    raise ValueError(f"unknown algorithm '{algo}'")


def write_atomic(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _execute(job):
    algo, m_setting, inst, cfg, seed, max_fe, path = job
    record = run_one(algo, m_setting, inst, cfg, seed, max_fe)
    write_atomic(path, sadevps.record_to_json(record))
    return path, record.final_breakdown.objective if record.error is None else None, record.error


def checkpoints(max_fe: int) -> np.ndarray:
    return np.arange(0, max_fe + 1, CHECKPOINT_STEP)


def interpolate_trace(trace, fe_grid) -> np.ndarray:
    """Best-so-far objective at the requested fe marks (flat beyond the
    recorded ends)."""
    fes = np.asarray([fe for fe, _ in trace], dtype=float)
    objs = np.asarray([obj for _, obj in trace], dtype=float)
    return np.interp(fe_grid, fes, objs)


def mean_trace_text(records, max_fe: int) -> str:
    grid = checkpoints(max_fe)
    stacked = np.vstack([interpolate_trace(r.trace, grid) for r in records])
    mean = stacked.mean(axis=0)
    lines = ["fe,mean_best_objective"]
    lines += [f"{int(fe)},{float(value)!r}" for fe, value in zip(grid, mean)]
    return "\n".join(lines) + "\n"


def run_experiment(plan: ExperimentPlan, out_dir: str, jobs: int | None = None):
    """Execute every (algorithm, K, seed) run of the plan.

    Writes one run-record file per run, a mean convergence trace per cell,
    the shared instances, and a manifest tying it all together. Per-run
    failures are recorded and the campaign continues; an entire cell without
    a single successful run raises ExperimentError at the end.
    """
    os.makedirs(out_dir, exist_ok=True)
    for sub in ("instances", "runs", "traces"):
        os.makedirs(os.path.join(out_dir, sub), exist_ok=True)

    cells = []
    jobs_list = []
    for k in plan.k_values:
        cfg = build_config(dict(plan.config_overrides, K=k))
        inst = generate_instance(cfg, plan.base_seed)
        save_instance(inst, os.path.join(out_dir, "instances", f"k{k}.json"))
        for spec in plan.algorithms:
            algo, m_setting = parse_algorithm_spec(spec)
            label = cell_label(algo, m_setting, k, cfg)
            seeds = [plan.base_seed + i for i in range(plan.runs)]
            cell_dir = os.path.join(out_dir, "runs", label)
            os.makedirs(cell_dir, exist_ok=True)
            cells.append({
                "cell": label,
                "algorithm_tag": algo,
                "k": k,
                "m": resolve_m(m_setting, cfg) if algo == ALGO_FIXED_M else None,
                "seeds": seeds,
            })
            for seed in seeds:
                path = os.path.join(cell_dir, f"seed_{seed}.json")
                jobs_list.append((algo, m_setting, inst, cfg, seed, plan.max_fe, path))

    if jobs is None:
        jobs = min(len(jobs_list), os.cpu_count() or 1)
    if jobs <= 1:
        results = [_execute(job) for job in jobs_list]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_execute, jobs_list))

    failures = [(path, err) for path, _, err in results if err is not None]
    for path, err in failures:
        print(f"warning: run failed ({err}): {path}", file=sys.stderr)

    manifest = {
        "base_seed": plan.base_seed,
        "max_fe": plan.max_fe,
        "runs": plan.runs,
        "cells": cells,
    }
    write_atomic(os.path.join(out_dir, "manifest.json"),
                 json.dumps(manifest, indent=2) + "\n")

    empty_cells = []
    for cell in cells:
        records = []
        for seed in cell["seeds"]:
            path = os.path.join(out_dir, "runs", cell["cell"], f"seed_{seed}.json")
            record = sadevps.record_from_json(open(path).read())
            if record.error is None:
                records.append(record)
        if not records:
            empty_cells.append(cell["cell"])
            continue
        write_atomic(os.path.join(out_dir, "traces", f"{cell['cell']}.csv"),
                     mean_trace_text(records, plan.max_fe))
    if empty_cells:
        raise ExperimentError(
            "cells with zero successful runs: " + ", ".join(empty_cells))
    return results


def summarize(in_dir: str):
    """Per-cell mean/std of the final objectives plus the percentage gap to
    the best cell at the same K: gap = (mean - best_mean) / best_mean * 100.

    Returns a list of row dicts sorted by (K, mean). Cells without a single
    successful run are dropped with a warning.
    """
    manifest_path = os.path.join(in_dir, "manifest.json")
    if not os.path.exists(manifest_path):
        raise ValueError(f"no manifest.json under {in_dir}; not an experiment dir?")
    manifest = json.loads(open(manifest_path).read())
    rows = []
    for cell in manifest["cells"]:
        finals = []
        for seed in cell["seeds"]:
            path = os.path.join(in_dir, "runs", cell["cell"], f"seed_{seed}.json")
            record = sadevps.record_from_json(open(path).read())
            if record.error is None:
                finals.append(record.final_breakdown.objective)
        if not finals:
            print(f"warning: cell {cell['cell']} has no successful runs; omitted",
                  file=sys.stderr)
            continue
        finals = np.asarray(finals)
        rows.append({
            "k": cell["k"],
            "cell": cell["cell"],
            "runs": len(finals),
            "mean": float(finals.mean()),
            "std": float(finals.std(ddof=1)) if len(finals) > 1 else 0.0,
        })
    for k in {row["k"] for row in rows}:
        group = [row for row in rows if row["k"] == k]
        best = min(row["mean"] for row in group)
        for row in group:
            row["gap_pct"] = (row["mean"] - best) / best * 100.0
    rows.sort(key=lambda row: (row["k"], row["mean"]))
    return rows


def format_summary(rows) -> str:
    header = f"{'K':>5}  {'cell':<24} {'runs':>4}  {'mean_J':>16}  {'std_J':>16}  {'gap':>12}"
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row['k']:>5}  {row['cell']:<24} {row['runs']:>4}  "
            f"{row['mean']:>16.10g}  {row['std']:>16.10g}  "
            f"({row['gap_pct']:.10g}%)")
    return "\n".join(lines) + "\n"
