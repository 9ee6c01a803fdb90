"""Comparison solvers sharing the SaDEVPS evaluation and budget contracts.

run_devips: variable population, fixed F/CR, rand/1 only (no adaptation).
run_fixed_m_de: classic fixed-size DE over a predetermined hover-point
count; the only accepted move replaces a random member with the trial when
that strictly improves a feasible deployment.
"""

from __future__ import annotations

import time
from typing import Optional

import numpy as np

from . import de_ops
from .deployment import Deployment, _evaluate_points, evaluate
from .sadevps import (AdaptiveState, EvalBudget, InitializationError, RunRecord,
                      initialize_population, mutate_any_size, update_population)
from .scenario import Instance, ScenarioConfig

DEVIPS_F = 0.6
DEVIPS_CR = 0.5
FIXED_M_F = 0.9
FIXED_M_CR = 0.9


def mid_m(cfg: ScenarioConfig) -> int:
    """Midpoint hover-point count floor((m_min + m_max) / 2), which for the
    standard bounds equals floor(K (N + 1) / (2 N))."""
    return (cfg.m_min + cfg.m_max) // 2


def run_devips(inst: Instance, cfg: ScenarioConfig, seed: int,
               max_fe: Optional[int] = None) -> RunRecord:
    """Variable-population DE with constant F=0.6, CR=0.5 and rand/1 only."""
    if max_fe is None:
        max_fe = cfg.max_fe
    rng = np.random.default_rng(seed)
    budget = EvalBudget(fe=0, max_fe=max_fe)
    state = AdaptiveState()  # counters ignored; never adapted
    started = time.perf_counter()
    try:
        dep = initialize_population(inst, cfg, rng, budget)
    except InitializationError as exc:
        return RunRecord(trace=[], final_deployment=None, final_breakdown=None,
                         seed=seed, algorithm_tag="devips",
                         wall_time=time.perf_counter() - started, error=str(exc))
    _, objective, _, _, _ = _evaluate_points(dep.points, inst, cfg)
    trace = [(budget.fe, objective)]
    while budget.fe <= max_fe:
        points = dep.points
        trials = []
        for i in range(len(points)):
            mutant = mutate_any_size(points, i, DEVIPS_F, rng, de_ops.RAND1)
            trial = de_ops.binomial_crossover(points[i], mutant, DEVIPS_CR, rng)
            trial = de_ops.repair_bounds(trial, cfg.search_lo, cfg.search_hi)
            trials.append((trial, de_ops.RAND1, DEVIPS_CR))
        dep, objective = update_population(dep, trials, inst, cfg, state,
                                           budget, rng, objective)
        trace.append((budget.fe, objective))
    _, breakdown = evaluate(inst, dep, cfg)
    return RunRecord(trace=trace, final_deployment=dep, final_breakdown=breakdown,
                     seed=seed, algorithm_tag="devips",
                     wall_time=time.perf_counter() - started)


def run_fixed_m_de(inst: Instance, cfg: ScenarioConfig, m: int, seed: int,
                   max_fe: Optional[int] = None) -> RunRecord:
    """Fixed-size DE at exactly m hover points, F=0.9, CR=0.9.

    Each member proposes a trial; the trial substitutes a uniformly random
    member when the resulting deployment is feasible and strictly better.
    One fitness evaluation per candidate. m never changes.
    """
    if not cfg.m_min <= m <= cfg.m_max:
        raise ValueError(f"m={m} outside [{cfg.m_min}, {cfg.m_max}]")
    if m < 4:
        raise ValueError("fixed-size DE needs at least 4 hover points to mutate")
    if max_fe is None:
        max_fe = cfg.max_fe
    rng = np.random.default_rng(seed)
    budget = EvalBudget(fe=0, max_fe=max_fe)
    started = time.perf_counter()
    points = None
    while True:
        candidate = rng.uniform(cfg.search_lo, cfg.search_hi, size=(m, 2))
        budget.fe += 1
        feasible, objective, _, _, _ = _evaluate_points(candidate, inst, cfg)
        if feasible:
            points = candidate
            break
        if budget.fe >= budget.max_fe:
            return RunRecord(
                trace=[], final_deployment=None, final_breakdown=None,
                seed=seed, algorithm_tag="fixed_m_de",
                wall_time=time.perf_counter() - started,
                error=f"no feasible initial deployment within {max_fe} evaluations")
    trace = [(budget.fe, objective)]
    while budget.fe <= max_fe:
        for i in range(m):
            mutant = de_ops.mutate_rand1(points, i, FIXED_M_F, rng)
            trial = de_ops.binomial_crossover(points[i], mutant, FIXED_M_CR, rng)
            trial = de_ops.repair_bounds(trial, cfg.search_lo, cfg.search_hi)
            candidate = points.copy()
            candidate[int(rng.integers(m))] = trial
            budget.fe += 1
            feasible, obj, _, _, _ = _evaluate_points(candidate, inst, cfg)
            if feasible and obj < objective:
                points, objective = candidate, obj
        trace.append((budget.fe, objective))
    dep = Deployment(points)
    _, breakdown = evaluate(inst, dep, cfg)
    return RunRecord(trace=trace, final_deployment=dep, final_breakdown=breakdown,
                     seed=seed, algorithm_tag="fixed_m_de",
                     wall_time=time.perf_counter() - started)
