"""Self-adaptive differential evolution with a variable population size.

The population *is* the deployment: one 2-D member per hover point, so the
population size doubles as the hover-point count. Each trial vector spawns
three candidate populations (grow by the trial, replace a random member
with it, drop a random member) and the best strictly-improving feasible one
replaces the current population; a removal that leaves the objective exactly
unchanged is also accepted, which is how idle hover points get pruned.

Mutation strategy choice (rand/1 vs rand/2) and the crossover-rate mean
adapt from success/failure statistics accumulated over a learning period.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import de_ops
from .de_ops import DEParams, RAND1, RAND2
from .deployment import Deployment, EnergyBreakdown, _evaluate_points, evaluate
from .scenario import Instance, ScenarioConfig


class InitializationError(RuntimeError):
    """No feasible initial deployment within the evaluation budget."""


@dataclass
class AdaptiveState:
    """Strategy probabilities, success/failure counters, and the CR memory."""

    p1: float = 0.5
    p2: float = 0.5
    s1: int = 0
    f1: int = 0
    s2: int = 0
    f2: int = 0
    cr_memory: list = field(default_factory=list)
    cr_mean: float = 0.5
    lp: int = 50
    gen_in_period: int = 0


@dataclass
class EvalBudget:
    fe: int = 0
    max_fe: int = 0


@dataclass
class RunRecord:
    """Seeded run output: once-per-generation best-objective trace keyed by
    the fitness-evaluation count, plus the final deployment and pricing."""

    trace: list                       # [(fe, best_objective), ...]
    final_deployment: Optional[Deployment]
    final_breakdown: Optional[EnergyBreakdown]
    seed: int
    algorithm_tag: str
    wall_time: float = 0.0
    error: Optional[str] = None


def initialize_population(inst: Instance, cfg: ScenarioConfig, rng,
                          budget: EvalBudget) -> Deployment:
    """Uniform random deployments of m_max points until one is feasible.

    Every attempt costs one fitness evaluation. Raises InitializationError
    once the budget is gone.
    """
    while True:
        points = rng.uniform(cfg.search_lo, cfg.search_hi, size=(cfg.m_max, 2))
        budget.fe += 1
        feasible, _, _, _, _ = _evaluate_points(points, inst, cfg)
        if feasible:
            return Deployment(points)
        if budget.fe >= budget.max_fe:
            raise InitializationError(
                f"no feasible initial deployment within {budget.max_fe} evaluations")


def choose_strategy(state: AdaptiveState, rng) -> str:
    """rand/1 with probability p1, rand/2 otherwise."""
    return RAND1 if rng.random() <= state.p1 else RAND2


def mutate_any_size(points: np.ndarray, i: int, f: float, rng, tag: str) -> np.ndarray:
    """Differential mutation with graceful degradation for tiny populations.

    rand/2 needs five distinct donors and falls back to rand/1 below six
    members; below four members even rand/1 cannot supply three distinct
    donors excluding the target, so the donor indices are drawn with
    replacement over the whole population instead. Without this the search
    would freeze as soon as a removal shrank the deployment to three points.
    """
    n = len(points)
    if tag == RAND2 and n >= 6:
        return de_ops.mutate_rand2(points, i, f, rng)
    if n >= 4:
        return de_ops.mutate_rand1(points, i, f, rng)
    r = rng.integers(n, size=3)
    return points[r[0]] + f * (points[r[1]] - points[r[2]])


def generate_offspring(dep: Deployment, state: AdaptiveState, params: DEParams,
                       cfg: ScenarioConfig, rng) -> list:
    """One trial per population member: pick a strategy, sample F and CR,
    mutate, cross over against the member, clamp into the search box.

    Returns [(trial point, strategy tag, CR), ...] so the update step can
    assign credit to the strategy that produced each trial.
    """
    points = dep.points
    trials = []
    for i in range(len(points)):
        tag = choose_strategy(state, rng)
        f = de_ops.sample_f(params, rng)
        cr = de_ops.sample_cr(state.cr_mean, params, rng)
        mutant = mutate_any_size(points, i, f, rng, tag)
        trial = de_ops.binomial_crossover(points[i], mutant, cr, rng)
        trial = de_ops.repair_bounds(trial, cfg.search_lo, cfg.search_hi)
        trials.append((trial, tag, cr))
    return trials


def _credit(state: AdaptiveState, tag: str, success: bool):
    if success:
        if tag == RAND1:
            state.s1 += 1
        else:
            state.s2 += 1
    else:
        if tag == RAND1:
            state.f1 += 1
        else:
            state.f2 += 1


def update_population(dep: Deployment, trials: list, inst: Instance,
                      cfg: ScenarioConfig, state: AdaptiveState,
                      budget: EvalBudget, rng,
                      current_objective: Optional[float] = None):
    """Process the trial vectors in order against the evolving population.

    For each trial: build the grown / replaced / shrunk candidates (three
    fitness evaluations, charged unconditionally), adopt the best feasible
    strictly-improving one and credit the trial's strategy; otherwise the
    trial failed (debit), and a shrunk candidate whose objective exactly
    matches the current one is still adopted, pruning a hover point that
    contributes nothing. The population size changes by at most one per
    trial.

    Returns (deployment, objective) after all trials.
    """
    points = dep.points
    if current_objective is None:
        feasible, current_objective, _, _, _ = _evaluate_points(points, inst, cfg)
        if not feasible:
            raise ValueError("update_population requires a feasible population")
    for trial, tag, cr in trials:
        m = len(points)
        grown = np.vstack((points, trial[None, :]))
        replaced = points.copy()
        replaced[int(rng.integers(m))] = trial
        shrunk = np.delete(points, int(rng.integers(m)), axis=0)
        ok_g, obj_g, _, _, _ = _evaluate_points(grown, inst, cfg)
        ok_r, obj_r, _, _, _ = _evaluate_points(replaced, inst, cfg)
        ok_s, obj_s, _, _, _ = _evaluate_points(shrunk, inst, cfg)
        budget.fe += 3
        best_points = None
        best_obj = current_objective
        for ok, obj, cand in ((ok_g, obj_g, grown), (ok_r, obj_r, replaced),
                              (ok_s, obj_s, shrunk)):
            if ok and obj < best_obj:
                best_points, best_obj = cand, obj
        if best_points is not None:
            points = best_points
            current_objective = best_obj
            state.cr_memory.append(cr)
            _credit(state, tag, True)
        else:
            if ok_s and obj_s == current_objective:
                points = shrunk
            _credit(state, tag, False)
    return Deployment(points), current_objective


def update_adaptive_state(state: AdaptiveState):
    """Advance the learning-period clock; at the period boundary recompute
    the strategy probabilities from the success/failure counters and the CR
    mean from the accepted-CR memory, then reset both.

    A degenerate period (no successes at all, or an empty CR memory) keeps
    the previous probability / mean.
    """
    state.gen_in_period += 1
    if state.gen_in_period < state.lp:
        return
    denom = state.s2 * (state.s1 + state.f1) + state.s1 * (state.s2 + state.f2)
    if denom > 0:
        state.p1 = state.s1 * (state.s2 + state.f2) / denom
        state.p2 = 1.0 - state.p1
    if state.cr_memory:
        state.cr_mean = float(np.mean(state.cr_memory))
    state.s1 = state.f1 = state.s2 = state.f2 = 0
    state.cr_memory.clear()
    state.gen_in_period = 0


def run(inst: Instance, cfg: ScenarioConfig, seed: int,
        max_fe: Optional[int] = None, params: Optional[DEParams] = None,
        lp: int = 50,
        observer: Optional[Callable] = None) -> RunRecord:
    """One seeded SaDEVPS run.

    Loops generate-offspring / update-population / adapt until the budget is
    spent, sampling the trace once per generation. Deterministic for a given
    (instance, config, seed).
    """
    if max_fe is None:
        max_fe = cfg.max_fe
    if params is None:
        params = DEParams()
    rng = np.random.default_rng(seed)
    budget = EvalBudget(fe=0, max_fe=max_fe)
    state = AdaptiveState(lp=lp)
    started = time.perf_counter()
    try:
        dep = initialize_population(inst, cfg, rng, budget)
    except InitializationError as exc:
        return RunRecord(trace=[], final_deployment=None, final_breakdown=None,
                         seed=seed, algorithm_tag="sadevps",
                         wall_time=time.perf_counter() - started, error=str(exc))
    _, objective, _, _, _ = _evaluate_points(dep.points, inst, cfg)
    trace = [(budget.fe, objective)]
    while budget.fe <= max_fe:
        trials = generate_offspring(dep, state, params, cfg, rng)
        dep, objective = update_population(dep, trials, inst, cfg, state,
                                           budget, rng, objective)
        update_adaptive_state(state)
        trace.append((budget.fe, objective))
        if observer is not None:
            observer(state, budget, objective, dep)
    _, breakdown = evaluate(inst, dep, cfg)
    return RunRecord(trace=trace, final_deployment=dep, final_breakdown=breakdown,
                     seed=seed, algorithm_tag="sadevps",
                     wall_time=time.perf_counter() - started)


def record_to_json(record: RunRecord) -> str:
    """Serialize a run record; wall time is intentionally left out so that
    identical runs produce identical documents."""
    doc = {
        "algorithm_tag": record.algorithm_tag,
        "seed": record.seed,
        "trace": [[fe, obj] for fe, obj in record.trace],
        "final_deployment": None,
        "final_breakdown": None,
        "error": record.error,
    }
    if record.final_deployment is not None:
        doc["final_deployment"] = [[float(x), float(y)]
                                   for x, y in record.final_deployment.points]
    if record.final_breakdown is not None:
        bd = record.final_breakdown
        doc["final_breakdown"] = {
            "e_hover": bd.e_hover,
            "e_transmit": bd.e_transmit,
            "objective": bd.objective,
            "hover_times": [float(t) for t in bd.hover_times],
        }
    return json.dumps(doc, indent=2) + "\n"


def record_from_json(text: str) -> RunRecord:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"run record document: {exc}") from exc
    dep = None
    if doc.get("final_deployment") is not None:
        dep = Deployment(doc["final_deployment"])
    breakdown = None
    if doc.get("final_breakdown") is not None:
        bd = doc["final_breakdown"]
        breakdown = EnergyBreakdown(
            e_hover=bd["e_hover"], e_transmit=bd["e_transmit"],
            objective=bd["objective"], hover_times=np.asarray(bd["hover_times"]))
    return RunRecord(trace=[(int(fe), float(obj)) for fe, obj in doc["trace"]],
                     final_deployment=dep, final_breakdown=breakdown,
                     seed=int(doc["seed"]), algorithm_tag=str(doc["algorithm_tag"]),
                     error=doc.get("error"))
