"""Differential-evolution primitives over 2-D vectors.

Stateless given an injected numpy Generator; each run owns its own stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RAND1 = "rand1"
RAND2 = "rand2"


@dataclass(frozen=True)
class DEParams:
    f_mean: float = 0.5
    f_std: float = 0.3
    cr_std: float = 0.1
    f_clip: tuple = (0.05, 1.0)
    cr_clip: tuple = (0.0, 1.0)


def _distinct_indices(n: int, i: int, count: int, rng) -> np.ndarray:
    """`count` distinct indices drawn uniformly from [0, n) excluding i."""
    idx = rng.choice(n - 1, size=count, replace=False)
    idx[idx >= i] += 1
    return idx


def mutate_rand1(pop, i: int, f: float, rng) -> np.ndarray:
    """v = x_r0 + F (x_r1 - x_r2) with r0, r1, r2 distinct and != i."""
    pop = np.asarray(pop, dtype=float)
    if len(pop) < 4:
        raise ValueError("rand/1 mutation needs a population of at least 4")
    r0, r1, r2 = _distinct_indices(len(pop), i, 3, rng)
    return pop[r0] + f * (pop[r1] - pop[r2])


def mutate_rand2(pop, i: int, f: float, rng) -> np.ndarray:
    """v = x_r0 + F (x_r1 - x_r2) + F (x_r3 - x_r4), five distinct donors."""
    pop = np.asarray(pop, dtype=float)
    if len(pop) < 6:
        raise ValueError("rand/2 mutation needs a population of at least 6")
    r0, r1, r2, r3, r4 = _distinct_indices(len(pop), i, 5, rng)
    return pop[r0] + f * (pop[r1] - pop[r2]) + f * (pop[r3] - pop[r4])


def binomial_crossover(target, mutant, cr: float, rng) -> np.ndarray:
    """Per-dimension mix of mutant into target; one dimension is always
    forced from the mutant."""
    target = np.asarray(target, dtype=float)
    mutant = np.asarray(mutant, dtype=float)
    j_rand = rng.integers(len(target))
    take = rng.random(len(target)) <= cr
    take[j_rand] = True
    return np.where(take, mutant, target)


def greedy_select(target_fitness: float, trial_fitness: float) -> bool:
    """True when the trial survives (minimization, ties go to the trial)."""
    return trial_fitness <= target_fitness


def sample_f(params: DEParams, rng) -> float:
    f = rng.normal(params.f_mean, params.f_std)
    return float(min(max(f, params.f_clip[0]), params.f_clip[1]))


def sample_cr(cr_mean: float, params: DEParams, rng) -> float:
    cr = rng.normal(cr_mean, params.cr_std)
    return float(min(max(cr, params.cr_clip[0]), params.cr_clip[1]))


def repair_bounds(v, lo: float, hi: float) -> np.ndarray:
    """Clamp each axis into [lo, hi]. Idempotent."""
    return np.clip(np.asarray(v, dtype=float), lo, hi)
