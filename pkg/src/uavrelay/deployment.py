"""Candidate deployment evaluation.

A deployment is an ordered list of hover points. Terminals associate with
their nearest point (ties to the lowest index), feasibility checks the
hover-point count bounds and the per-point capacity, and the objective is
hover energy plus phi-weighted transmit energy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .scenario import Instance, ScenarioConfig

CAPACITY = "capacity"
M_BOUNDS = "m_bounds"
EMPTY_POINT_POLICY = "empty_point_policy"  # reserved tag; empty points are allowed


@dataclass(eq=False)
class Deployment:
    """Ordered hover points, shape (M, 2). The point order is meaningful:
    association ties break toward the lower index."""

    points: np.ndarray

    def __init__(self, points):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if len(pts) < 1:
            raise ValueError("a deployment needs at least one hover point")
        self.points = pts

    @property
    def m(self) -> int:
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, Deployment):
            return NotImplemented
        return np.array_equal(self.points, other.points)


@dataclass
class Association:
    assign: np.ndarray  # (K,) index of the serving hover point per terminal
    load: np.ndarray    # (M,) terminals served per hover point


@dataclass
class Verdict:
    feasible: bool
    violation: Optional[str] = None


@dataclass
class EnergyBreakdown:
    e_hover: float
    e_transmit: float
    objective: float
    hover_times: np.ndarray  # (M,) seconds per hover point


def _nearest(points: np.ndarray, ues: np.ndarray, h: float):
    """Per-terminal nearest hover point; returns (assign, slant distances)."""
    dx = ues[:, 0, None] - points[None, :, 0]
    dy = ues[:, 1, None] - points[None, :, 1]
    d = np.sqrt(dx * dx + dy * dy + h * h)  # (K, M)
    assign = d.argmin(axis=1)               # first minimum = lowest index
    return assign, d


def associate(inst: Instance, dep: Deployment, cfg: ScenarioConfig) -> Association:
    """Nearest-point association of every terminal (ties to lowest index)."""
    assign, _ = _nearest(dep.points, inst.ues, cfg.H)
    load = np.bincount(assign, minlength=dep.m)
    return Association(assign=assign, load=load)


def check_feasible(inst: Instance, dep: Deployment, cfg: ScenarioConfig,
                   assoc: Association) -> Verdict:
    """Hover-point count within bounds and no point serving more than N."""
    if not cfg.m_min <= dep.m <= cfg.m_max:
        return Verdict(False, M_BOUNDS)
    if assoc.load.size and assoc.load.max() > cfg.N:
        return Verdict(False, CAPACITY)
    return Verdict(True)


def _rate_bs(points: np.ndarray, cfg: ScenarioConfig):
    """BS -> UAV rate per hover point, bit/s."""
    x = points[:, 0]
    y = points[:, 1]
    gain = cfg.beta0 / (x * x + y * y + cfg.H * cfg.H)
    return cfg.B * np.log2(1.0 + cfg.p_bs_uav * gain / cfg.sigma2)


def _rate_ue(d_serving: np.ndarray, cfg: ScenarioConfig):
    """UAV -> terminal rate along the serving links, bit/s."""
    gain = cfg.beta0 / (d_serving * d_serving)
    return cfg.B * np.log2(1.0 + cfg.p_uav_ue * gain / cfg.sigma2)


def _phase_times(points, ues, demands, assign, d, cfg):
    """Per-point receive time, per-terminal delivery time, per-point max
    delivery time. The receive phase is limited by the largest demand at the
    point (the BS->UAV rate is shared), the delivery phase by the slowest
    assigned terminal."""
    m = len(points)
    d_serving = d[np.arange(len(ues)), assign]
    t_ue = demands / _rate_ue(d_serving, cfg)
    d_max = np.zeros(m)
    np.maximum.at(d_max, assign, demands)
    t_receive = d_max / _rate_bs(points, cfg)  # zero-load points get 0
    t_deliver = np.zeros(m)
    np.maximum.at(t_deliver, assign, t_ue)
    return t_receive, t_ue, t_deliver


def _evaluate_points(points: np.ndarray, inst: Instance, cfg: ScenarioConfig):
    """Feasibility + pricing on a raw (M, 2) array; solver hot path.

    Returns (feasible, objective, e_hover, e_transmit, hover_times); the
    trailing entries are None when infeasible. Hover sums run over loaded
    points only, so dropping a point that serves nobody reproduces the exact
    same float objective.
    """
    m = len(points)
    if m < 1 or not cfg.m_min <= m <= cfg.m_max:
        return False, None, None, None, None
    assign, d = _nearest(points, inst.ues, cfg.H)
    load = np.bincount(assign, minlength=m)
    if load.size and load.max() > cfg.N:
        return False, None, None, None, None
    t_receive, t_ue, t_deliver = _phase_times(
        points, inst.ues, inst.demands_bits, assign, d, cfg)
    live = load > 0
    e_hover = cfg.p_hover * float(t_receive[live].sum() + t_deliver[live].sum())
    e_transmit = cfg.p_uav_ue * float(t_ue.sum())
    objective = e_hover + cfg.phi * e_transmit
    return True, objective, e_hover, e_transmit, t_receive + t_deliver


def objective_of(points: np.ndarray, inst: Instance, cfg: ScenarioConfig):
    """(feasible, objective) for a raw point array; objective is None when
    infeasible."""
    feasible, objective, _, _, _ = _evaluate_points(points, inst, cfg)
    return feasible, objective


def hover_time(inst: Instance, dep: Deployment, cfg: ScenarioConfig,
               assoc: Association, m: int) -> float:
    """Hover time at point m: max receive time plus max delivery time over
    the terminals assigned there; 0.0 when the point serves nobody."""
    mask = assoc.assign == m
    if not mask.any():
        return 0.0
    demands = inst.demands_bits[mask]
    point = dep.points[m]
    r_bs = float(_rate_bs(point[None, :], cfg)[0])
    dx = inst.ues[mask, 0] - point[0]
    dy = inst.ues[mask, 1] - point[1]
    d = np.sqrt(dx * dx + dy * dy + cfg.H * cfg.H)
    r_ue = cfg.B * np.log2(1.0 + cfg.p_uav_ue * (cfg.beta0 / (d * d)) / cfg.sigma2)
    return float(demands.max() / r_bs + (demands / r_ue).max())


def transmit_energy(inst: Instance, dep: Deployment, cfg: ScenarioConfig,
                    assoc: Association) -> float:
    """Radio energy spent delivering every terminal's demand."""
    if inst.k == 0:
        return 0.0
    _, d = _nearest(dep.points, inst.ues, cfg.H)
    d_serving = d[np.arange(inst.k), assoc.assign]
    t_ue = inst.demands_bits / _rate_ue(d_serving, cfg)
    return cfg.p_uav_ue * float(t_ue.sum())


def hover_energy(inst: Instance, dep: Deployment, cfg: ScenarioConfig,
                 assoc: Association) -> float:
    """Hover power times the total hover time over all points."""
    if inst.k == 0:
        return 0.0
    _, d = _nearest(dep.points, inst.ues, cfg.H)
    t_receive, _, t_deliver = _phase_times(
        dep.points, inst.ues, inst.demands_bits, assoc.assign, d, cfg)
    live = np.bincount(assoc.assign, minlength=dep.m) > 0
    return cfg.p_hover * float(t_receive[live].sum() + t_deliver[live].sum())


def evaluate(inst: Instance, dep: Deployment, cfg: ScenarioConfig):
    """Associate, check feasibility, and price the deployment.

    Returns (Verdict, EnergyBreakdown) for feasible deployments and
    (Verdict, None) otherwise. Pure and deterministic.
    """
    verdict = check_feasible(inst, dep, cfg, associate(inst, dep, cfg))
    if not verdict.feasible:
        return verdict, None
    _, objective, e_hover, e_transmit, times = _evaluate_points(dep.points, inst, cfg)
    return verdict, EnergyBreakdown(e_hover=e_hover, e_transmit=e_transmit,
                                    objective=objective, hover_times=times)


def deployment_to_json(dep: Deployment) -> str:
    return json.dumps([[float(x), float(y)] for x, y in dep.points], indent=2) + "\n"


def deployment_from_json(text: str) -> Deployment:
    try:
        pairs = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"deployment document: {exc}") from exc
    return Deployment(pairs)


def breakdown_to_dict(bd: EnergyBreakdown) -> dict:
    return {
        "e_hover": bd.e_hover,
        "e_transmit": bd.e_transmit,
        "objective": bd.objective,
        "hover_times": [float(t) for t in bd.hover_times],
    }
