"""Naive reference computations used as ground truth in tests.

Everything here is written longhand with scalar math on purpose: no code is
shared with the fast evaluation path, and even the derived constants are
recomputed from the primitive config fields, so a bug elsewhere cannot
validate itself. Not optimized; intended for small inputs.
"""

from __future__ import annotations

import itertools
import math

from .deployment import Deployment
from .scenario import Instance, ScenarioConfig

_ENUMERATION_CAP = 10**7


def brute_force_energy(inst: Instance, dep: Deployment, cfg: ScenarioConfig):
    """Literal re-evaluation of a deployment: exhaustive nearest-point
    association, constraint counting, and term-by-term energy sums.

    Returns (feasible, objective); the objective is None when infeasible.
    """
    beta0 = (4.0 * math.pi * cfg.f_c / cfg.c_light) ** -2
    sigma2 = 10.0 ** ((cfg.n0_dbm_per_hz - 30.0) / 10.0) * cfg.B
    p_hover = cfg.propulsion.p_blade + cfg.propulsion.p_induced
    m_min = math.ceil(cfg.K / cfg.N) if cfg.K else 0
    m_max = cfg.K

    points = [(float(x), float(y)) for x, y in dep.points]
    ues = [(float(x), float(y)) for x, y in inst.ues]
    demands = [float(d) for d in inst.demands_bits]
    m_count = len(points)
    k_count = len(ues)

    if not m_min <= m_count <= m_max:
        return False, None

    # nearest hover point, first index wins ties
    assign = []
    for xk, yk in ues:
        best_m = 0
        best_d = None
        for m, (xm, ym) in enumerate(points):
            dx = xk - xm
            dy = yk - ym
            d = math.sqrt(dx * dx + dy * dy + cfg.H * cfg.H)
            if best_d is None or d < best_d:
                best_d = d
                best_m = m
        assign.append(best_m)

    for m in range(m_count):
        served = sum(1 for a in assign if a == m)
        if served > cfg.N:
            return False, None

    def rate(p_tx, gain):
        return cfg.B * math.log2(1.0 + p_tx * gain / sigma2)

    e_transmit = 0.0
    for k in range(k_count):
        for m in range(m_count):
            if assign[k] != m:
                continue
            dx = ues[k][0] - points[m][0]
            dy = ues[k][1] - points[m][1]
            gain = beta0 / (dx * dx + dy * dy + cfg.H * cfg.H)
            t = demands[k] / rate(cfg.p_uav_ue, gain)
            e_transmit += cfg.p_uav_ue * t

    e_hover = 0.0
    for m in range(m_count):
        xm, ym = points[m]
        gain_bs = beta0 / (xm * xm + ym * ym + cfg.H * cfg.H)
        r_bs = rate(cfg.p_bs_uav, gain_bs)
        t_receive = 0.0
        t_deliver = 0.0
        for k in range(k_count):
            if assign[k] != m:
                continue
            t_receive = max(t_receive, demands[k] / r_bs)
            dx = ues[k][0] - xm
            dy = ues[k][1] - ym
            gain = beta0 / (dx * dx + dy * dy + cfg.H * cfg.H)
            t_deliver = max(t_deliver, demands[k] / rate(cfg.p_uav_ue, gain))
        e_hover += p_hover * (t_receive + t_deliver)

    return True, e_hover + cfg.phi * e_transmit


def grid_search_small(inst: Instance, cfg: ScenarioConfig, grid_step: float,
                      m_range):
    """Exhaustive hover-point placement on a regular grid, for each count in
    m_range; returns the best (Deployment, objective) found.

    Only meant for tiny instances; refuses enumerations beyond 10^7
    candidate deployments.
    """
    nodes = []
    x = cfg.search_lo
    while x <= cfg.search_hi + 1e-9:
        nodes.append(x)
        x += grid_step
    grid = [(x, y) for x in nodes for y in nodes]

    total = sum(math.comb(len(grid) + m - 1, m) for m in m_range)
    if total > _ENUMERATION_CAP:
        raise ValueError(f"grid enumeration of {total} deployments exceeds "
                         f"the {_ENUMERATION_CAP} cap")

    best_dep = None
    best_obj = None
    for m in m_range:
        for combo in itertools.combinations_with_replacement(grid, m):
            dep = Deployment(combo)
            feasible, obj = brute_force_energy(inst, dep, cfg)
            if feasible and (best_obj is None or obj < best_obj):
                best_dep, best_obj = dep, obj
    if best_dep is None:
        raise ValueError("no feasible deployment on the grid")
    return best_dep, best_obj
