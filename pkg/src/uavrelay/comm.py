"""Per-link physics: distances, free-space channel gains, Shannon rates,
transmission times, and rotary-wing propulsion power.

Everything is plain SI (meters, Hz, watts, bits, seconds); dBm appears only
at the config boundary. All functions accept numpy arrays transparently and
broadcast, so callers can evaluate whole deployments in one shot.
"""

from __future__ import annotations

import numpy as np

from .scenario import PropulsionParams, ScenarioConfig


def distance(ue, hp, h: float):
    """Slant distance between a ground terminal and a hover point.

    Parameters
    ----------
    ue, hp:
        (..., 2) ground coordinates in meters.
    h:
        Flight altitude in meters (must be positive).
    """
    ue = np.asarray(ue, dtype=float)
    hp = np.asarray(hp, dtype=float)
    dx = ue[..., 0] - hp[..., 0]
    dy = ue[..., 1] - hp[..., 1]
    return np.sqrt(dx * dx + dy * dy + h * h)


def gain_bs_uav(hp, cfg: ScenarioConfig):
    """Free-space channel power gain of the BS -> UAV link at a hover point."""
    hp = np.asarray(hp, dtype=float)
    x = hp[..., 0]
    y = hp[..., 1]
    return cfg.beta0 / (x * x + y * y + cfg.H * cfg.H)


def gain_uav_ue(ue, hp, cfg: ScenarioConfig):
    """Free-space channel power gain of the UAV -> terminal link."""
    ue = np.asarray(ue, dtype=float)
    hp = np.asarray(hp, dtype=float)
    dx = ue[..., 0] - hp[..., 0]
    dy = ue[..., 1] - hp[..., 1]
    return cfg.beta0 / (dx * dx + dy * dy + cfg.H * cfg.H)


def data_rate(p_tx, gain, cfg: ScenarioConfig):
    """Achievable rate in bit/s for transmit power p_tx over a gain."""
    return cfg.B * np.log2(1.0 + p_tx * gain / cfg.sigma2)


def transmission_time(bits, rate):
    """Seconds needed to push `bits` through a positive `rate`."""
    if np.any(np.asarray(rate) <= 0):
        raise ValueError("rate must be positive")
    return bits / rate


def propulsion_power(v, pp: PropulsionParams):
    """Propulsion power of level flight at speed v (v=0 gives hover power).

    Blade-profile term grows quadratically with speed, the induced term
    decays, and the parasite (fuselage drag) term grows cubically and
    dominates at high speed.
    """
    v = np.asarray(v, dtype=float)
    v2 = v * v
    blade = pp.p_blade * (1.0 + 3.0 * v2 / (pp.v_tip * pp.v_tip))
    v0_2 = pp.v_hover * pp.v_hover
    induced = pp.p_induced * np.sqrt(
        np.sqrt(1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)) - v2 / (2.0 * v0_2))
    parasite = 0.5 * pp.drag_ratio * pp.rho * pp.solidity * pp.disc_area * v2 * v
    return blade + induced + parasite


def hover_power(pp: PropulsionParams) -> float:
    """Hover power: propulsion power at zero speed (blade + induced)."""
    return float(propulsion_power(0.0, pp))
