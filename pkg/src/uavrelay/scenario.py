"""Scenario configuration and random problem instances.

A scenario couples the radio constants (bandwidth, carrier, noise floor,
transmit powers) with the geometry of the service area: a base station at
the origin and K user terminals scattered over a square annulus. Instances
are generated from a seeded RNG so every experiment is reproducible.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, fields

import numpy as np

MB_IN_BITS = 8e6

_REJECTION_CAP = 10**6


class GenerationError(RuntimeError):
    """Raised when rejection sampling fails to place a terminal."""


@dataclass(frozen=True)
class PropulsionParams:
    """Rotary-wing power constants (hover regime and forward flight)."""

    p_blade: float = 79.8563   # blade profile power, W
    p_induced: float = 88.6279  # induced power, W
    v_tip: float = 120.0       # rotor tip speed, m/s
    v_hover: float = 4.03      # mean rotor-induced velocity in hover, m/s
    drag_ratio: float = 0.6    # fuselage drag ratio
    rho: float = 1.225         # air density, kg/m^3
    solidity: float = 0.05     # rotor solidity
    disc_area: float = 0.503   # rotor disc area, m^2

    def validate(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"propulsion.{f.name} must be strictly positive")


@dataclass(frozen=True)
class ScenarioConfig:
    """All physical and algorithmic constants, plus derived quantities.

    Build instances through :func:`build_config`, which fills in the derived
    fields (beta0, sigma2, hover power, M bounds, search box) and validates
    every invariant.
    """

    K: int                    # number of user terminals
    N: int                    # max terminals served per hover point
    H: float                  # flight altitude, m
    r_u: float                # circular trajectory radius, m (informational)
    rc_outer: float           # outer edge length of the UE square annulus, m
    rb_inner: float           # inner edge length, m
    B: float                  # bandwidth, Hz
    f_c: float                # carrier frequency, Hz
    c_light: float            # speed of light, m/s
    n0_dbm_per_hz: float      # noise power spectral density, dBm/Hz
    p_bs_uav: float           # BS transmit power, W
    p_uav_ue: float           # UAV transmit power per terminal, W
    d_min_bits: float         # demand lower bound, bits
    d_max_bits: float         # demand upper bound, bits
    phi: float                # transmit-energy weight in the objective
    max_fe: int               # fitness-evaluation budget
    propulsion: PropulsionParams
    # derived
    beta0: float = field(default=0.0)
    sigma2: float = field(default=0.0)
    p_hover: float = field(default=0.0)
    m_min: int = field(default=0)
    m_max: int = field(default=0)
    search_lo: float = field(default=0.0)
    search_hi: float = field(default=0.0)


_DEFAULTS = {
    "K": 100,
    "N": 20,
    "H": 100.0,
    "r_u": 450.0,
    "rc_outer": 1500.0,
    "rb_inner": 750.0,
    "B": 1e6,
    "f_c": 2e9,
    "c_light": 2.998e8,
    "n0_dbm_per_hz": -174.0,
    "p_bs_uav": 1.0,
    "p_uav_ue": 0.1,
    "d_min_bits": 1.0 * MB_IN_BITS,
    "d_max_bits": 1e3 * MB_IN_BITS,
    "phi": 1000.0,
    "max_fe": 100_000,
}

_INT_KEYS = {"K", "N", "max_fe"}
_PROPULSION_PREFIX = "propulsion."


def build_config(raw: dict | None = None, **overrides) -> ScenarioConfig:
    """Build a validated ScenarioConfig from a parameter map.

    `raw` (and keyword overrides) may supply any non-derived field; missing
    fields take the documented defaults. Propulsion constants are accepted
    either as a PropulsionParams under "propulsion" or flattened as
    "propulsion.<name>" keys. Raises ValueError naming the violated
    invariant or the unknown key.
    """
    params = dict(_DEFAULTS)
    prop_kwargs = {}
    prop_obj = None
    merged = dict(raw or {})
    merged.update(overrides)
    for key, value in merged.items():
        if key == "propulsion":
            prop_obj = value
        elif key.startswith(_PROPULSION_PREFIX):
            name = key[len(_PROPULSION_PREFIX):]
            if name not in {f.name for f in fields(PropulsionParams)}:
                raise ValueError(f"unknown config key '{key}'")
            prop_kwargs[name] = float(value)
        elif key in params:
            params[key] = int(value) if key in _INT_KEYS else float(value)
        else:
            raise ValueError(f"unknown config key '{key}'")
    if prop_obj is not None and prop_kwargs:
        raise ValueError("pass either 'propulsion' or 'propulsion.*' keys, not both")
    propulsion = prop_obj if prop_obj is not None else PropulsionParams(**prop_kwargs)
    propulsion.validate()

    _require(params["K"] >= 0, "K must be >= 0")
    _require(params["N"] >= 1, "N must be >= 1")
    _require(params["H"] > 0, "H must be > 0")
    _require(params["B"] > 0, "B must be > 0")
    _require(params["f_c"] > 0, "f_c must be > 0")
    _require(params["c_light"] > 0, "c_light must be > 0")
    _require(0 < params["rb_inner"], "rb_inner must be > 0")
    _require(params["rb_inner"] < params["rc_outer"],
             "rb_inner must be < rc_outer")
    _require(params["d_min_bits"] >= 1, "d_min_bits must be >= 1 bit")
    _require(params["d_max_bits"] >= params["d_min_bits"],
             "d_max_bits must be >= d_min_bits")
    _require(params["phi"] >= 0, "phi must be >= 0")
    _require(params["max_fe"] >= 1, "max_fe must be >= 1")

    beta0 = (4.0 * math.pi * params["f_c"] / params["c_light"]) ** -2
    sigma2 = 10.0 ** ((params["n0_dbm_per_hz"] - 30.0) / 10.0) * params["B"]
    p_hover = propulsion.p_blade + propulsion.p_induced
    m_min = -(-params["K"] // params["N"])  # ceiling division
    m_max = params["K"]
    half = params["rc_outer"] / 2.0
    if params["K"] > 0:
        _require(1 <= m_min <= m_max, "hover-point bounds require 1 <= m_min <= m_max")
    return ScenarioConfig(
        propulsion=propulsion,
        beta0=beta0,
        sigma2=sigma2,
        p_hover=p_hover,
        m_min=m_min,
        m_max=m_max,
        search_lo=-half,
        search_hi=half,
        **params,
    )


def _require(cond, message):
    if not cond:
        raise ValueError(message)


def config_to_text(cfg: ScenarioConfig) -> str:
    """Serialize the non-derived fields as flat key=value lines."""
    lines = [f"{key}={getattr(cfg, key)!r}" for key in sorted(_DEFAULTS)]
    for f in fields(PropulsionParams):
        lines.append(f"propulsion.{f.name}={getattr(cfg.propulsion, f.name)!r}")
    return "\n".join(lines) + "\n"


def config_from_text(text: str) -> ScenarioConfig:
    """Parse a flat key=value config document. Unknown keys are rejected."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"config line {lineno}: expected key=value, got {line!r}")
        key, value = stripped.split("=", 1)
        key = key.strip()
        if key in raw:
            raise ValueError(f"config line {lineno}: duplicate key '{key}'")
        try:
            raw[key] = float(value)
        except ValueError as exc:
            raise ValueError(f"config line {lineno}: bad number for '{key}'") from exc
    return build_config(raw)


def config_hash(cfg: ScenarioConfig) -> str:
    """Stable hash of the non-derived configuration fields."""
    return hashlib.sha256(config_to_text(cfg).encode()).hexdigest()[:16]


@dataclass(eq=False)
class Instance:
    """One concrete scenario: BS at the origin, K terminals, per-UE demands."""

    seed: int
    config_digest: str
    ues: np.ndarray           # (K, 2) ground coordinates, m
    demands_bits: np.ndarray  # (K,) data volumes, bits

    @property
    def bs(self):
        return (0.0, 0.0, 0.0)

    @property
    def k(self) -> int:
        return len(self.ues)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.seed == other.seed
                and self.config_digest == other.config_digest
                and np.array_equal(self.ues, other.ues)
                and np.array_equal(self.demands_bits, other.demands_bits))


def generate_instance(cfg: ScenarioConfig, seed: int) -> Instance:
    """Generate K terminals uniform over the square annulus plus demands.

    Positions come from rejection sampling out of the outer square, so the
    distribution is exactly uniform over the annulus. Identical (cfg, seed)
    pairs produce bit-identical instances.
    """
    rng = np.random.default_rng(seed)
    half_outer = cfg.rc_outer / 2.0
    half_inner = cfg.rb_inner / 2.0
    points = np.empty((cfg.K, 2))
    for k in range(cfg.K):
        for _ in range(_REJECTION_CAP):
            xy = rng.uniform(-half_outer, half_outer, size=2)
            if max(abs(xy[0]), abs(xy[1])) > half_inner:
                points[k] = xy
                break
        else:
            raise GenerationError(
                f"terminal {k}: {_REJECTION_CAP} rejected draws; "
                "annulus is too thin relative to the outer square")
    demands = rng.uniform(cfg.d_min_bits, cfg.d_max_bits, size=cfg.K)
    return Instance(seed=seed, config_digest=config_hash(cfg),
                    ues=points, demands_bits=demands)


_INSTANCE_KEYS = {"seed", "config_hash", "ues", "demands_bits"}


def instance_to_json(inst: Instance) -> str:
    doc = {
        "seed": inst.seed,
        "config_hash": inst.config_digest,
        "ues": [[float(x), float(y)] for x, y in inst.ues],
        "demands_bits": [float(d) for d in inst.demands_bits],
    }
    return json.dumps(doc, indent=2) + "\n"


def instance_from_json(text: str, cfg: ScenarioConfig | None = None) -> Instance:
    """Parse an instance document; validates invariants when cfg is given."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"instance document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("instance document: top level must be an object")
    missing = _INSTANCE_KEYS - doc.keys()
    if missing:
        raise ValueError(f"instance document missing key '{sorted(missing)[0]}'")
    unknown = doc.keys() - _INSTANCE_KEYS
    if unknown:
        raise ValueError(f"instance document has unknown key '{sorted(unknown)[0]}'")
    ues = np.asarray(doc["ues"], dtype=float)
    demands = np.asarray(doc["demands_bits"], dtype=float)
    if ues.size == 0:
        ues = ues.reshape(0, 2)
    if ues.ndim != 2 or ues.shape[1] != 2:
        raise ValueError("instance field 'ues' must be an array of [x, y] pairs")
    if len(demands) != len(ues):
        raise ValueError("instance fields 'ues' and 'demands_bits' differ in length")
    inst = Instance(seed=int(doc["seed"]), config_digest=str(doc["config_hash"]),
                    ues=ues, demands_bits=demands)
    if cfg is not None:
        validate_instance(inst, cfg)
    return inst


def validate_instance(inst: Instance, cfg: ScenarioConfig):
    """Check instance invariants against a configuration."""
    if inst.k != cfg.K:
        raise ValueError(f"instance has {inst.k} terminals, config says K={cfg.K}")
    if inst.config_digest != config_hash(cfg):
        raise ValueError("instance config_hash does not match the supplied config")
    if inst.k:
        chebyshev = np.max(np.abs(inst.ues), axis=1)
        if np.any(chebyshev <= cfg.rb_inner / 2.0) or np.any(chebyshev > cfg.rc_outer / 2.0):
            raise ValueError("instance terminal outside the square annulus")
        if np.any(inst.demands_bits < cfg.d_min_bits) or np.any(inst.demands_bits > cfg.d_max_bits):
            raise ValueError("instance demand outside [d_min_bits, d_max_bits]")


def save_instance(inst: Instance, path):
    with open(path, "w") as fh:
        fh.write(instance_to_json(inst))


def load_instance(path, cfg: ScenarioConfig | None = None) -> Instance:
    with open(path) as fh:
        return instance_from_json(fh.read(), cfg)
