"""Energy-aware UAV relay deployment: joint optimization of the number and
2-D locations of hover points with a variable-population differential
evolution, plus baseline solvers and a reproducible benchmark harness."""

from .baselines import mid_m, run_devips, run_fixed_m_de
from .deployment import (Association, Deployment, EnergyBreakdown, Verdict,
                         associate, check_feasible, evaluate)
from .sadevps import AdaptiveState, EvalBudget, RunRecord, run
from .scenario import (Instance, PropulsionParams, ScenarioConfig,
                       build_config, generate_instance, load_instance,
                       save_instance)

__all__ = [
    "AdaptiveState", "Association", "Deployment", "EnergyBreakdown",
    "EvalBudget", "Instance", "PropulsionParams", "RunRecord",
    "ScenarioConfig", "Verdict", "associate", "build_config",
    "check_feasible", "evaluate", "generate_instance", "load_instance",
    "mid_m", "run", "run_devips", "run_fixed_m_de", "save_instance",
]

__version__ = "0.1.0"
