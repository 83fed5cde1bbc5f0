"""Contamination dynamics of a growing knowledge space.

Closed-form probability/rate laws, mean-field trajectory integration,
fixed-point and hysteresis analysis of the growth/cleanup balance, and a
seeded Monte Carlo simulator that validates the mean-field model.
"""

from .errors import (
    ContamdynError,
    DegenerateState,
    ScenarioSyntaxError,
    SingularDenominator,
    StepBudgetExceeded,
    ValidationError,
)
from .model import (
    EPS_SINGULAR,
    KnowledgeState,
    ModelParams,
    PointwiseRates,
    cleanup_rate,
    competing_rate,
    contamination_derivative,
    evaluate_rates,
    parasitic_formation_probability,
    parasitic_inclusion_probability,
    pragmatic_rate,
    stability_polynomial,
)
from .dynamics import (
    StepControl,
    Trajectory,
    discrete_step,
    integrate_in_c,
    integrate_in_time,
)
from .stability import (
    DEFAULT_SCAN_STEP,
    DEFAULT_TOL,
    DESCENT_START,
    FixedPointResult,
    HysteresisResult,
    SweepGrid,
    ascending_fixed_point,
    asymptote_from,
    classify,
    descending_fixed_point,
    hysteresis,
    sweep_plateau,
)
from .montecarlo import (
    McConfig,
    McEnvelope,
    draw_base_count,
    epoch_seed,
    pinned_state_frequencies,
    run_ensemble,
    run_epoch,
    splitmix64,
)
from .scenario import (
    DEFAULTS,
    PRESETS,
    REQUIRED_KEYS,
    SCENARIO_KEYS,
    Scenario,
    build_scenario,
    parse_pairs,
    parse_scenario,
    serialize_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "ContamdynError", "DegenerateState", "ScenarioSyntaxError",
    "SingularDenominator", "StepBudgetExceeded", "ValidationError",
    "EPS_SINGULAR", "KnowledgeState", "ModelParams", "PointwiseRates",
    "cleanup_rate", "competing_rate", "contamination_derivative",
    "evaluate_rates", "parasitic_formation_probability",
    "parasitic_inclusion_probability", "pragmatic_rate",
    "stability_polynomial",
    "StepControl", "Trajectory", "discrete_step", "integrate_in_c",
    "integrate_in_time",
    "DEFAULT_SCAN_STEP", "DEFAULT_TOL", "DESCENT_START", "FixedPointResult",
    "HysteresisResult", "SweepGrid", "ascending_fixed_point",
    "asymptote_from", "classify", "descending_fixed_point", "hysteresis",
    "sweep_plateau",
    "McConfig", "McEnvelope", "draw_base_count", "epoch_seed",
    "pinned_state_frequencies", "run_ensemble", "run_epoch", "splitmix64",
    "DEFAULTS", "PRESETS", "REQUIRED_KEYS", "SCENARIO_KEYS", "Scenario",
    "build_scenario", "parse_pairs", "parse_scenario", "serialize_scenario",
    "__version__",
]
