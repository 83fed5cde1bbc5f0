"""Scenario files and presets.

A scenario is the full input of a run: model parameters, start state, run
lengths, and reproducibility seed.  The on-disk format is line-oriented
``key = value`` with ``#`` comments; every model input is a scalar, so
nothing fancier is warranted.  Unknown keys are errors.  ``p_err``,
``b_min`` and ``b_max`` are required, everything else has a documented
default.  Presets A-E are the five reference configurations used
throughout the test suite and demos.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass
from typing import Mapping

from .errors import ScenarioSyntaxError, ValidationError
from .model import KnowledgeState, ModelParams
from .montecarlo import McConfig

SCENARIO_KEYS = (
    "p_err", "b_min", "b_max", "r_prag", "r_comp", "c0", "cp0",
    "c_end", "steps", "epochs", "seed", "checkpoint_every",
)

REQUIRED_KEYS = ("p_err", "b_min", "b_max")

_INT_KEYS = frozenset(
    {"b_min", "b_max", "c0", "cp0", "steps", "epochs", "seed", "checkpoint_every"})

#: Defaults for the optional keys; c_end defaults to 10 * c0 after merging.
DEFAULTS = {
    "r_prag": 0.0,
    "r_comp": 0.0,
    "c0": 1000,
    "cp0": 0,
    "steps": 9000,
    "epochs": 20,
    "seed": 42,
    "checkpoint_every": 100,
}

#: Reference configurations: one cleanup-free runaway (A) and four runs
#: with both cleanup channels at strength 2 but different base-count
#: spreads (B-E share the start state and differ only in b_min/b_max).
PRESETS = {
    "A": {"p_err": 0.05, "b_min": 2, "b_max": 20, "r_prag": 0.0, "r_comp": 0.0,
          "c0": 1000, "cp0": 10},
    "B": {"p_err": 0.1, "b_min": 7, "b_max": 7, "r_prag": 2.0, "r_comp": 2.0,
          "c0": 1000, "cp0": 200},
    "C": {"p_err": 0.1, "b_min": 2, "b_max": 12, "r_prag": 2.0, "r_comp": 2.0,
          "c0": 1000, "cp0": 200},
    "D": {"p_err": 0.1, "b_min": 5, "b_max": 5, "r_prag": 2.0, "r_comp": 2.0,
          "c0": 1000, "cp0": 200},
    "E": {"p_err": 0.1, "b_min": 2, "b_max": 8, "r_prag": 2.0, "r_comp": 2.0,
          "c0": 1000, "cp0": 200},
}

_LINE_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)\s*$")
_MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class Scenario:
    """Resolved run input.  ``c_end`` bounds growth-domain integration,
    ``steps``/``epochs``/``seed``/``checkpoint_every`` drive simulation."""

    p_err: float
    b_min: int
    b_max: int
    r_prag: float
    r_comp: float
    c0: int
    cp0: int
    c_end: float
    steps: int
    epochs: int
    seed: int
    checkpoint_every: int

    def __post_init__(self):
        for key in SCENARIO_KEYS:
            _validate_value(key, getattr(self, key))
        if self.b_min > self.b_max:
            raise ValidationError(
                f"b_min={self.b_min!r} exceeds b_max={self.b_max!r}")
        if self.cp0 > self.c0:
            raise ValidationError(f"cp0={self.cp0!r} exceeds c0={self.c0!r}")
        if self.c_end <= self.c0:
            raise ValidationError(
                f"c_end={self.c_end!r} must exceed c0={self.c0!r}")

    @property
    def b_mean(self) -> float:
        return 0.5 * (self.b_min + self.b_max)

    def model_params(self) -> ModelParams:
        """Mean-field parameters (mean base count)."""
        return ModelParams(p_err=self.p_err, b=self.b_mean,
                           r_prag=self.r_prag, r_comp=self.r_comp)

    def initial_state(self) -> KnowledgeState:
        return KnowledgeState(float(self.c0), float(self.cp0))

    def mc_config(self) -> McConfig:
        return McConfig(c0=self.c0, cp0=self.cp0, b_min=self.b_min,
                        b_max=self.b_max, p_err=self.p_err,
                        r_prag=self.r_prag, r_comp=self.r_comp,
                        steps=self.steps, seed=self.seed, epochs=self.epochs,
                        checkpoint_every=self.checkpoint_every)

    def as_dict(self) -> dict:
        return asdict(self)


def _validate_value(key: str, value) -> None:
    if key == "p_err" and not 0.0 <= value <= 1.0:
        raise ValidationError(f"p_err={value!r} outside [0, 1]")
    if key in ("b_min", "b_max") and value < 1:
        raise ValidationError(f"{key}={value!r} must be >= 1")
    if key in ("r_prag", "r_comp") and value < 0:
        raise ValidationError(f"{key}={value!r} must be >= 0")
    if key == "c0" and value < 1:
        raise ValidationError(f"c0={value!r} must be >= 1")
    if key == "cp0" and value < 0:
        raise ValidationError(f"cp0={value!r} must be >= 0")
    if key == "c_end" and value <= 0:
        raise ValidationError(f"c_end={value!r} must be > 0")
    if key in ("steps", "epochs", "checkpoint_every") and value < 1:
        raise ValidationError(f"{key}={value!r} must be >= 1")
    if key == "seed" and not 0 <= value <= _MAX_SEED:
        raise ValidationError(f"seed={value!r} outside unsigned 64-bit range")


def parse_pairs(text: str) -> dict:
    """Parse scenario text into a typed key->value mapping.  Raises
    :class:`ScenarioSyntaxError` (with line number) for malformed lines,
    unknown or duplicate keys, and unparseable values;
    :class:`ValidationError` for out-of-range values."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        match = _LINE_RE.match(line)
        if match is None:
            raise ScenarioSyntaxError(f"expected 'key = value', got {raw!r}", lineno)
        key, token = match.group(1), match.group(2)
        if key not in SCENARIO_KEYS:
            raise ScenarioSyntaxError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ScenarioSyntaxError(f"duplicate key {key!r}", lineno)
        try:
            value = int(token) if key in _INT_KEYS else float(token)
        except ValueError:
            kind = "an integer" if key in _INT_KEYS else "a number"
            raise ScenarioSyntaxError(
                f"value {token!r} for {key!r} is not {kind}", lineno) from None
        _validate_value(key, value)
        values[key] = value
    return values


def build_scenario(values: Mapping) -> Scenario:
    """Fill defaults and construct a validated Scenario from a mapping of
    scenario keys (e.g. from :func:`parse_pairs`, a preset, or CLI flags)."""
    for key, value in values.items():
        if key not in SCENARIO_KEYS:
            raise ValidationError(f"unknown key {key!r}")
        _validate_value(key, value)
    for key in REQUIRED_KEYS:
        if key not in values:
            raise ValidationError(f"{key} is required")
    merged = {**DEFAULTS, **values}
    merged.setdefault("c_end", 10.0 * merged["c0"])
    return Scenario(**merged)


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text (see module docstring for the format)."""
    return build_scenario(parse_pairs(text))


def serialize_scenario(scenario: Scenario) -> str:
    """Canonical text form; round-trips exactly through parse_scenario."""
    lines = [f"{key} = {getattr(scenario, key)!r}" for key in SCENARIO_KEYS]
    return "\n".join(lines) + "\n"
