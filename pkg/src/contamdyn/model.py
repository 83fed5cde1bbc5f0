"""Closed-form laws of the knowledge-space contamination model.

A knowledge space holds ``c`` concepts, ``c_p`` of which are parasitic
(low prediction quality); the contamination level is ``k = c_p / c``.
Each new concept is derived from ``b`` uniformly drawn base concepts and
becomes parasitic either through a creation error (probability ``p_err``)
or by inheriting at least one parasitic base.  Two cleanup channels remove
parasitic concepts: experience-driven sampling with strength ``r_prag``
and contradiction-driven competition with strength ``r_comp``.

Everything in this module is a pure scalar function of a parameter set and
a state.  Trajectory integration lives in :mod:`contamdyn.dynamics`,
fixed-point analysis in :mod:`contamdyn.stability`, and the stochastic
simulator in :mod:`contamdyn.montecarlo`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SingularDenominator, ValidationError

#: Guard half-width around a unit cleanup rate, below which the
#: growth-domain derivative is treated as singular.
EPS_SINGULAR = 1e-9

# exponent threshold above which (1 - k)**b is evaluated in the log domain
_LOG_POW_MIN_B = 64


def _check_contamination(k: float) -> None:
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"contamination k={k!r} outside [0, 1]")


def _survival(k: float, b: float) -> float:
    """(1 - k)**b, evaluated in the log domain for large exponents."""
    if k >= 1.0:
        return 0.0
    if b > _LOG_POW_MIN_B:
        return math.exp(b * math.log1p(-k))
    return (1.0 - k) ** b


@dataclass(frozen=True)
class ModelParams:
    """Constant parameter set driving every law.

    ``b`` is the number of base concepts per new concept.  It is an integer
    in the underlying process, but fractional values are accepted so the
    mean of a randomized base count can be plugged into the same laws when
    comparing against ensemble simulations.
    """

    p_err: float
    b: float
    r_prag: float
    r_comp: float

    def __post_init__(self):
        if not 0.0 <= self.p_err <= 1.0:
            raise ValidationError(f"p_err={self.p_err!r} outside [0, 1]")
        if self.b < 1:
            raise ValidationError(f"b={self.b!r} must be >= 1")
        if self.r_prag < 0:
            raise ValidationError(f"r_prag={self.r_prag!r} must be >= 0")
        if self.r_comp < 0:
            raise ValidationError(f"r_comp={self.r_comp!r} must be >= 0")


@dataclass(frozen=True)
class KnowledgeState:
    """Concept counts (c, c_p) with derived contamination ``k = c_p / c``."""

    c: float
    c_p: float

    def __post_init__(self):
        if self.c <= 0:
            raise ValidationError(f"c={self.c!r} must be > 0")
        if not 0.0 <= self.c_p <= self.c:
            raise ValidationError(f"c_p={self.c_p!r} outside [0, c={self.c!r}]")

    @property
    def k(self) -> float:
        return self.c_p / self.c


@dataclass(frozen=True)
class PointwiseRates:
    """All pointwise laws evaluated at one state."""

    p_ip: float
    p_p: float
    r_prag_rate: float
    r_comp_rate: float
    r_cleanup: float
    f: float

    def __post_init__(self):
        if not 0.0 <= self.p_ip <= 1.0:
            raise ValidationError(f"p_ip={self.p_ip!r} outside [0, 1]")
        if not 0.0 <= self.p_p <= 1.0:
            raise ValidationError(f"p_p={self.p_p!r} outside [0, 1]")
        if self.r_prag_rate < 0 or self.r_comp_rate < 0:
            raise ValidationError("cleanup rates must be >= 0")
        if self.r_cleanup != self.r_prag_rate + self.r_comp_rate:
            raise ValidationError("r_cleanup must equal r_prag_rate + r_comp_rate")


def parasitic_inclusion_probability(k: float, b: float) -> float:
    """Probability that a new concept inherits parasitism from at least one
    of its ``b`` uniformly drawn base concepts: ``1 - (1 - k)**b``."""
    _check_contamination(k)
    if b < 1:
        raise ValueError(f"base-concept count b={b!r} must be >= 1")
    return 1.0 - _survival(k, b)


def parasitic_formation_probability(params: ModelParams, k: float) -> float:
    """Total probability that a new concept is parasitic, combining the
    creation-error channel and base-concept inheritance:
    ``1 - (1 - p_err) * (1 - k)**b``.  Lies in [p_err, 1]."""
    _check_contamination(k)
    return 1.0 - (1.0 - params.p_err) * _survival(k, params.b)


def pragmatic_rate(params: ModelParams, k: float) -> float:
    """Removals per step from experience-driven sampling: ``k * r_prag``."""
    _check_contamination(k)
    return k * params.r_prag


def competing_rate(params: ModelParams, k: float) -> float:
    """Removals per step from contradiction-driven competition:
    ``(k - k**2) * r_comp``.  Vanishes at k=0 (no parasites) and at k=1
    (no accurate concepts left to contradict)."""
    _check_contamination(k)
    return (k - k * k) * params.r_comp


def cleanup_rate(params: ModelParams, k: float) -> float:
    """Combined removals per step of both cleanup channels."""
    return pragmatic_rate(params, k) + competing_rate(params, k)


def contamination_derivative(params: ModelParams, k: float,
                             eps_singular: float = EPS_SINGULAR) -> float:
    """Parasitic concepts added per net new concept, expressed through k:
    ``(p_p - r_cleanup) / (1 - r_cleanup)``.

    Raises :class:`SingularDenominator` when the cleanup rate is within
    ``eps_singular`` of 1; there the space stops growing and the caller
    should switch to time-domain integration.
    """
    _check_contamination(k)
    r = cleanup_rate(params, k)
    if abs(1.0 - r) <= eps_singular:
        raise SingularDenominator(
            f"cleanup rate {r!r} within {eps_singular!r} of 1 at k={k!r}", k=k)
    p = parasitic_formation_probability(params, k)
    return (p - r) / (1.0 - r)


def stability_polynomial(params: ModelParams, k: float) -> float:
    """Growth/cleanup balance at contamination k:

        (1 + r_prag + r_comp)*k - (r_prag + 2*r_comp)*k**2 + r_comp*k**3
            - 1 + (1 - p_err) * (1 - k)**b

    Negative values mean contamination grows as the space grows;
    non-negative values mean it shrinks or holds.  Zeros are the stationary
    contamination levels, with f(0) = -p_err and f(1) = 0 always.
    """
    _check_contamination(k)
    rp, rc = params.r_prag, params.r_comp
    poly = (1.0 + rp + rc) * k - (rp + 2.0 * rc) * k * k + rc * k ** 3
    return poly - 1.0 + (1.0 - params.p_err) * _survival(k, params.b)


def evaluate_rates(params: ModelParams, state: KnowledgeState) -> PointwiseRates:
    """Bundle every pointwise law at one state."""
    k = state.k
    prag = pragmatic_rate(params, k)
    comp = competing_rate(params, k)
    return PointwiseRates(
        p_ip=parasitic_inclusion_probability(k, params.b),
        p_p=parasitic_formation_probability(params, k),
        r_prag_rate=prag,
        r_comp_rate=comp,
        r_cleanup=prag + comp,
        f=stability_polynomial(params, k),
    )
