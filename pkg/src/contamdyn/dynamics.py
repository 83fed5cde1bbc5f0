"""Deterministic (mean-field) evolution of a knowledge state.

Two parameterizations of the same flow:

* growth domain -- the parasitic count as a function of the total count,
  ``dc_p/dc = (p_p - r_cleanup) / (1 - r_cleanup)``, valid while the
  cleanup rate stays below 1 so the space keeps growing;
* time domain -- the coupled pair ``dc/dt = 1 - r_cleanup`` and
  ``dc_p/dt = p_p - r_cleanup``, valid even when cleanup outpaces creation
  and the space shrinks.

Both use a fixed-step classical 4th-order Runge-Kutta scheme: the right
hand sides are smooth and cheap, and a fixed step keeps runs reproducible
across platforms for the same configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateState,
    SingularDenominator,
    StepBudgetExceeded,
    ValidationError,
)
from .model import (
    EPS_SINGULAR,
    KnowledgeState,
    ModelParams,
    cleanup_rate,
    contamination_derivative,
    parasitic_formation_probability,
)

#: Cap on stored samples per trajectory; longer runs are decimated.
MAX_STORED_SAMPLES = 10_000

_CLAMP_POLICIES = ("clamp", "error")


@dataclass(frozen=True)
class StepControl:
    """Step size, step budget, and clamp policy for the growth-domain
    integrator.  ``clamp_policy`` governs parasitic-count excursions outside
    [0, c]: "clamp" pulls them back and counts the event, "error" aborts."""

    dc: float = 0.25
    max_steps: int = 10_000_000
    clamp_policy: str = "clamp"

    def __post_init__(self):
        if self.dc <= 0:
            raise ValidationError(f"dc={self.dc!r} must be > 0")
        if self.max_steps < 1:
            raise ValidationError(f"max_steps={self.max_steps!r} must be >= 1")
        if self.clamp_policy not in _CLAMP_POLICIES:
            raise ValidationError(
                f"clamp_policy={self.clamp_policy!r} not in {_CLAMP_POLICIES}")


@dataclass
class Trajectory:
    """Ordered samples of an evolving state.  ``t`` is populated by the
    time-domain integrator and the stochastic simulator (step counts) and
    is None for growth-domain runs.  ``clamp_count`` audits how often the
    parasitic count had to be pulled back into [0, c]."""

    c: np.ndarray
    c_p: np.ndarray
    k: np.ndarray
    t: np.ndarray | None = None
    clamp_count: int = 0
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.c)

    @property
    def final_state(self) -> KnowledgeState:
        return KnowledgeState(float(self.c[-1]), float(self.c_p[-1]))

    @property
    def final_k(self) -> float:
        return float(self.k[-1])


class _Recorder:
    """Accumulates decimated samples; always keeps the first and last."""

    def __init__(self, with_t: bool):
        self.c: list[float] = []
        self.c_p: list[float] = []
        self.k: list[float] = []
        self.t: list[float] | None = [] if with_t else None

    def add(self, c: float, c_p: float, t: float | None = None) -> None:
        self.c.append(c)
        self.c_p.append(c_p)
        self.k.append(c_p / c)
        if self.t is not None:
            self.t.append(t)

    def trajectory(self, clamp_count: int, meta: dict) -> Trajectory:
        return Trajectory(
            c=np.asarray(self.c),
            c_p=np.asarray(self.c_p),
            k=np.asarray(self.k),
            t=None if self.t is None else np.asarray(self.t),
            clamp_count=clamp_count,
            meta=meta,
        )


def _clip_k(c: float, c_p: float) -> float:
    # RK4 substages may nudge c_p a hair outside [0, c]; the pointwise laws
    # reject k outside [0, 1], so clip before evaluating them.
    k = c_p / c
    if k < 0.0:
        return 0.0
    if k > 1.0:
        return 1.0
    return k


def discrete_step(params: ModelParams, state: KnowledgeState,
                  clamp_policy: str = "clamp") -> KnowledgeState:
    """One unit step of the discrete growth/cleanup process: one concept is
    created (parasitic with probability p_p) and r_cleanup parasitic
    concepts are removed, both evaluated at the input state."""
    if clamp_policy not in _CLAMP_POLICIES:
        raise ValidationError(f"clamp_policy={clamp_policy!r} not in {_CLAMP_POLICIES}")
    k = state.k
    r = cleanup_rate(params, k)
    p = parasitic_formation_probability(params, k)
    c_next = state.c + 1.0 - r
    cp_next = state.c_p + p - r
    if c_next <= 0:
        raise DegenerateState(
            f"concept count {c_next!r} fell to zero (cleanup rate {r!r})")
    if cp_next < 0.0 or cp_next > c_next:
        if clamp_policy == "error":
            raise DegenerateState(
                f"parasitic count {cp_next!r} left [0, {c_next!r}]")
        cp_next = min(max(cp_next, 0.0), c_next)
    return KnowledgeState(c_next, cp_next)


def integrate_in_c(params: ModelParams, initial: KnowledgeState, c_end: float,
                   ctl: StepControl | None = None) -> Trajectory:
    """Integrate ``dc_p/dc`` from ``initial.c`` to ``c_end`` with fixed-step
    RK4.  Requires the cleanup rate to stay below 1 along the path; raises
    :class:`SingularDenominator` (with the c where it happened) otherwise,
    in which case ``integrate_in_time`` is the appropriate tool."""
    ctl = ctl or StepControl()
    if c_end <= initial.c:
        raise ValidationError(f"c_end={c_end!r} must exceed initial c={initial.c!r}")

    def rhs(c: float, c_p: float) -> float:
        k = _clip_k(c, c_p)
        r = cleanup_rate(params, k)
        if r >= 1.0 - EPS_SINGULAR:
            raise SingularDenominator(
                f"cleanup rate {r!r} reached 1 at c={c!r}; "
                "integrate_in_time handles this regime", k=k, c=c)
        return contamination_derivative(params, k)

    span = c_end - initial.c
    n_full = int(span // ctl.dc)
    rem = span - n_full * ctl.dc
    if rem <= span * 1e-15:
        rem = 0.0
    n_steps = n_full + (1 if rem > 0.0 else 0)
    if n_steps > ctl.max_steps:
        raise StepBudgetExceeded(
            f"{n_steps} steps needed for dc={ctl.dc!r}, cap is {ctl.max_steps}")
    stride = max(1, math.ceil((n_steps + 1) / MAX_STORED_SAMPLES))

    rec = _Recorder(with_t=False)
    c0 = initial.c
    cp = initial.c_p
    clamps = 0
    rec.add(c0, cp)
    for i in range(n_steps):
        ca = c0 + i * ctl.dc
        cb = c0 + (i + 1) * ctl.dc if i < n_full else c_end
        h = cb - ca
        k1 = rhs(ca, cp)
        k2 = rhs(ca + 0.5 * h, cp + 0.5 * h * k1)
        k3 = rhs(ca + 0.5 * h, cp + 0.5 * h * k2)
        k4 = rhs(cb, cp + h * k3)
        cp = cp + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if cp < 0.0 or cp > cb:
            if ctl.clamp_policy == "error":
                raise DegenerateState(f"parasitic count {cp!r} left [0, {cb!r}]")
            cp = min(max(cp, 0.0), cb)
            clamps += 1
        if (i + 1) == n_steps or (i + 1) % stride == 0:
            rec.add(cb, cp)
    return rec.trajectory(clamps, {"domain": "c", "dc": ctl.dc,
                                   "steps": n_steps, "stride": stride})


def integrate_in_time(params: ModelParams, initial: KnowledgeState,
                      t_end: float, dt: float = 1.0,
                      clamp_policy: str = "clamp") -> Trajectory:
    """Integrate the coupled pair (c, c_p) over time with fixed-step RK4.
    Valid even when the cleanup rate exceeds 1 (c shrinks); raises
    :class:`DegenerateState` if c falls to 1."""
    if t_end <= 0:
        raise ValidationError(f"t_end={t_end!r} must be > 0")
    if dt <= 0:
        raise ValidationError(f"dt={dt!r} must be > 0")
    if clamp_policy not in _CLAMP_POLICIES:
        raise ValidationError(f"clamp_policy={clamp_policy!r} not in {_CLAMP_POLICIES}")

    def rhs(c: float, c_p: float) -> tuple[float, float]:
        k = _clip_k(c, c_p)
        r = cleanup_rate(params, k)
        p = parasitic_formation_probability(params, k)
        return 1.0 - r, p - r

    n_full = int(t_end // dt)
    rem = t_end - n_full * dt
    if rem <= t_end * 1e-15:
        rem = 0.0
    n_steps = n_full + (1 if rem > 0.0 else 0)
    stride = max(1, math.ceil((n_steps + 1) / MAX_STORED_SAMPLES))

    rec = _Recorder(with_t=True)
    c = initial.c
    cp = initial.c_p
    clamps = 0
    rec.add(c, cp, 0.0)
    for i in range(n_steps):
        ta = i * dt
        tb = (i + 1) * dt if i < n_full else t_end
        h = tb - ta
        dc1, dp1 = rhs(c, cp)
        dc2, dp2 = rhs(c + 0.5 * h * dc1, cp + 0.5 * h * dp1)
        dc3, dp3 = rhs(c + 0.5 * h * dc2, cp + 0.5 * h * dp2)
        dc4, dp4 = rhs(c + h * dc3, cp + h * dp3)
        c = c + (h / 6.0) * (dc1 + 2.0 * dc2 + 2.0 * dc3 + dc4)
        cp = cp + (h / 6.0) * (dp1 + 2.0 * dp2 + 2.0 * dp3 + dp4)
        if c <= 1.0:
            raise DegenerateState(
                f"concept count fell to {c!r} at t={tb!r}; cleanup parameters "
                "outrun creation for this start state")
        if cp < 0.0 or cp > c:
            if clamp_policy == "error":
                raise DegenerateState(f"parasitic count {cp!r} left [0, {c!r}]")
            cp = min(max(cp, 0.0), c)
            clamps += 1
        if (i + 1) == n_steps or (i + 1) % stride == 0:
            rec.add(c, cp, tb)
    return rec.trajectory(clamps, {"domain": "time", "dt": dt,
                                   "steps": n_steps, "stride": stride})
