"""Fixed points of the growth/cleanup balance and plateau-surface sweeps.

The stationary contamination levels are the zeros of
:func:`contamdyn.model.stability_polynomial`.  Because the balance always
has f(0) = -p_err and f(1) = 0, the interesting question is which zero a
given start level flows to.  Two scan procedures answer it:

* ascending -- start clean, walk k upward until the balance first turns
  non-negative, refine by bisection (the level a growing clean space is
  drawn to);
* descending -- start nearly fully contaminated, walk k downward until the
  balance first turns negative, refine by bisection (the level a recovering
  space settles at).  If the balance is already negative at the start the
  space recontaminates completely and the answer is 1.

Bisection is used for refinement rather than a derivative-based method
because the balance can be extremely flat near k=1 for large base counts;
bisection is unconditionally robust there.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError
from .model import ModelParams, stability_polynomial

DEFAULT_SCAN_STEP = 1e-3
DEFAULT_TOL = 1e-9
#: Default start level for descending scans ("nearly fully contaminated").
DESCENT_START = 1.0 - 1e-3

_BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class FixedPointResult:
    """A located stationary level.  ``bracket`` is the scan-resolution
    interval the zero was found in (degenerate for boundary returns).
    ``tangent`` marks a zero accepted because |f| dipped within tolerance
    at a scan point without a sign change (double-root grazing)."""

    k_star: float
    bracket: tuple[float, float]
    f_residual: float
    iterations: int
    mode: str
    tangent: bool = False


@dataclass(frozen=True)
class HysteresisResult:
    """Ascending and descending stationary levels for one parameter set."""

    k_up: float
    k_down: float
    bistable: bool
    up: FixedPointResult
    down: FixedPointResult


@dataclass
class SweepGrid:
    """Final contamination over an (r_prag, r_comp) grid; ``values`` rows
    follow ``r_prag_axis``, columns follow ``r_comp_axis``."""

    r_prag_axis: np.ndarray
    r_comp_axis: np.ndarray
    k0: float
    values: np.ndarray
    params_base: ModelParams


def classify(params: ModelParams, k: float, tol: float = DEFAULT_TOL) -> str:
    """Classify contamination k as "growing", "shrinking", or "stationary"
    by the sign of the balance polynomial, with a |f| <= tol dead band."""
    f = stability_polynomial(params, k)
    if abs(f) <= tol:
        return "stationary"
    return "growing" if f < 0.0 else "shrinking"


def _refine(params: ModelParams, lo: float, hi: float, tol: float
            ) -> tuple[float, float, int]:
    """Bisect [lo, hi] with f(lo) < 0 <= f(hi) until the bracket is narrower
    than tol and the midpoint residual is within tol (or float resolution
    is exhausted)."""
    k = 0.5 * (lo + hi)
    fk = stability_polynomial(params, k)
    iterations = 0
    while iterations < _BISECT_MAX_ITER and (hi - lo > tol or abs(fk) > tol):
        if fk >= 0.0:
            hi = k
        else:
            lo = k
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        k = mid
        fk = stability_polynomial(params, k)
        iterations += 1
    return k, fk, iterations


def _scan_up_from(params: ModelParams, start: float, scan_step: float,
                  tol: float) -> FixedPointResult:
    """First zero of the balance at or above ``start``; 1.0 if none below 1."""
    f0 = stability_polynomial(params, start)
    if f0 >= 0.0 or abs(f0) <= tol:
        return FixedPointResult(start, (start, start), f0, 0, "ascending",
                                tangent=f0 < 0.0)
    prev_k = start
    i = 1
    k = start + scan_step
    while k < 1.0 - 1e-15:
        fk = stability_polynomial(params, k)
        if fk >= 0.0:
            root, res, it = _refine(params, prev_k, k, tol)
            return FixedPointResult(root, (prev_k, k), res, it, "ascending")
        if abs(fk) <= tol:
            return FixedPointResult(k, (prev_k, k), fk, 0, "ascending",
                                    tangent=True)
        prev_k = k
        i += 1
        k = start + i * scan_step
    return FixedPointResult(1.0, (prev_k, 1.0),
                            stability_polynomial(params, 1.0), 0, "ascending")


def _scan_down_from(params: ModelParams, start: float, f0: float,
                    scan_step: float, tol: float) -> FixedPointResult:
    """First zero of the balance at or below ``start``, given f(start) = f0
    is positive; 0.0 if the balance stays non-negative all the way down."""
    prev_k = start
    i = 1
    k = start - scan_step
    while k > 1e-15:
        fk = stability_polynomial(params, k)
        if fk < 0.0:
            root, res, it = _refine(params, k, prev_k, tol)
            return FixedPointResult(root, (k, prev_k), res, it, "descending")
        if fk <= tol:
            return FixedPointResult(k, (k, prev_k), fk, 0, "descending",
                                    tangent=True)
        prev_k = k
        i += 1
        k = start - i * scan_step
    f_zero = stability_polynomial(params, 0.0)
    if f_zero < -tol:
        root, res, it = _refine(params, 0.0, prev_k, tol)
        return FixedPointResult(root, (0.0, prev_k), res, it, "descending")
    return FixedPointResult(0.0, (0.0, prev_k), f_zero, 0, "descending")


def ascending_fixed_point(params: ModelParams,
                          scan_step: float = DEFAULT_SCAN_STEP,
                          tol: float = DEFAULT_TOL) -> FixedPointResult:
    """Stationary level reached from a clean space: scan k upward from 0 for
    the first sign change of the balance from negative to non-negative and
    bisect it.  Returns 0 when the balance is already non-negative at 0
    (clean stays clean) and 1 when no interior zero exists."""
    _check_scan_args(scan_step, tol)
    return _scan_up_from(params, 0.0, scan_step, tol)


def descending_fixed_point(params: ModelParams, k_start: float = DESCENT_START,
                           scan_step: float = DEFAULT_SCAN_STEP,
                           tol: float = DEFAULT_TOL) -> FixedPointResult:
    """Stationary level reached from near-total contamination: if the
    balance is negative at ``k_start`` the contamination grows back and the
    result is 1; otherwise scan downward for the first sign change to
    negative and bisect it (0 if none is found above 0)."""
    _check_scan_args(scan_step, tol)
    if not 0.0 < k_start < 1.0:
        raise ValidationError(f"k_start={k_start!r} must be in (0, 1)")
    f0 = stability_polynomial(params, k_start)
    if abs(f0) <= tol:
        return FixedPointResult(k_start, (k_start, k_start), f0, 0,
                                "descending", tangent=f0 < 0.0)
    if f0 < 0.0:
        return FixedPointResult(1.0, (k_start, 1.0),
                                stability_polynomial(params, 1.0), 0,
                                "descending")
    return _scan_down_from(params, k_start, f0, scan_step, tol)


def asymptote_from(params: ModelParams, k0: float,
                   scan_step: float = DEFAULT_SCAN_STEP,
                   tol: float = DEFAULT_TOL) -> FixedPointResult:
    """Stationary level a growing space flows to from contamination ``k0``:
    the nearest zero of the balance above k0 if contamination grows there,
    below k0 if it shrinks, k0 itself if already stationary."""
    _check_scan_args(scan_step, tol)
    if not 0.0 <= k0 <= 1.0:
        raise ValidationError(f"k0={k0!r} outside [0, 1]")
    f0 = stability_polynomial(params, k0)
    if abs(f0) <= tol:
        return FixedPointResult(k0, (k0, k0), f0, 0, "ascending", tangent=True)
    if f0 < 0.0:
        return _scan_up_from(params, k0, scan_step, tol)
    return _scan_down_from(params, k0, f0, scan_step, tol)


def hysteresis(params: ModelParams, tol: float = DEFAULT_TOL,
               scan_step: float = DEFAULT_SCAN_STEP) -> HysteresisResult:
    """Run both scan procedures and flag bistability when they disagree by
    more than 10x the refinement tolerance."""
    up = ascending_fixed_point(params, scan_step, tol)
    down = descending_fixed_point(params, DESCENT_START, scan_step, tol)
    return HysteresisResult(
        k_up=up.k_star,
        k_down=down.k_star,
        bistable=abs(up.k_star - down.k_star) > 10.0 * tol,
        up=up,
        down=down,
    )


def sweep_plateau(params_base: ModelParams, r_prag_axis, r_comp_axis,
                  k0: float, tol: float = DEFAULT_TOL,
                  scan_step: float = DEFAULT_SCAN_STEP) -> SweepGrid:
    """Final contamination over an (r_prag, r_comp) grid for one start
    level: ``k0 = 0`` runs ascending searches, anything else runs descending
    searches from ``k0``.  Cells are independent; any evaluation order
    yields the same surface."""
    rp_axis = _check_axis("r_prag_axis", r_prag_axis)
    rc_axis = _check_axis("r_comp_axis", r_comp_axis)
    if not 0.0 <= k0 < 1.0:
        raise ValidationError(f"k0={k0!r} must be 0 (clean) or in (0, 1)")
    values = np.empty((len(rp_axis), len(rc_axis)))
    for i, rp in enumerate(rp_axis):
        for j, rc in enumerate(rc_axis):
            cell = replace(params_base, r_prag=float(rp), r_comp=float(rc))
            if k0 == 0.0:
                res = ascending_fixed_point(cell, scan_step, tol)
            else:
                res = descending_fixed_point(cell, k0, scan_step, tol)
            values[i, j] = res.k_star
    return SweepGrid(rp_axis, rc_axis, k0, values, params_base)


def _check_scan_args(scan_step: float, tol: float) -> None:
    if not 0.0 < scan_step <= 0.1:
        raise ValidationError(f"scan_step={scan_step!r} must be in (0, 0.1]")
    if tol <= 0.0:
        raise ValidationError(f"tol={tol!r} must be > 0")


def _check_axis(name: str, axis) -> np.ndarray:
    arr = np.asarray(axis, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError(f"{name} must be a non-empty 1-d sequence")
    if np.any(arr < 0):
        raise ValidationError(f"{name} values must be >= 0")
    if np.any(np.diff(arr) < 0):
        raise ValidationError(f"{name} must be sorted ascending")
    return arr
