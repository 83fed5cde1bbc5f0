"""Seeded stochastic simulation of the concept-creation/cleanup process.

The state is the integer pair (c, c_p): base concepts are drawn uniformly
at random over the whole space, so the counts are a sufficient statistic
and no explicit concept graph is needed.  Per step the process

1. draws a base count B and creates one concept, parasitic if a uniform
   draw falls below ``p_err`` or any of the B uniform base picks (with
   replacement) lands on a parasitic concept;
2. runs pragmatic cleanup: ``floor(r_prag)`` attempts plus one more with
   probability ``frac(r_prag)``, each picking one uniform concept and
   removing it if parasitic;
3. runs competing cleanup: attempts integerized the same way, each drawing
   two independent uniform picks and removing the first iff the first is
   parasitic and the second accurate.

The floor-plus-Bernoulli integerization preserves the expected per-step
removal rates exactly.  Reproducibility contract: per-epoch seeds are
derived from the master seed with SplitMix64 (see :func:`epoch_seed`), and
identical (config, seed) produce bit-identical results regardless of how
many workers execute the epochs.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import Trajectory
from .errors import ContamdynError, DegenerateState, ValidationError
from .model import KnowledgeState, ModelParams

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """One SplitMix64 output for the given 64-bit state."""
    z = (state + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def epoch_seed(master_seed: int, epoch_index: int) -> int:
    """Per-epoch seed: the (epoch_index + 1)-th output of the SplitMix64
    stream started at ``master_seed``.  Fixed and documented so seed lists
    are auditable and portable."""
    return splitmix64((master_seed + epoch_index * _GOLDEN) & _MASK64)


@dataclass(frozen=True)
class McConfig:
    """Configuration of one ensemble run.  The base count per concept is
    ``b_min + Binomial(b_max - b_min, 1/2)`` with mean
    ``b_mean = (b_min + b_max) / 2``."""

    c0: int
    cp0: int
    b_min: int
    b_max: int
    p_err: float
    r_prag: float
    r_comp: float
    steps: int
    seed: int
    epochs: int = 20
    checkpoint_every: int = 100

    def __post_init__(self):
        if self.c0 < 1:
            raise ValidationError(f"c0={self.c0!r} must be >= 1")
        if not 0 <= self.cp0 <= self.c0:
            raise ValidationError(f"cp0={self.cp0!r} outside [0, c0={self.c0!r}]")
        if not 1 <= self.b_min <= self.b_max:
            raise ValidationError(
                f"need 1 <= b_min <= b_max, got ({self.b_min!r}, {self.b_max!r})")
        if not 0.0 <= self.p_err <= 1.0:
            raise ValidationError(f"p_err={self.p_err!r} outside [0, 1]")
        if self.r_prag < 0 or self.r_comp < 0:
            raise ValidationError("cleanup coefficients must be >= 0")
        if self.steps < 1:
            raise ValidationError(f"steps={self.steps!r} must be >= 1")
        if self.epochs < 1:
            raise ValidationError(f"epochs={self.epochs!r} must be >= 1")
        if not 0 <= self.seed <= _MASK64:
            raise ValidationError(f"seed={self.seed!r} outside 64-bit range")
        if self.checkpoint_every < 1:
            raise ValidationError(
                f"checkpoint_every={self.checkpoint_every!r} must be >= 1")

    @property
    def b_mean(self) -> float:
        return 0.5 * (self.b_min + self.b_max)

    def model_params(self) -> ModelParams:
        """Mean-field parameters with the mean base count plugged in."""
        return ModelParams(p_err=self.p_err, b=self.b_mean,
                           r_prag=self.r_prag, r_comp=self.r_comp)


@dataclass
class McEnvelope:
    """Ensemble envelope: per checkpoint the mean concept count and the
    min/max/mean contamination over all epochs."""

    step: np.ndarray
    c_mean: np.ndarray
    k_min: np.ndarray
    k_max: np.ndarray
    k_mean: np.ndarray
    epoch_seeds: list[int]


def draw_base_count(config: McConfig, rng: np.random.Generator,
                    size: int | None = None):
    """Draw the per-concept base count ``b_min + Binomial(b_max - b_min,
    1/2)``; scalar int when size is None, array otherwise."""
    span = config.b_max - config.b_min
    if size is None:
        if span == 0:
            return config.b_min
        return config.b_min + int(rng.binomial(span, 0.5))
    if span == 0:
        return np.full(size, config.b_min, dtype=np.int64)
    return config.b_min + rng.binomial(span, 0.5, size=size)


def _attempt_count(rng: np.random.Generator, rate: float) -> int:
    n = int(rate)
    frac = rate - n
    if frac > 0.0 and rng.random() < frac:
        n += 1
    return n


def run_epoch(config: McConfig, seed: int) -> Trajectory:
    """Run one epoch from (c0, cp0) for ``config.steps`` steps, recording
    (c, c_p, k) at step 0, every ``checkpoint_every`` steps, and the final
    step.  ``seed`` is the per-epoch seed, normally from
    :func:`epoch_seed`."""
    rng = np.random.default_rng(seed)
    c = config.c0
    cp = config.cp0
    rec_t = [0]
    rec_c = [float(c)]
    rec_cp = [float(cp)]

    for step in range(1, config.steps + 1):
        b = draw_base_count(config, rng)
        parasitic = rng.random() < config.p_err
        if not parasitic and cp > 0:
            parasitic = bool(np.any(rng.integers(0, c, size=b) < cp))
        c += 1
        if parasitic:
            cp += 1

        for _ in range(_attempt_count(rng, config.r_prag)):
            if rng.integers(0, c) < cp:
                c -= 1
                cp -= 1
                if c == 0:
                    raise DegenerateState(f"concept space emptied at step {step}")

        for _ in range(_attempt_count(rng, config.r_comp)):
            first = rng.integers(0, c)
            second = rng.integers(0, c)
            if first < cp and second >= cp:
                c -= 1
                cp -= 1
                if c == 0:
                    raise DegenerateState(f"concept space emptied at step {step}")

        if step == config.steps or step % config.checkpoint_every == 0:
            rec_t.append(step)
            rec_c.append(float(c))
            rec_cp.append(float(cp))

    c_arr = np.asarray(rec_c)
    cp_arr = np.asarray(rec_cp)
    return Trajectory(c=c_arr, c_p=cp_arr, k=cp_arr / c_arr,
                      t=np.asarray(rec_t, dtype=np.int64),
                      meta={"seed": seed})


def run_ensemble(config: McConfig, workers: int = 1) -> McEnvelope:
    """Run ``config.epochs`` independent epochs and aggregate the envelope.

    Epochs get their seeds from :func:`epoch_seed` and own their RNGs, so
    they may run on any number of workers; aggregation is done in epoch
    order and the result is bit-identical for every ``workers`` value."""
    if workers < 1:
        raise ValidationError(f"workers={workers!r} must be >= 1")
    seeds = [epoch_seed(config.seed, i) for i in range(config.epochs)]

    def _run(index: int) -> Trajectory:
        try:
            return run_epoch(config, seeds[index])
        except ContamdynError as exc:
            raise type(exc)(f"epoch {index}: {exc}") from exc

    if workers == 1:
        trajectories = [_run(i) for i in range(config.epochs)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trajectories = list(pool.map(_run, range(config.epochs)))

    k_mat = np.stack([t.k for t in trajectories])
    c_mat = np.stack([t.c for t in trajectories])
    return McEnvelope(
        step=trajectories[0].t.copy(),
        c_mean=c_mat.mean(axis=0),
        k_min=k_mat.min(axis=0),
        k_max=k_mat.max(axis=0),
        k_mean=k_mat.mean(axis=0),
        epoch_seeds=seeds,
    )


def pinned_state_frequencies(params: ModelParams, state: KnowledgeState,
                             n_trials: int, seed: int) -> dict[str, float]:
    """Empirical per-step frequencies at a frozen state: the parasitic
    creation indicator and the removals per step of each cleanup channel
    (averaging the attempt-count randomization).  A statistical oracle for
    the closed-form laws; the state is never mutated."""
    if n_trials < 10_000:
        raise ValidationError(f"n_trials={n_trials!r} must be >= 10^4")
    c = int(state.c)
    cp = int(state.c_p)
    if c != state.c or cp != state.c_p:
        raise ValidationError("pinned state requires integer-valued counts")
    b = int(params.b)
    if b != params.b:
        raise ValidationError("pinned creation trial requires an integer b")

    rng = np.random.default_rng(seed)
    err = rng.random(n_trials) < params.p_err
    if cp > 0:
        inherited = (rng.integers(0, c, size=(n_trials, b)) < cp).any(axis=1)
    else:
        inherited = np.zeros(n_trials, dtype=bool)
    p_p_hat = float(np.mean(err | inherited))

    def removals(rate: float, success) -> float:
        whole = int(rate)
        frac = rate - whole
        total = np.zeros(n_trials)
        for _ in range(whole):
            total += success()
        if frac > 0.0:
            active = rng.random(n_trials) < frac
            total += active & success()
        return float(total.mean())

    def prag_success():
        return rng.integers(0, c, size=n_trials) < cp

    def comp_success():
        first = rng.integers(0, c, size=n_trials)
        second = rng.integers(0, c, size=n_trials)
        return (first < cp) & (second >= cp)

    return {
        "p_p_hat": p_p_hat,
        "prag_hat": removals(params.r_prag, prag_success),
        "comp_hat": removals(params.r_comp, comp_success),
    }
