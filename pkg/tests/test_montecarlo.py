"""Stochastic simulator tests: seed derivation, the base-count
distribution, per-step bookkeeping, reproducibility, and the pinned-state
statistical oracle against the closed-form laws."""

import itertools
import math

import numpy as np
import pytest

from contamdyn import (
    DegenerateState,
    KnowledgeState,
    McConfig,
    ModelParams,
    ValidationError,
    cleanup_rate,
    competing_rate,
    draw_base_count,
    epoch_seed,
    parasitic_formation_probability,
    pinned_state_frequencies,
    pragmatic_rate,
    run_ensemble,
    run_epoch,
    splitmix64,
)

B_CONFIG = McConfig(c0=1000, cp0=200, b_min=7, b_max=7, p_err=0.1,
                    r_prag=2.0, r_comp=2.0, steps=9000, seed=42, epochs=20)


def small_config(**overrides):
    base = dict(c0=1000, cp0=200, b_min=7, b_max=7, p_err=0.1, r_prag=2.0,
                r_comp=2.0, steps=1500, seed=7, epochs=3, checkpoint_every=100)
    base.update(overrides)
    return McConfig(**base)


# ---------------------------------------------------------------------------
# seed derivation

def test_splitmix64_reference_stream():
    # first three outputs of the SplitMix64 stream for state 0
    assert epoch_seed(0, 0) == 0xE220A8397B1DCDAF
    assert epoch_seed(0, 1) == 0x6E789E6AA1B965F4
    assert epoch_seed(0, 2) == 0x06C45D188009454F
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_epoch_seeds_distinct_and_64bit():
    seeds = [epoch_seed(42, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert all(0 <= s < 2 ** 64 for s in seeds)


# ---------------------------------------------------------------------------
# base-count distribution

def test_base_count_degenerate():
    rng = np.random.default_rng(0)
    assert all(draw_base_count(B_CONFIG, rng) == 7 for _ in range(100))


def test_base_count_mean_matches_midpoint():
    cfg = small_config(b_min=2, b_max=12)
    rng = np.random.default_rng(1234)
    draws = draw_base_count(cfg, rng, size=1_000_000)
    assert abs(draws.mean() - 7.0) < 0.01


def test_base_count_support_and_mean_wide_spread():
    cfg = small_config(b_min=2, b_max=20)
    rng = np.random.default_rng(1234)
    draws = draw_base_count(cfg, rng, size=1_000_000)
    assert draws.min() == 2 and draws.max() == 20
    assert set(np.unique(draws)) == set(range(2, 21))
    assert abs(draws.mean() - 11.0) < 0.02


# ---------------------------------------------------------------------------
# single epochs

def test_epoch_stays_clean_without_error_source():
    cfg = small_config(p_err=0.0, cp0=0, steps=800)
    traj = run_epoch(cfg, epoch_seed(cfg.seed, 0))
    assert np.all(traj.k == 0.0)
    assert np.all(traj.c_p == 0.0)


def test_epoch_bit_exact_determinism():
    cfg = small_config()
    seed = epoch_seed(cfg.seed, 0)
    a = run_epoch(cfg, seed)
    b = run_epoch(cfg, seed)
    assert np.array_equal(a.c, b.c)
    assert np.array_equal(a.c_p, b.c_p)
    assert np.array_equal(a.t, b.t)


def test_epoch_counts_stay_bounded_and_checkpointed():
    cfg = small_config(steps=1234, checkpoint_every=100)
    traj = run_epoch(cfg, 1)
    assert np.all(traj.c_p >= 0)
    assert np.all(traj.c_p <= traj.c)
    assert traj.t[0] == 0 and traj.t[-1] == 1234
    assert list(traj.t[:-1]) == list(range(0, 1234, 100))


def test_epoch_steps_move_counts_by_units():
    # one creation per step, at most one removal per cleanup attempt
    cfg = small_config(steps=400, checkpoint_every=1)
    traj = run_epoch(cfg, 3)
    dc = np.diff(traj.c)
    assert dc.max() <= 1
    assert np.all(dc >= 1 - (int(cfg.r_prag) + int(cfg.r_comp) + 2))


def test_epoch_monotone_without_cleanup():
    cfg = small_config(r_prag=0.0, r_comp=0.0, steps=1000)
    traj = run_epoch(cfg, 11)
    assert np.all(np.diff(traj.c_p) >= 0)
    assert np.all(np.diff(traj.c) == np.full(len(traj) - 1, 100.0))


def test_epoch_degenerates_when_cleanup_swamps_creation():
    cfg = small_config(c0=2, cp0=2, p_err=1.0, r_prag=50.0, r_comp=0.0,
                       steps=50)
    with pytest.raises(DegenerateState):
        run_epoch(cfg, 5)


# ---------------------------------------------------------------------------
# creation rule equals the closed-form union, by exhaustive enumeration

def test_creation_rule_matches_formation_probability():
    for c, cp, b, p_err in [(5, 2, 3, 0.3), (4, 1, 2, 0.0), (6, 3, 2, 0.5)]:
        prob = 0.0
        for picks in itertools.product(range(c), repeat=b):
            inherit = any(pick < cp for pick in picks)
            prob += (p_err + (1.0 - p_err) * inherit) / c ** b
        closed = parasitic_formation_probability(
            ModelParams(p_err, b, 0.0, 0.0), cp / c)
        assert prob == pytest.approx(closed, abs=1e-12)


# ---------------------------------------------------------------------------
# ensembles

def test_ensemble_envelope_ordering_and_scale():
    env = run_ensemble(small_config())
    assert np.all(env.k_min <= env.k_mean + 1e-15)
    assert np.all(env.k_mean <= env.k_max + 1e-15)
    assert np.all(env.k_min >= 0.0) and np.all(env.k_max <= 1.0)
    assert len(env.epoch_seeds) == 3


def test_ensemble_single_epoch_collapses_band():
    env = run_ensemble(small_config(epochs=1))
    assert np.array_equal(env.k_min, env.k_max)
    assert np.array_equal(env.k_min, env.k_mean)


def test_ensemble_identical_for_any_worker_count():
    cfg = small_config()
    serial = run_ensemble(cfg, workers=1)
    threaded = run_ensemble(cfg, workers=4)
    assert np.array_equal(serial.k_min, threaded.k_min)
    assert np.array_equal(serial.k_max, threaded.k_max)
    assert np.array_equal(serial.k_mean, threaded.k_mean)
    assert np.array_equal(serial.c_mean, threaded.c_mean)
    assert serial.epoch_seeds == threaded.epoch_seeds


def test_ensemble_zero_when_no_contamination_source():
    env = run_ensemble(small_config(p_err=0.0, cp0=0, steps=500))
    assert np.all(env.k_max == 0.0)


def test_ensemble_attaches_epoch_index_to_errors():
    cfg = small_config(c0=2, cp0=2, p_err=1.0, r_prag=50.0, steps=50)
    with pytest.raises(DegenerateState, match=r"epoch 0"):
        run_ensemble(cfg)


# ---------------------------------------------------------------------------
# pinned-state statistical oracle

def _four_sigma_counts(rate: float, success_p: float, n: int) -> float:
    # removals per trial are a sum over floor(rate) + Bernoulli(frac(rate))
    # attempts, each succeeding with probability success_p
    whole = int(rate)
    frac = rate - whole
    var = (whole + frac) * success_p * (1 - success_p) \
        + frac * (1 - frac) * success_p ** 2
    return 4.0 * math.sqrt(var / n)


def test_pinned_frequencies_scenario_b():
    params = ModelParams(0.1, 7, 2.0, 2.0)
    state = KnowledgeState(1000, 200)
    n = 100_000
    freqs = pinned_state_frequencies(params, state, n, seed=7)
    p_p = parasitic_formation_probability(params, 0.2)
    assert abs(freqs["p_p_hat"] - p_p) <= 4.0 * math.sqrt(p_p * (1 - p_p) / n)
    assert abs(freqs["prag_hat"] - 0.4) <= _four_sigma_counts(2.0, 0.2, n)
    assert abs(freqs["comp_hat"] - 0.32) <= _four_sigma_counts(2.0, 0.16, n)


def test_pinned_frequencies_clean_state():
    freqs = pinned_state_frequencies(ModelParams(0.1, 7, 2.0, 2.0),
                                     KnowledgeState(1000, 0), 10_000, seed=1)
    assert freqs["prag_hat"] == 0.0
    assert freqs["comp_hat"] == 0.0


def test_pinned_frequencies_randomized_panel():
    rng = np.random.default_rng(20260808)
    n = 40_000
    for trial in range(20):
        c = int(rng.integers(50, 2000))
        cp = int(rng.integers(0, c + 1))
        params = ModelParams(float(rng.uniform(0, 1)), int(rng.integers(1, 12)),
                             float(rng.uniform(0, 4)), float(rng.uniform(0, 4)))
        k = cp / c
        freqs = pinned_state_frequencies(params, KnowledgeState(c, cp), n,
                                         seed=1000 + trial)
        p_p = parasitic_formation_probability(params, k)
        tol_p = 4.0 * math.sqrt(max(p_p * (1 - p_p), 1e-12) / n)
        assert abs(freqs["p_p_hat"] - p_p) <= max(tol_p, 1e-9)
        assert abs(freqs["prag_hat"] - pragmatic_rate(params, k)) <= \
            max(_four_sigma_counts(params.r_prag, k, n), 1e-9)
        assert abs(freqs["comp_hat"] - competing_rate(params, k)) <= \
            max(_four_sigma_counts(params.r_comp, k * (1 - k), n), 1e-9)


def test_pinned_frequencies_validation():
    params = ModelParams(0.1, 7, 2.0, 2.0)
    with pytest.raises(ValidationError):
        pinned_state_frequencies(params, KnowledgeState(1000, 200), 9999, seed=1)
    with pytest.raises(ValidationError):
        pinned_state_frequencies(params, KnowledgeState(1000.5, 200), 10_000, seed=1)
    with pytest.raises(ValidationError):
        pinned_state_frequencies(ModelParams(0.1, 7.5, 2.0, 2.0),
                                 KnowledgeState(1000, 200), 10_000, seed=1)


# ---------------------------------------------------------------------------
# per-step expected removals at the pinned reference state

def test_expected_removals_match_rate_laws():
    # attempt-success probabilities k and k*(1-k) times the strengths
    params = ModelParams(0.1, 7, 2.0, 2.0)
    assert pragmatic_rate(params, 0.2) == pytest.approx(0.4)
    assert competing_rate(params, 0.2) == pytest.approx(0.32)
    assert cleanup_rate(params, 0.2) == pytest.approx(0.72)


# ---------------------------------------------------------------------------
# config validation

def test_config_validation():
    good = dict(c0=10, cp0=5, b_min=2, b_max=4, p_err=0.1, r_prag=1.0,
                r_comp=1.0, steps=10, seed=1)
    McConfig(**good)
    for bad in [dict(c0=0), dict(cp0=11), dict(cp0=-1), dict(b_min=0),
                dict(b_min=5, b_max=4), dict(p_err=1.5), dict(r_prag=-1),
                dict(steps=0), dict(seed=-1), dict(seed=2 ** 64),
                dict(epochs=0), dict(checkpoint_every=0)]:
        with pytest.raises(ValidationError):
            McConfig(**{**good, **bad})
    assert McConfig(**good).b_mean == 3.0
    assert McConfig(**good).model_params().b == 3.0
