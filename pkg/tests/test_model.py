"""Closed-form law tests: worked examples, independent oracles, and
hypothesis property checks."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contamdyn import (
    KnowledgeState,
    ModelParams,
    SingularDenominator,
    ValidationError,
    cleanup_rate,
    competing_rate,
    contamination_derivative,
    evaluate_rates,
    parasitic_formation_probability,
    parasitic_inclusion_probability,
    pragmatic_rate,
    stability_polynomial,
)

SCENARIO_B = ModelParams(p_err=0.1, b=7, r_prag=2.0, r_comp=2.0)

params_st = st.builds(
    ModelParams,
    p_err=st.floats(0.0, 1.0),
    b=st.one_of(st.integers(1, 30), st.floats(1.0, 200.0)),
    r_prag=st.floats(0.0, 10.0),
    r_comp=st.floats(0.0, 10.0),
)
k_st = st.floats(0.0, 1.0)


# ---------------------------------------------------------------------------
# inclusion probability

def test_inclusion_trivial_endpoints():
    assert parasitic_inclusion_probability(0.0, 5) == 0.0
    assert parasitic_inclusion_probability(1.0, 1) == 1.0


def test_inclusion_matches_empirical_frequency():
    # oracle: frequency of "at least one of 7 draws parasitic" over 10^6
    # simulated base-set draws with replacement from a pool at k = 0.2
    rng = np.random.default_rng(20260809)
    hits = (rng.random((1_000_000, 7)) < 0.2).any(axis=1)
    empirical = hits.mean()
    got = parasitic_inclusion_probability(0.2, 7)
    assert got == pytest.approx(0.7902848, abs=1e-9)
    assert got == pytest.approx(empirical, abs=4 * math.sqrt(0.79 * 0.21 / 1e6))


def test_inclusion_domain_errors():
    with pytest.raises(ValueError):
        parasitic_inclusion_probability(-0.1, 5)
    with pytest.raises(ValueError):
        parasitic_inclusion_probability(1.1, 5)
    with pytest.raises(ValueError):
        parasitic_inclusion_probability(0.5, 0)


@given(k=k_st, b=st.floats(1.0, 500.0))
def test_inclusion_bounds(k, b):
    p = parasitic_inclusion_probability(k, b)
    assert 0.0 <= p <= 1.0


@given(b=st.floats(1.0, 100.0), k1=k_st, k2=k_st)
def test_inclusion_monotone_in_k(b, k1, k2):
    lo, hi = min(k1, k2), max(k1, k2)
    assert parasitic_inclusion_probability(lo, b) <= \
        parasitic_inclusion_probability(hi, b) + 1e-15


@given(k=k_st, b1=st.floats(1.0, 100.0), b2=st.floats(1.0, 100.0))
def test_inclusion_monotone_in_b(k, b1, b2):
    lo, hi = min(b1, b2), max(b1, b2)
    assert parasitic_inclusion_probability(k, lo) <= \
        parasitic_inclusion_probability(k, hi) + 1e-15


def test_log_domain_pow_agrees_at_threshold():
    # the large-exponent branch kicks in above b = 64; both branches must
    # agree where they meet and stay finite for huge b
    for k in (0.0, 1e-12, 0.3, 0.999, 1.0):
        direct = parasitic_inclusion_probability(k, 64)
        logdom = parasitic_inclusion_probability(k, 64.0000001)
        assert logdom == pytest.approx(direct, abs=1e-12)
    assert parasitic_inclusion_probability(0.5, 10_000) == 1.0


# ---------------------------------------------------------------------------
# formation probability

def test_formation_trivial():
    p = ModelParams(0.1, 5, 0, 0)
    assert parasitic_formation_probability(p, 0.0) == pytest.approx(0.1, abs=1e-15)
    clean = ModelParams(0.0, 5, 0, 0)
    assert parasitic_formation_probability(clean, 0.0) == 0.0


def test_formation_scenario_b():
    # hand substitution: 1 - 0.9 * 0.8**7
    assert parasitic_formation_probability(SCENARIO_B, 0.2) == \
        pytest.approx(0.81125632, abs=1e-9)


@given(params=params_st, k=k_st)
def test_formation_dominates_both_channels(params, k):
    p_p = parasitic_formation_probability(params, k)
    assert 0.0 <= p_p <= 1.0
    assert p_p >= params.p_err - 1e-15
    assert p_p >= parasitic_inclusion_probability(k, params.b) - 1e-15


# ---------------------------------------------------------------------------
# cleanup rates

def test_rates_trivial():
    p = ModelParams(0.1, 7, 2.0, 2.0)
    assert pragmatic_rate(p, 0.0) == 0.0
    assert pragmatic_rate(ModelParams(0.1, 7, 0.0, 2.0), 0.7) == 0.0
    assert competing_rate(p, 1.0) == 0.0
    assert competing_rate(p, 0.0) == 0.0
    assert cleanup_rate(ModelParams(0.1, 7, 0.0, 0.0), 0.3) == 0.0


def test_rates_scenario_b():
    assert pragmatic_rate(SCENARIO_B, 0.2) == pytest.approx(0.4, abs=1e-15)
    assert competing_rate(SCENARIO_B, 0.2) == pytest.approx(0.32, abs=1e-15)
    assert cleanup_rate(SCENARIO_B, 0.2) == pytest.approx(0.72, abs=1e-15)
    # competing term vanishes at k=1, only 1 * r_prag remains
    assert cleanup_rate(SCENARIO_B, 1.0) == pytest.approx(2.0, abs=1e-15)


@given(params=params_st, k=k_st)
def test_rates_nonnegative(params, k):
    assert pragmatic_rate(params, k) >= 0.0
    assert competing_rate(params, k) >= 0.0
    assert cleanup_rate(params, k) >= 0.0


@given(r_comp=st.floats(0.0, 10.0), k=st.floats(0.0, 0.5))
def test_competing_symmetric_about_half(r_comp, k):
    p = ModelParams(0.0, 1, 0.0, r_comp)
    assert competing_rate(p, k) == pytest.approx(competing_rate(p, 1.0 - k),
                                                 abs=1e-12)


# ---------------------------------------------------------------------------
# contamination derivative

def test_derivative_trivial_and_scenario_b():
    assert contamination_derivative(ModelParams(0.0, 3, 0.0, 0.0), 0.0) == 0.0
    # (0.81125632 - 0.72) / 0.28
    assert contamination_derivative(SCENARIO_B, 0.2) == \
        pytest.approx(0.32591543, abs=1e-8)
    # cleanup off: the derivative equals the formation probability
    no_cleanup = ModelParams(0.1, 7, 0.0, 0.0)
    assert contamination_derivative(no_cleanup, 0.2) == \
        pytest.approx(0.81125632, abs=1e-9)


def test_derivative_singular_guard():
    # r_prag = 2 at k = 0.5 puts the cleanup rate exactly at 1
    p = ModelParams(0.1, 7, 2.0, 0.0)
    with pytest.raises(SingularDenominator):
        contamination_derivative(p, 0.5)
    # within the default 1e-9 guard
    p2 = ModelParams(0.1, 7, 1.0 + 1e-10, 0.0)
    with pytest.raises(SingularDenominator):
        contamination_derivative(p2, 1.0)
    # a wider guard can be requested
    p3 = ModelParams(0.1, 7, 1.01, 0.0)
    with pytest.raises(SingularDenominator):
        contamination_derivative(p3, 1.0, eps_singular=0.05)


# ---------------------------------------------------------------------------
# stability polynomial

def test_polynomial_scenario_b_value():
    # term-by-term hand evaluation: 5*0.2 - 6*0.04 + 2*0.008 - 1 + 0.9*0.8**7
    assert stability_polynomial(SCENARIO_B, 0.2) == \
        pytest.approx(-0.03525632, abs=1e-9)


@given(params=params_st)
def test_polynomial_endpoints(params):
    assert stability_polynomial(params, 0.0) == \
        pytest.approx(-params.p_err, abs=1e-12)
    assert stability_polynomial(params, 1.0) == pytest.approx(0.0, abs=1e-12)


@given(params=params_st, k=k_st)
@settings(max_examples=200)
def test_sign_link_between_derivative_and_polynomial(params, k):
    # algebraic identity: dc_p/dc - k = -f(k) / (1 - r_cleanup)
    r = cleanup_rate(params, k)
    if r >= 0.99:
        return
    drift = contamination_derivative(params, k) - k
    f = stability_polynomial(params, k)
    if abs(drift) < 1e-9 and abs(f) < 1e-9:
        return
    assert math.copysign(1.0, drift) == -math.copysign(1.0, f)


# ---------------------------------------------------------------------------
# bundled rates and domain types

def test_evaluate_rates_scenario_b():
    rates = evaluate_rates(SCENARIO_B, KnowledgeState(1000, 200))
    assert rates.p_ip == pytest.approx(0.7902848, abs=1e-9)
    assert rates.p_p == pytest.approx(0.81125632, abs=1e-9)
    assert rates.r_prag_rate == pytest.approx(0.4, abs=1e-15)
    assert rates.r_comp_rate == pytest.approx(0.32, abs=1e-15)
    assert rates.r_cleanup == pytest.approx(0.72, abs=1e-15)
    assert rates.r_cleanup == rates.r_prag_rate + rates.r_comp_rate
    assert rates.f == pytest.approx(-0.03525632, abs=1e-9)


def test_evaluate_rates_trivial_states():
    quiet = evaluate_rates(ModelParams(0.0, 4, 0.0, 0.0), KnowledgeState(1000, 0))
    assert (quiet.p_ip, quiet.p_p, quiet.r_cleanup, quiet.f) == (0, 0, 0, 0)
    full = evaluate_rates(ModelParams(0.3, 4, 1.0, 5.0), KnowledgeState(1000, 1000))
    assert full.p_ip == 1.0
    assert full.p_p == 1.0
    assert full.r_comp_rate == 0.0
    assert full.f == pytest.approx(0.0, abs=1e-12)


def test_params_constructor_rejects_violations():
    with pytest.raises(ValidationError):
        ModelParams(-0.1, 5, 0, 0)
    with pytest.raises(ValidationError):
        ModelParams(1.5, 5, 0, 0)
    with pytest.raises(ValidationError):
        ModelParams(0.1, 0, 0, 0)
    with pytest.raises(ValidationError):
        ModelParams(0.1, 5, -1, 0)
    with pytest.raises(ValidationError):
        ModelParams(0.1, 5, 0, -1)


def test_state_invariants():
    with pytest.raises(ValidationError):
        KnowledgeState(0, 0)
    with pytest.raises(ValidationError):
        KnowledgeState(10, -1)
    with pytest.raises(ValidationError):
        KnowledgeState(10, 11)
    assert KnowledgeState(1000, 200).k == pytest.approx(0.2, abs=1e-15)
    assert 0.0 <= KnowledgeState(3, 3).k <= 1.0
