"""
Tests for the limit functions, the fixed-point solver and the regime classifier
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from model.params import ModelParams
from theory import (
    QEvaluation,
    Regime,
    TheoryResult,
    classify_regime,
    drift,
    drift_finite,
    f_k,
    f_slope_at_zero,
    f_system,
    h_fn,
    q_expected,
    q_poly,
    solve_fixed_point,
)


def make_params(a=0.5, alpha=0.3, d=2, m_dist=(1.0,)):
    return ModelParams(a=a, b=1.0, alpha=alpha, beta=1.0, d=d, m_dist=list(m_dist), n0=8)


def enumerate_tail(i, r, probs):
    """Pr(at most r-1 successes) by summing over all 2^(i-1) outcomes."""
    total = 0.0
    for outcome in itertools.product((0, 1), repeat=i - 1):
        if sum(outcome) <= r - 1:
            weight = 1.0
            for hit, p in zip(outcome, probs):
                weight *= p if hit else 1.0 - p
            total += weight
    return total


# ---------------------------------------------------------------- h and Q

def test_h_examples():
    assert h_fn(0.0, 0.3, 2) == 0.0
    assert h_fn(1 / 0.3, 0.3, 2) == pytest.approx(1.0)
    assert h_fn(1.0, 0.3, 2) == pytest.approx(0.51)
    assert h_fn(10.0, 0.3, 2) == 1.0, "base is clamped past 1/alpha"
    with pytest.raises(ValueError):
        h_fn(-0.1, 0.3, 2)


def test_h_is_monotone_and_bounded():
    xs = np.linspace(0.0, 5.0, 501)
    values = [h_fn(float(x), 0.45, 3) for x in xs]
    assert all(later >= earlier for earlier, later in zip(values, values[1:]))
    assert all(0.0 <= v <= 1.0 for v in values)


def test_q_poly_examples():
    assert q_poly(1, 1, []) == 1.0
    assert q_poly(1, 3, []) == 1.0
    assert q_poly(3, 1, [0.5, 0.5]) == pytest.approx(0.25)
    assert q_poly(3, 2, [5 / 9, 5 / 9]) == pytest.approx(0.69135, abs=1e-4)
    assert q_poly(2, 2, [0.9]) == 1.0


def test_q_poly_matches_subset_enumeration():
    """Exact to 1e-12 for every i <= 7 and r <= 3 on 100 random vectors."""
    rng = np.random.default_rng(2024)
    for _ in range(100):
        probs = rng.random(6).tolist()
        for i in range(1, 8):
            for r in range(1, 4):
                expected = enumerate_tail(i, r, probs[: i - 1])
                assert abs(q_poly(i, r, probs) - expected) <= 1e-12, f"i={i} r={r}"


def test_q_poly_rejects_bad_input():
    with pytest.raises(ValueError):
        q_poly(3, 1, [0.5, 1.2])
    with pytest.raises(ValueError):
        q_poly(3, 1, [0.5])
    with pytest.raises(ValueError):
        q_poly(0, 1, [])


def test_q_expected_examples():
    h1 = 0.37
    assert q_expected(2, [1.0], [h1]) == pytest.approx(1.0 - h1)
    assert q_expected(2, [0.0, 1.0], [h1]) == 1.0
    assert q_expected(2, [0.5, 0.5], [0.5]) == pytest.approx(0.75)


@pytest.mark.parametrize("m_dist", [[1.0], [0.0, 0.5, 0.5], [0.0, 0.0, 0.2, 0.8]])
def test_q_expected_monotone_in_rank(m_dist):
    """Q_i = Q_{i+1} below r_m and Q_i > Q_{i+1} from r_m on."""
    r_min = next(r for r, p in enumerate(m_dist, start=1) if p > 0)
    alpha, d = 0.3, 2
    rng = np.random.default_rng(len(m_dist))
    for _ in range(100):
        xs = sorted(rng.uniform(1e-3, 2.0, size=8).tolist(), reverse=True)
        h_values = [h_fn(x, alpha, d) for x in xs]
        for i in range(1, 8):
            current = q_expected(i, m_dist, h_values)
            following = q_expected(i + 1, m_dist, h_values)
            if i <= r_min - 1:
                assert current == following == 1.0
            else:
                assert current > following, f"i={i}"


# ---------------------------------------------------------------- f_k

def test_f1_closed_form():
    params = make_params()
    empty = QEvaluation()
    assert f_k(0.0, empty, 1, params) == 0.0
    for x in (0.2, 1.0, 10 / 9, 2.5):
        assert f_k(x, empty, 1, params) == pytest.approx(0.1 * x - 0.09 * x * x, abs=1e-12)


def test_f_slope_and_concavity():
    params = make_params()
    prefix = QEvaluation((0.4,))
    q = q_expected(2, params.m_dist, prefix.h_values)
    assert f_slope_at_zero(prefix, 2, params) == pytest.approx(params.a - 1 + params.d * params.alpha * q)
    eps = 1e-7
    numeric = f_k(eps, prefix, 2, params) / eps
    assert numeric == pytest.approx(f_slope_at_zero(prefix, 2, params), abs=1e-5)
    xs = np.linspace(0.0, 3.0, 61)
    values = np.array([f_k(float(x), prefix, 2, params) for x in xs])
    assert np.all(np.diff(values, 2) <= 1e-12), "f_k must be concave"


# ---------------------------------------------------------------- solver

def test_single_giant_root():
    result = solve_fixed_point(make_params())
    assert result.K == 1
    assert result.x_star[0] == pytest.approx(10 / 9, abs=1e-10)
    assert result.regime is Regime.SUPERCRITICAL
    assert result.r_m == 1


def test_two_equal_giants_when_m_is_two():
    result = solve_fixed_point(make_params(m_dist=[0.0, 1.0]))
    assert result.K == 2
    assert result.x_star[0] == pytest.approx(10 / 9, abs=1e-10)
    assert result.x_star[1] == pytest.approx(result.x_star[0], abs=1e-12)
    assert result.r_m == 2


def test_no_root_below_threshold():
    result = solve_fixed_point(make_params(a=0.2, alpha=0.2))
    assert result.K == 0 and result.x_star == []


@pytest.mark.parametrize("m_dist", [[1.0], [0.0, 1.0], [0.3, 0.7], [0.1, 0.2, 0.7]])
def test_root_residuals(m_dist):
    params = make_params(a=0.45, alpha=0.35, m_dist=m_dist)
    result = solve_fixed_point(params)
    assert result.K >= 1
    residuals = f_system(result.x_star, params)
    assert max(abs(v) for v in residuals) <= 1e-10
    assert result.x_star == sorted(result.x_star, reverse=True)


def test_k_max_caps_the_search():
    result = solve_fixed_point(make_params(m_dist=[0.0, 1.0]), k_max=1)
    assert result.K == 1
    with pytest.raises(ValueError):
        solve_fixed_point(make_params(), k_max=0)


def test_classify_examples():
    sub = classify_regime(make_params(a=0.2, alpha=0.2))
    assert sub.regime is Regime.SUBCRITICAL
    assert sub.exponent == pytest.approx(0.6)

    critical = classify_regime(make_params(a=0.4, alpha=0.3))
    assert critical.regime is Regime.CRITICAL
    assert critical.critical_constant == pytest.approx(5.5556, abs=1e-4)
    assert critical.K == 0

    sup = classify_regime(make_params())
    assert sup.regime is Regime.SUPERCRITICAL
    assert sup.x_star[0] == pytest.approx(1.1111, abs=1e-4)


def test_critical_detected_despite_float_rounding():
    # 0.1 + 3*0.3 is not exactly 1.0 in binary floating point
    params = ModelParams(a=0.1, b=1.0, alpha=0.3, beta=1.0, d=3, m_dist=[1.0], n0=8)
    assert classify_regime(params).regime is Regime.CRITICAL


def test_theory_result_validation():
    with pytest.raises(ValidationError):
        TheoryResult(regime=Regime.SUPERCRITICAL, exponent=1.1, critical_constant=5.0, x_star=[1.0], K=2, r_m=1)
    with pytest.raises(ValidationError):
        TheoryResult(regime=Regime.SUPERCRITICAL, exponent=1.1, critical_constant=5.0, x_star=[0.5, 1.0], K=2, r_m=1)


# ---------------------------------------------------------------- drift

def test_drift_examples():
    params = make_params()
    x_star = solve_fixed_point(params).x_star[0]
    assert drift(1, [x_star], params) == pytest.approx(x_star, abs=1e-10)
    assert drift(1, [0.0], params) == 0.0
    assert drift(1, [0.5], params) == pytest.approx(0.5275)
    with pytest.raises(ValueError):
        drift(2, [0.3, 0.6], params)
    with pytest.raises(ValueError):
        drift(2, [0.3], params)


@pytest.mark.parametrize("k", [1, 2])
def test_finite_drift_tends_to_limit(k):
    params = make_params(m_dist=[0.4, 0.6])
    z = [1.0, 0.6]
    n_prime = 10**8
    degrees = [int(v * n_prime) for v in z]
    finite = drift_finite(k, degrees, n_prime, n_prime, params)
    assert finite == pytest.approx(drift(k, z, params), rel=1e-6)
