import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oscdecay import envelope as en, phase as ph, symbol as sy
from oscdecay.errors import HypothesisError, ParameterRangeError, RegionError
from oracles import mu_rational

INF = math.inf
ONE = sy.constant_one()


def test_mu_examples():
    assert en.mu(1, 4, 0) == F(1, 3)
    assert en.mu(2, 2, 0) == 0
    assert en.mu(3, 4, 1) == F(2, 3)
    with pytest.raises(ParameterRangeError):
        en.mu(1, 1, 0)


def piece(env, name):
    return next(p for p in env.pieces if p.regime == name)


def test_theorem31_quartic_plus_quadratic_with_monomial_symbol():
    for n in (1, 2, 3):
        alpha = (1,) + (0,) * (n - 1)
        env = en.theorem31_envelope(ph.power_sum([(1, 4), (1, 2)], n), sy.monomial(alpha))
        small, inner = piece(env, "small_t"), piece(env, "inner")
        k = 1
        assert small.t_exponent == F(n + k, 4) and small.x_exponent == F(n - k, 3)
        assert inner.t_exponent == F(n + k, 2) and inner.x_exponent == -k
        assert piece(env, "outer").t_exponent == small.t_exponent


def test_theorem31_schrodinger_and_cubic():
    env = en.theorem31_envelope(ph.pure_power(2, 3), ONE)
    assert {p.t_exponent for p in env.pieces} == {F(3, 2)}
    assert {p.x_exponent for p in env.pieces} == {0}
    env = en.theorem31_envelope(ph.pure_power(3), ONE)
    assert env(0.5, 2.0) == pytest.approx(0.5 ** (-1 / 3) * (1 + 0.5 ** (-1 / 3) * 2.0) ** (-0.25))
    assert env.nu2 == F(1, 4)


def test_theorem31_rejects_low_b1():
    with pytest.raises(HypothesisError):
        en.theorem31_envelope(ph.pure_power(2, 2), sy.custom(lambda x: 1, -1.5, 0))


def test_lemma_envelopes():
    env = en.lemma2_envelope(ph.pure_power(4, 1), ONE)
    assert piece(env, "temporal").form == "temporal" and piece(env, "temporal").t_exponent == 1
    st_ = piece(env, "stationary")
    assert (st_.t_exponent, st_.x_exponent) == (F(1, 2) - F(1, 3), F(1, 3))
    env = en.lemma1_envelope(ph.pure_power(2, 3), ONE)
    st_ = piece(env, "stationary")
    assert (st_.t_exponent, st_.x_exponent) == (F(3, 2), 0)
    assert piece(env, "rapid").label == "rapid"
    with pytest.raises(ParameterRangeError):
        en.lemma2_envelope(ph.pure_power(4, 2), sy.custom(lambda x: 1, -2, -2))


def test_proposition34():
    p = ph.pure_power(3, 2)
    env = en.proposition34_envelope(p, ONE, 1, INF)
    assert env.exponents["growth_large_t"] == 0
    assert env.exponents["decay_small_t"] == F(2, 3)
    assert en.proposition34_envelope(p, ONE, 1, 1).exponents["growth_large_t"] == 2


def test_quadrangle_examples():
    r = en.quadrangle(3, 2, 0)
    assert r.degenerate and r.hull() == [(F(1, 2), F(1, 2)), (F(1), F(0))]
    r = en.quadrangle(1, 4, 1)
    assert r.p0 == 1 and r.A == (1, 0) == r.C
    r = en.quadrangle(3, 4, 1)
    assert r.p0 == F(12, 8) and r.p1 == F(3) / (3 - F(2, 3))
    assert en.contains(r, 1, INF)


def test_lp_lq_examples():
    r = en.quadrangle(2, 4, 1)
    assert en.lp_lq_rate(r, 1, INF, 0.5) == F(2 + 1, 4)
    r0 = en.quadrangle(2, 4, 0)
    assert en.lp_lq_rate(r0, 2, 2, 0.5) == 0
    # n=1, m=4, b=1, (1, inf): the critical case s = n/upsilon1 = inf subtracts epsilon
    r = en.quadrangle(1, 4, 1)
    pred = en.lp_lq_prediction(r, 1, INF)
    assert pred.case == "s=n/upsilon1" and pred.epsilon_used
    assert pred.large_t == F(1, 2) - r.epsilon
    with pytest.raises(RegionError):
        en.lp_lq_prediction(en.quadrangle(3, 4, 0), 2, 1)


def test_strichartz_examples():
    rng = en.strichartz_pairs(3, 2, 0)
    assert (rng.p_min, rng.p_max) == (2, 6)
    assert rng.q_of(2) == INF
    assert rng.admissible(2) and not rng.admissible(6)
    assert rng.q_of(F(6) - F(1, 10 ** 9)) > 2
    r4 = en.strichartz_pairs(1, 4, 0)
    assert r4.p_max == INF and r4.q_of(8) == F(32, 3)


def test_frac_schrodinger_examples():
    reg = en.frac_schrodinger_region(2, 2, F(3, 2))
    assert (reg.R.lo, reg.R.hi) == (F(3, 2), F(9, 2))
    assert not reg.R.lo_closed and not reg.R.hi_closed
    reg = en.frac_schrodinger_region(3, 2, 2)
    assert reg.admissible_r.lo == INF and INF in reg.admissible_r
    assert reg.beta_threshold == F(1, 2)
    reg = en.frac_schrodinger_region(1, 3, F(6, 5))
    assert reg.R.lo == F(6, 5) and reg.R.lo_closed


# ---------------------------------------------------------------- properties

rationals = st.fractions(min_value=F(-3), max_value=F(6), max_denominator=12)


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 6), m=st.fractions(min_value=F(11, 10), max_value=F(8), max_denominator=12), b=rationals)
def test_mu_matches_independent_form(n, m, b):
    v = en.mu(n, m, b)
    assert v == mu_rational(n, m, b)
    # scaling consistency between the scaled and product envelope forms
    assert -(n + b) / m + v / m == -F(n, 2) + v


def region_params():
    def build(n, m, k):
        return n, m, F(n) * (m - 2) / 2 * F(k, 8)
    return st.builds(build, st.integers(1, 5), st.fractions(F(2), F(7), max_denominator=6),
                     st.integers(0, 8))


point = st.tuples(st.fractions(F(0), F(1), max_denominator=20), st.fractions(F(0), F(1), max_denominator=20))


@settings(max_examples=200, deadline=None)
@given(params=region_params(), pt=point)
def test_duality_closure(params, pt):
    n, m, b = params
    r = en.quadrangle(n, m, b)
    dual = {(1 - y, 1 - x) for x, y in r.vertices}
    assert dual == set(r.vertices)
    p, q = en.from_recip(pt[0]), en.from_recip(pt[1])
    if pt[0] == 0 or pt[1] == 1:
        return
    pp, qp = en.from_recip(1 - pt[1]), en.from_recip(1 - pt[0])
    assert en.contains(r, p, q) == en.contains(r, pp, qp)
    if en.contains(r, p, q):
        a, b_ = en.lp_lq_prediction(r, p, q), en.lp_lq_prediction(r, pp, qp)
        assert (a.small_t, a.large_t) == (b_.small_t, b_.large_t)


@settings(max_examples=200, deadline=None)
@given(params=region_params(), y=st.fractions(F(0), F(1), max_denominator=30))
def test_tau_on_edge_bc_equals_sigma(params, y):
    n, m, b = params
    r = en.quadrangle(n, m, b)
    q = en.from_recip(y)
    if not en.contains(r, 1, q) or r.p0 == 1:
        return
    pred = en.lp_lq_prediction(r, 1, q)
    sigma, _ = en.sigma_exponent(r, q)
    assert pred.large_t == sigma


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 6))
def test_degenerate_collapse(n):
    r = en.quadrangle(n, 2, 0)
    assert r.p0 == 2 and r.p1 == 1 and r.upsilon1 == r.upsilon2 == 0
    assert r.hull() == [(F(1, 2), F(1, 2)), (F(1), F(0))]
    assert en.classify(r, F(3, 2), 3) == "boundary"
    assert not en.contains(r, F(3, 2), 2)


@settings(max_examples=200, deadline=None)
@given(alpha=st.fractions(min_value=F(51, 50), max_value=F(10), max_denominator=50))
def test_r_interval_continuous_at_switch(alpha):
    c = (2 * alpha - 1) / alpha
    if c >= 2:
        return
    at = en.r_interval(alpha, c)
    # left branch [p, (2a-1)p/(a(2-p))) evaluated at p = c
    left_lo = c
    left_hi = (2 * alpha - 1) * c / (alpha * (2 - c))
    assert (at.lo, at.hi) == (left_lo, left_hi)
    below = en.r_interval(alpha, c - F(1, 10 ** 6))
    assert abs(below.lo - at.lo) <= F(1, 10 ** 5)


def test_strichartz_endpoint_q_infinity():
    rng = en.strichartz_pairs(3, 2, 0)
    p0 = en.quadrangle(3, 2, 0).p0
    assert rng.p_min == en.from_recip(1 - 1 / p0) and rng.q_of(rng.p_min) == INF


@settings(max_examples=100, deadline=None)
@given(m=st.fractions(F(3, 2), F(6), max_denominator=4), b=st.fractions(F(0), F(2), max_denominator=4),
       lt=st.floats(-3, 3), lx=st.floats(-3, 3))
def test_scaling_identity_for_pure_powers(m, b, lt, lx):
    p = ph.pure_power(float(m), 2)
    env = en.theorem31_envelope(p, sy.pure_power(float(b)))
    t, r = 10.0 ** lt, 10.0 ** lx
    lhs = env(t, r)
    rhs = t ** (-float(b + 2) / float(m)) * env(1.0, t ** (-1 / float(m)) * r)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_boundary_ratio_is_bounded():
    env = en.theorem31_envelope(ph.power_sum([(1, 4), (1, 2)], 2), ONE)
    t = np.geomspace(1, 1e6, 200)
    inner, outer = piece(env, "inner"), piece(env, "outer")
    # the two pieces agree up to a bounded factor on |x| = |t|
    ratio = inner.rate(t, t) / outer.rate(t, t)
    assert np.all((ratio >= 0.5) & (ratio <= 2.0))
    assert abs(ratio[-1] - 1) < 1e-3


@settings(max_examples=100, deadline=None)
@given(params=region_params(), a=point, c=point)
def test_small_t_monotone_in_gap(params, a, c):
    n, m, b = params
    r = en.quadrangle(n, m, b)
    pts = []
    for x, y in (a, c):
        if x == 0 or y == 1:
            return
        p, q = en.from_recip(x), en.from_recip(y)
        if not en.contains(r, p, q):
            return
        pts.append((x - y, en.lp_lq_prediction(r, p, q).small_t))
    (g1, s1), (g2, s2) = pts
    if g1 <= g2:
        assert s1 <= s2


def test_envelope_serializes():
    import json
    env = en.theorem31_envelope(ph.pure_power(3), ONE)
    json.dumps(env.to_dict())
    json.dumps(en.quadrangle(2, 4, 1).to_dict())
