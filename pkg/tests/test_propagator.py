import cmath
import math

import numpy as np
import pytest

from oscdecay import oscint as oi, phase as ph, propagator as pr, symbol as sy
from oscdecay.errors import HypothesisError
from oracles import gaussian_schrodinger_peak

SCHRO1 = ph.pure_power(2, 1)
QUART = ph.power_sum([(1, 4), (1, 2)], 1)


def test_grid_must_be_power_of_two():
    with pytest.raises(HypothesisError):
        pr.GridField(1, 100, 1.0, np.zeros(100))


def test_parseval_on_grid():
    u = pr.gaussian(1, 512, 16.0, width=1.3, k0=0.7)
    spec = np.fft.fft(u.values)
    lhs = pr.lp_norm(u, 2) ** 2
    rhs = np.sum(np.abs(spec) ** 2) / u.points * u.dx
    assert lhs == pytest.approx(rhs, rel=1e-13)
    assert pr.lp_norm(u, 2) ** 2 == pytest.approx(math.sqrt(math.pi) * 1.3, rel=1e-12)


def test_identity_at_time_zero():
    u = pr.gaussian(2, 64, 8.0, width=1.0)
    assert pr.evolve(ph.pure_power(3, 2), None, u, 0.0) is u
    w = pr.evolve(ph.pure_power(3, 2), sy.constant_one(), u, 0.0)
    assert np.max(np.abs(w.values - u.values)) < 1e-14


@pytest.mark.parametrize("n", [1, 2, 3])
def test_unitarity(n):
    u = pr.default_probes(n)[3]
    for t in (0.1, 1.0, 7.5):
        w = pr.evolve(ph.pure_power(4, n), None, u, t)
        assert pr.lp_norm(w, 2) == pytest.approx(pr.lp_norm(u, 2), rel=1e-12)


def test_group_law():
    u = pr.gaussian(1, 1024, 32.0, width=0.8, k0=1.0)
    a = pr.evolve(QUART, None, pr.evolve(QUART, None, u, 0.3), 0.45)
    b = pr.evolve(QUART, None, u, 0.75)
    assert np.max(np.abs(a.values - b.values)) < 1e-12
    back = pr.evolve(QUART, None, b, -0.75)
    assert np.max(np.abs(back.values - u.values)) < 1e-12


def test_gaussian_schrodinger_oracle():
    w0 = 1.0
    u = pr.gaussian(1, 4096, 128.0, width=w0)
    x = u.axis()
    for t in (0.25, 1.0, 4.0):
        v = pr.evolve(SCHRO1, None, u, t).values
        ref = np.exp(-x ** 2 / (2 * w0 ** 2 - 4j * t)) / np.sqrt(1 - 2j * t / w0 ** 2 + 0j)
        assert np.max(np.abs(v - ref)) < 1e-6
        assert np.max(np.abs(v)) == pytest.approx(gaussian_schrodinger_peak(w0, t), rel=1e-6)


def test_band_limited_spike_matches_kernel():
    # the evolved spike is (2 pi)^-1 I(t, x) with psi = exp(-xi^2/kc^2)
    kc, t = 2.0, 0.05
    g = sy.custom(lambda x: np.exp(-np.sum(x * x, axis=-1) / kc ** 2), 0, 0,
                  radial=lambda s: np.exp(-np.asarray(s) ** 2 / kc ** 2))
    u = pr.band_limited_spike(1, 2 ** 14, 256.0, kc)
    assert pr.lp_norm(u, 1) == pytest.approx(1.0, rel=1e-9)
    w = pr.evolve(QUART, None, u, t)
    assert pr.frame_fraction(w) < pr.FRAME_TOLERANCE
    xs = u.axis()
    for j in (8192, 8192 + 37, 8192 + 300, 8192 + 1000):
        ref = oi.eval_adaptive_1d(QUART, g, t, xs[j]).value
        assert abs(2 * math.pi * w.values[j] - ref) < 1e-10


def test_ratio_time_reversal_symmetry():
    probes = pr.default_probes(1, 1024, 32.0)
    a = pr.operator_ratio(QUART, None, 1, math.inf, 0.2, probes)
    b = pr.operator_ratio(QUART, None, 1, math.inf, -0.2, probes)
    assert a.value == pytest.approx(b.value, rel=1e-12)
    c = pr.operator_ratio(QUART, None, 2, 2, 0.2, probes)
    assert np.allclose(c.ratios, 1.0, rtol=1e-12)
    assert a.label == "lower bound"


def test_ratio_threads_match_serial():
    probes = pr.default_probes(1, 512, 16.0)
    a = pr.operator_ratio(QUART, None, 2, 4, 0.1, probes, threads=1)
    b = pr.operator_ratio(QUART, None, 2, 4, 0.1, probes, threads=4)
    assert a.ratios == b.ratios


def test_aliasing_flag():
    u = pr.point_mass(1, 256, 8.0)
    assert pr.operator_ratio(SCHRO1, None, 1, math.inf, 5.0, [u]).aliasing
    g = pr.gaussian(1, 1024, 64.0, width=1.0)
    assert not pr.operator_ratio(SCHRO1, None, 1, math.inf, 0.1, [g]).aliasing
    with pytest.raises(HypothesisError):
        pr.operator_ratio(SCHRO1, None, 1, 2, 1.0, [])


def test_resolvent_smallness():
    n, P, L = 1, 512, 16.0
    probes = pr.default_probes(n, P, L)
    zero = pr.make_field(lambda x: np.zeros(x.shape[:-1]), n, P, L)
    assert pr.resolvent_smallness(1.0, zero, 2, 2, 1.0, probes).value == 0.0
    V = pr.make_field(lambda x: np.full(x.shape[:-1], 0.3), n, P, L)
    vals = [pr.resolvent_smallness(1.0, V, 2, 2, lam, probes).value for lam in (0.5, 1.0, 2.0, 4.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    V2 = V.with_values(2 * V.values)
    r1 = pr.resolvent_smallness(1.0, V, 2, 2, 1.0, probes)
    r2 = pr.resolvent_smallness(1.0, V2, 2, 2, 1.0, probes)
    assert r2.value == pytest.approx(2 * r1.value, rel=1e-13)
    # a constant potential on L^2: the supremum is 0.3/lambda at the zero mode
    assert r1.value <= 0.3 + 1e-12
    with pytest.raises(HypothesisError):
        pr.resolvent_smallness(1.0, V, 2, 2, 0.0, probes)


@pytest.mark.parametrize("q", [1, 2, 4])
def test_strichartz_l2_identity(q):
    u = pr.gaussian(1, 512, 16.0, width=1.0)
    T = 1.0
    res = pr.strichartz_norm(ph.pure_power(4), u, 2, q, T, time_steps=16)
    l2 = pr.lp_norm(u, 2)
    assert res.value == pytest.approx(l2 * (2 * T) ** (1 / q), rel=1e-12)
    assert res.value_doubled == pytest.approx(l2 * (4 * T) ** (1 / q), rel=1e-12)
    assert res.unstable == (2 ** (1 / q) - 1 > 0.2)


def test_strichartz_q_infinity_is_stable_for_l2():
    u = pr.gaussian(1, 512, 16.0, width=1.0)
    res = pr.strichartz_norm(ph.pure_power(4), u, 2, math.inf, 1.0, time_steps=16)
    assert res.delta < 1e-12 and not res.unstable
