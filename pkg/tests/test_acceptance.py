"""Acceptance criteria, one test each; the summary prints one line per criterion."""

import filecmp
import json
import math
import os
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from oscdecay import cli, envelope as en, fitcheck as fc, oscint as oi, phase as ph
from oscdecay import propagator as pr, symbol as sy
from oracles import airy_kernel, fresnel_abs, mu_rational

ONE = sy.constant_one()
INF = math.inf
THREADS = os.cpu_count() or 1


def test_criterion_01_free_schrodinger(criterion):
    rng = np.random.default_rng(20261017)
    start = time.perf_counter()
    worst_exact, worst_lattice = 0.0, 0.0
    for n in (1, 2, 3):
        phase = ph.pure_power(2, n)
        exact = "adaptive1d" if n == 1 else "hankel"
        for _ in range(20):
            t = float(10 ** rng.uniform(-2, 2)) * rng.choice([-1.0, 1.0])
            x = rng.uniform(-5, 5, n)
            ref = fresnel_abs(t, n)
            a = oi.evaluate(phase, ONE, t, x, method=exact)
            b = oi.eval_lattice(phase, ONE, t, x)
            worst_exact = max(worst_exact, abs(a.abs - ref) / ref)
            worst_lattice = max(worst_lattice, abs(b.abs - ref) / ref)
    elapsed = time.perf_counter() - start
    ok = worst_exact <= 1e-6 and worst_lattice <= 1e-3 and elapsed <= 60
    criterion(1, ok, f"max rel err adaptive/hankel {worst_exact:.2e}, lattice {worst_lattice:.2e}, "
                     f"{elapsed:.1f}s")
    assert ok


def test_criterion_02_airy(criterion):
    start = time.perf_counter()
    worst = 0.0
    phase = ph.monomial_odd_1d(3)
    for t in np.geomspace(0.1, 100, 10):
        for x in np.linspace(-5, 5, 10) * t ** (1 / 3):
            ref = airy_kernel(t, x)
            got = oi.eval_adaptive_1d(phase, ONE, t, x).value
            worst = max(worst, abs(got - ref) / abs(ref))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-4 and elapsed <= 120
    criterion(2, ok, f"max rel err {worst:.2e} on 10x10 grid, {elapsed:.1f}s")
    assert ok


def time_fit(phase, window, predicted, points=24):
    ts = np.geomspace(*window, points)
    s = oi.evaluate_many(phase, ONE, [(t, 0.0) for t in ts], threads=THREADS)
    return fc.fit_time_decay(s, predicted)


def test_criterion_03_two_regime_time_decay(criterion):
    start = time.perf_counter()
    phase = ph.power_sum([(1, 4), (1, 2)], 1)
    small = time_fit(phase, (1e-3, 1e-1), F(-1, 4))
    large = time_fit(phase, (1e2, 1e4), F(-1, 2))
    elapsed = time.perf_counter() - start
    ok = small.passed and large.passed and elapsed <= 300
    criterion(3, ok, f"small t {small.fitted_exponent:.4f} (pred -1/4), "
                     f"large t {large.fitted_exponent:.4f} (pred -1/2), {elapsed:.1f}s")
    assert ok


def test_criterion_04_spatial_sharpness(criterion):
    phase = ph.pure_power(4)
    pred = -en.mu(1, 4, 0)
    assert pred == F(-1, 3)
    out = []
    for t in (1e-2, 1.0):
        z = np.geomspace(10, 1e3, 40)
        pts = [(t, t ** 0.25 * zi) for zi in z]
        s = oi.evaluate_many(phase, ONE, pts, threads=THREADS)
        out.append(fc.fit_space_decay(s, pred, 4))
    ok = all(r.passed for r in out)
    criterion(4, ok, ", ".join(f"t={t:g}: {r.fitted_exponent:.4f}" for t, r in zip((1e-2, 1.0), out))
              + " (pred -1/3)")
    assert ok


def test_criterion_05_envelope_domination(criterion):
    phases = {"|xi|^4+|xi|^2": ph.power_sum([(1, 4), (1, 2)], 1),
              "|xi|^3": ph.pure_power(3),
              "|xi|^2+|xi|^3": ph.power_sum([(1, 2), (1, 3)], 1),
              "|xi|^2.5": ph.pure_power(2.5)}
    start = time.perf_counter()
    parts, ok = [], True
    for name, phase in phases.items():
        env = en.theorem31_envelope(phase, ONE)
        g1 = cli.domination_grid((1e-3, 1e3), (1e-3, 1e4), 32, 1)
        g2 = cli.domination_grid((1e-3, 1e3), (1e-3, 1e4), 64, 1)
        s1 = oi.evaluate_many(phase, ONE, g1, threads=THREADS)
        s2 = oi.evaluate_many(phase, ONE, g2, threads=THREADS)
        res = fc.check_domination(s1, env, s2)
        ok &= res.stable and res.covered
        parts.append(f"{name} C={res.C_fit:.3f}/{res.C_refined:.3f}")
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 900
    criterion(5, ok, "; ".join(parts) + f", {elapsed:.0f}s")
    assert ok


def test_criterion_06_exponent_algebra(criterion):
    rnd = random.Random(6)
    checks = failures = 0

    def check(cond):
        nonlocal checks, failures
        checks += 1
        failures += not cond

    def rat(lo, hi, den=12):
        return F(rnd.randint(int(lo * den), int(hi * den)), den)

    for _ in range(80):
        n, m, b = rnd.randint(1, 6), rat(1.25, 8), rat(-3, 6)
        check(en.mu(n, m, b) == mu_rational(n, m, b))
    for _ in range(80):
        n, m = rnd.randint(1, 5), rat(2, 7, 6)
        b = F(n) * (m - 2) / 2 * F(rnd.randint(0, 8), 8)
        r = en.quadrangle(n, m, b)
        check({(1 - y, 1 - x) for x, y in r.vertices} == set(r.vertices))
        x, y = F(rnd.randint(1, 20), 20), F(rnd.randint(0, 19), 20)
        p, q = en.from_recip(x), en.from_recip(y)
        check(en.contains(r, p, q) == en.contains(r, en.from_recip(1 - y), en.from_recip(1 - x)))
    for n in range(1, 21):
        r = en.quadrangle(n, 2, 0)
        check(r.p0 == 2 and r.p1 == 1 and r.hull() == [(F(1, 2), F(1, 2)), (F(1), F(0))])
    rng3 = en.strichartz_pairs(3, 2, 0)
    check(rng3.p_min == en.from_recip(1 - 1 / en.quadrangle(3, 2, 0).p0) == 2)
    check(rng3.q_of(rng3.p_min) == INF)
    for _ in range(40):
        alpha = F(rnd.randint(51, 500), 50)
        c = (2 * alpha - 1) / alpha
        at = en.r_interval(alpha, c)
        check((at.lo, at.hi) == (c, (2 * alpha - 1) * c / (alpha * (2 - c))))
    ok = failures == 0 and checks >= 200
    criterion(6, ok, f"{checks} exact checks, {failures} failures")
    assert ok


def test_criterion_07_propagator_invariants(criterion):
    quart = ph.pure_power(4)
    u = pr.gaussian(1, 2048, 64.0, width=0.7, k0=1.0)
    unit = max(abs(pr.lp_norm(pr.evolve(quart, None, u, t), 2) / pr.lp_norm(u, 2) - 1)
               for t in (0.1, 1.0, 10.0))
    a = pr.evolve(quart, None, pr.evolve(quart, None, u, 0.7), 1.1)
    b = pr.evolve(quart, None, u, 1.8)
    group = float(np.max(np.abs(a.values - b.values)))
    schro = ph.pure_power(2)
    L, P = 1024.0, 2 ** 17
    probes = [pr.gaussian(1, P, L, w) for w in (0.1, 0.2, 0.4)]
    ts = np.geomspace(0.5, 8, 12)
    rs = [pr.operator_ratio(schro, None, 1, INF, t, probes, threads=THREADS) for t in ts]
    slope, *_ = fc._linfit(np.log(ts), np.log([r.value for r in rs]))
    alias = any(r.aliasing for r in rs)
    ok = unit <= 1e-12 and group <= 1e-10 and abs(slope + 0.5) <= 0.1 and not alias
    criterion(7, ok, f"unitarity {unit:.1e}, group law {group:.1e}, L1->Linf slope {slope:.4f} "
                     f"(pred -1/2)")
    assert ok


def test_criterion_08_lp_lq_two_regime(criterion, tmp_path):
    code = cli.run(cli.load_config(cli.bundled_config("lp_lq_ratio.json")), str(tmp_path), THREADS)
    fits = json.loads((tmp_path / "fits.json").read_text())
    region = en.quadrangle(1, 4, 0)
    parts, ok = [], code == 0
    for f, w in zip(fits, [(0.01, 0.1), (1, 10)]):
        pred = -en.lp_lq_rate(region, 1, INF, math.sqrt(w[0] * w[1]))
        ok &= F(f["predicted_exponent"]) == pred and not f["flags"]
        ok &= abs(f["fitted_exponent"] - float(pred)) <= 0.1
        parts.append(f"t in {list(w)}: {f['fitted_exponent']:.4f} (pred {pred})")
    ok &= abs(fits[0]["fitted_exponent"] + 0.25) <= 0.1
    criterion(8, ok, "; ".join(parts))
    assert ok


def test_criterion_09_strichartz(criterion):
    rng = en.strichartz_pairs(1, 4, 0)
    p, q = rng.sample(4)[-1]
    assert (p, q) == (8, F(32, 3)) and rng.admissible(p)
    assert rng.q_of(8) != 1
    phase = ph.pure_power(4)
    u0 = pr.gaussian(1, 8192, 2048.0, width=2.0)
    good = pr.strichartz_norm(phase, u0, float(p), float(q), 8, 256)
    bad = pr.strichartz_norm(phase, u0, 8.0, 1.0, 8, 256)
    ok = good.delta < 0.2 and bad.delta > 0.2
    criterion(9, ok, f"admissible (8, 32/3) delta {good.delta:.4f}; control (8, 1) delta {bad.delta:.4f}")
    assert ok


def test_criterion_10_determinism(criterion, tmp_path):
    names = sorted(f for f in os.listdir(os.path.dirname(cli.bundled_config("x")))
                   if f.endswith(".json"))
    same = []
    for name in names:
        cfg = cli.load_config(cli.bundled_config(name))
        d1, d2 = tmp_path / name / "a", tmp_path / name / "b"
        c1 = cli.run(cfg, str(d1), THREADS)
        c2 = cli.run(cfg, str(d2), 1)
        files = ["samples.csv", "fits.json", "report.json"]
        _, mismatch, errors = filecmp.cmpfiles(d1, d2, files, shallow=False)
        same.append(c1 == c2 == 0 and not mismatch and not errors)
    ok = all(same) and len(names) >= 7
    criterion(10, ok, f"{sum(same)}/{len(names)} bundled configs byte-identical across runs "
                      f"(threads {THREADS} vs 1)")
    assert ok
