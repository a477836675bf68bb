"""Config-driven experiment runner.

Usage: ``oscdecay --config exp.json --out results/ [--threads N] [--verbose]``.
Writes samples.csv, fits.json and report.json. Exit status: 0 all verdicts
pass, 2 invalid config, 3 hypothesis violation, 4 numerical failure,
5 a verdict failed.
"""

import argparse
import csv
import io
import json
import logging
import math
import os
import shutil
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import envelope as en, fitcheck as fc, oscint as oi, phase as ph, propagator as pr
from . import symbol as sy
from .errors import (BudgetError, ConfigError, FitError, HypothesisError, NonConvergenceError,
                     OscDecayError, RegionError, ResolutionError)

log = logging.getLogger("oscdecay")

KINDS = ("pointwise_decay", "envelope_domination", "lp_lq_ratio", "strichartz",
         "region_report", "ellipticity_audit")
EXIT_OK, EXIT_CONFIG, EXIT_HYPOTHESIS, EXIT_NUMERIC, EXIT_VERDICT = 0, 2, 3, 4, 5
MAX_POINTS = 2 ** 20


# ----------------------------------------------------------------- parsing

def _num(v, name):
    """Float from a number, "inf" or a rational string such as "32/3"."""
    if isinstance(v, bool):
        raise ConfigError(f"{name} must be a number")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "infinity"):
            return math.inf
        try:
            return float(Fraction(v))
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"{name} must be a number, got {v!r}")


def _exponent(v, name):
    """Lebesgue exponent as Fraction or inf."""
    x = _num(v, name)
    if x == math.inf:
        return en.INF
    if not x >= 1:
        raise ConfigError(f"{name} must be >= 1")
    return Fraction(v) if isinstance(v, str) else en.frac(v)


def _range(v, name, positive=True):
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ConfigError(f"{name} must be a [lo, hi] pair")
    lo, hi = _num(v[0], name), _num(v[1], name)
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi or (positive and lo <= 0):
        raise ConfigError(f"{name} must satisfy 0 < lo < hi")
    return lo, hi


def _count(v, name, minimum=1):
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}")
    return v


def _need(d, key, where):
    if key not in d:
        raise ConfigError(f"missing {where}.{key}")
    return d[key]


def _pow2(v, name):
    v = _count(v, name, 2)
    if v & (v - 1) or v > MAX_POINTS:
        raise ConfigError(f"{name} must be a power of two <= {MAX_POINTS}")
    return v


def _specs(cfg):
    try:
        phase = ph.from_dict(_need(cfg, "phase", "config"))
        sym = sy.from_dict(cfg.get("symbol", {"kind": "constant_one"}))
        sym.check_dimension(phase.dimension)
    except (KeyError, TypeError) as e:
        raise ConfigError(f"malformed phase or symbol: {e}") from None
    return phase, sym


def _predicted(v):
    if v is None:
        return None
    try:
        return Fraction(v) if isinstance(v, str) else en.frac(v)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"predicted exponent {v!r} is not rational") from None


def validate(cfg):
    """Check the whole config and return a normalized plan; raises ConfigError."""
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    kind = cfg.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"kind must be one of {', '.join(KINDS)}")
    seed = cfg.get("seed", 0)
    _count(seed, "seed", 0)
    tol = cfg.get("tolerances", {})
    if not isinstance(tol, dict):
        raise ConfigError("tolerances must be an object")
    plan = {"kind": kind, "seed": seed, "exponent_tol": _num(tol.get("exponent", 0.05), "tolerances.exponent")}
    samp = cfg.get("sampling")
    needs_sampling = kind not in ("region_report", "ellipticity_audit")
    if needs_sampling and not samp:
        raise ConfigError("sampling plan is empty")
    samp = samp or {}
    if not isinstance(samp, dict):
        raise ConfigError("sampling must be an object")
    if kind == "region_report":
        r = _need(cfg, "region", "config")
        plan["region"] = {"n": _count(_need(r, "n", "region"), "region.n"),
                          "m2": _predicted(_need(r, "m2", "region")),
                          "b": _predicted(r.get("b", 0)),
                          "m1": _predicted(r.get("m1"))}
        plan["pairs"] = [(_exponent(p, "pair p"), _exponent(q, "pair q")) for p, q in r.get("pairs", [])]
        fs = r.get("frac_schrodinger")
        plan["frac_schrodinger"] = None if fs is None else (
            _predicted(_need(fs, "alpha", "frac_schrodinger")), _predicted(_need(fs, "p", "frac_schrodinger")))
        return plan
    phase, sym = _specs(cfg)
    plan.update(phase=phase, sym=sym)
    method = cfg.get("method")
    if method is not None and method not in oi.METHODS:
        raise ConfigError(f"method must be one of {', '.join(oi.METHODS)}")
    plan["method"] = method
    if kind == "ellipticity_audit":
        plan["shell_samples"] = _count(cfg.get("shell_samples", 32), "shell_samples", 2)
        plan["decades"] = _count(cfg.get("decades", 6), "decades", 1)
        return plan
    if kind == "pointwise_decay":
        fits = []
        for i, f in enumerate(samp.get("time_fits", [])):
            w = f"sampling.time_fits[{i}]"
            regime = _need(f, "regime", w)
            if regime not in ("small_t", "large_t_inner") and f.get("predicted") is None:
                raise ConfigError(f"{w}: unknown regime {regime!r} needs an explicit predicted exponent")
            fits.append({"type": "time", "regime": regime, "range": _range(_need(f, "t_range", w), w),
                         "points": _count(f.get("points", 24), w + ".points", fc.MIN_POINTS),
                         "x": f.get("x", 0.0), "predicted": _predicted(f.get("predicted"))})
        for i, f in enumerate(samp.get("space_fits", [])):
            w = f"sampling.space_fits[{i}]"
            t = _num(_need(f, "t", w), w + ".t")
            if t == 0 or not math.isfinite(t):
                raise ConfigError(f"{w}.t must be finite and nonzero")
            side = f.get("side", 1)
            if side not in (1, -1):
                raise ConfigError(f"{w}.side must be 1 or -1")
            spacing = f.get("spacing", "log")
            if spacing not in ("log", "linear"):
                raise ConfigError(f"{w}.spacing must be 'log' or 'linear'")
            fits.append({"type": "space", "regime": f.get("regime", "spatial"), "t": t, "side": side,
                         "range": _range(_need(f, "scaled_x_range", w), w),
                         "points": _count(f.get("points", 40), w + ".points", fc.MIN_POINTS),
                         "spacing": spacing, "predicted": _predicted(f.get("predicted"))})
        if not fits:
            raise ConfigError("sampling plan is empty")
        plan["fits"] = fits
    elif kind == "envelope_domination":
        plan["t_range"] = _range(_need(samp, "t_range", "sampling"), "sampling.t_range")
        plan["x_range"] = _range(_need(samp, "x_range", "sampling"), "sampling.x_range")
        plan["points"] = _count(_need(samp, "points", "sampling"), "sampling.points", 2)
        plan["refine"] = _count(samp.get("refine", 2), "sampling.refine", 2)
        plan["t0"] = _predicted(cfg.get("t0", 1))
        plan["N"] = _predicted(cfg.get("N", 1))
    elif kind == "lp_lq_ratio":
        plan["p"] = _exponent(samp.get("p", 1), "sampling.p")
        plan["q"] = _exponent(samp.get("q", "inf"), "sampling.q")
        wins = _need(samp, "t_windows", "sampling")
        if not wins:
            raise ConfigError("sampling.t_windows is empty")
        plan["windows"] = [_range(w, "sampling.t_windows[]") for w in wins]
        plan["times"] = _count(samp.get("times_per_window", 8), "sampling.times_per_window", 3)
        probe = samp.get("probe", "spike")
        if probe not in ("spike", "default"):
            raise ConfigError("sampling.probe must be 'spike' or 'default'")
        plan["probe"] = probe
        plan["kmax_factor"] = _num(samp.get("kmax_factor", 8), "sampling.kmax_factor")
        plan["max_points"] = _pow2(samp.get("max_points", 2 ** 17), "sampling.max_points")
        plan["tolerance"] = _num(samp.get("tolerance", 0.1), "sampling.tolerance")
    elif kind == "strichartz":
        pairs = [(_exponent(p, "pair p"), _exponent(q, "pair q")) for p, q in samp.get("pairs", [])]
        controls = [(_exponent(p, "control p"), _exponent(q, "control q"))
                    for p, q in samp.get("controls", [])]
        if not pairs and not samp.get("admissible_count"):
            raise ConfigError("sampling needs pairs or admissible_count")
        plan["pairs"], plan["controls"] = pairs, controls
        plan["admissible_count"] = _count(samp.get("admissible_count", 0), "sampling.admissible_count", 0)
        plan["T"] = _num(samp.get("T", 8), "sampling.T")
        plan["time_steps"] = _count(samp.get("time_steps", 256), "sampling.time_steps")
        plan["points"] = _pow2(samp.get("points", 2 ** 14), "sampling.points")
        plan["half_width"] = _num(samp.get("half_width", 2048), "sampling.half_width")
        plan["width"] = _num(samp.get("width", 2.0), "sampling.width")
        plan["threshold"] = _num(samp.get("threshold", 0.2), "sampling.threshold")
        if phase.dimension != 1:
            raise ConfigError("strichartz experiments are one-dimensional")
    return plan


# ---------------------------------------------------------------- running

def _sample_row(s):
    return [repr(float(s.t))] + [repr(float(v)) for v in s.x] + [
        repr(s.value.real), repr(s.value.imag), repr(abs(s.value)), s.method,
        "" if s.epsilon is None else repr(float(s.epsilon)), repr(float(s.est_error))]


def _run_pointwise(plan, threads):
    phase, sym = plan["phase"], plan["sym"]
    n = phase.dimension
    envp = en.theorem31_envelope(phase, sym)
    samples, fits = [], []
    for f in plan["fits"]:
        if f["type"] == "time":
            ts = np.geomspace(*f["range"], f["points"])
            x = np.broadcast_to(np.asarray(f["x"], dtype=float), (n,)).copy()
            pred = f["predicted"]
            if pred is None:
                b, m = (sym.b2, phase.m2) if f["regime"] == "small_t" else (sym.b1, phase.m1)
                pred = -(n + en.frac(b)) / en.frac(m)
            got = oi.evaluate_many(phase, sym, [(t, x) for t in ts], plan["method"], threads)
            fits.append(fc.fit_time_decay(got, pred, f["regime"], plan["exponent_tol"]))
        else:
            lo, hi = f["range"]
            z = (np.geomspace(lo, hi, f["points"]) if f["spacing"] == "log"
                 else np.linspace(lo, hi, f["points"]))
            m = phase.m2
            r = abs(f["t"]) ** (1.0 / m) * z * f["side"]
            e1 = np.zeros(n)
            e1[0] = 1.0
            pred = f["predicted"]
            if pred is None:
                pred = -en.mu(n, en.frac(m), en.frac(sym.b2))
            got = oi.evaluate_many(phase, sym, [(f["t"], ri * e1) for ri in r], plan["method"], threads)
            fits.append(fc.fit_space_decay(got, pred, m, f["regime"], plan["exponent_tol"]))
        samples += got
    verdicts = [{"name": f"{r.variable}:{r.regime}", "verdict": r.verdict} for r in fits]
    return samples, fits, verdicts, {"envelope": envp.to_dict()}


def domination_grid(t_range, x_range, points, n):
    """Log grid in (t, |x|) along the first axis, plus x = 0 for each t."""
    ts = np.geomspace(*t_range, points)
    xs = np.concatenate([[0.0], np.geomspace(*x_range, points - 1)])
    out = []
    for t in ts:
        for r in xs:
            x = np.zeros(n)
            x[0] = r
            out.append((float(t), x))
    return out


def _run_domination(plan, threads):
    phase, sym = plan["phase"], plan["sym"]
    envp = en.theorem31_envelope(phase, sym, plan["t0"], plan["N"])
    n = phase.dimension
    pts = domination_grid(plan["t_range"], plan["x_range"], plan["points"], n)
    pts2 = domination_grid(plan["t_range"], plan["x_range"], plan["refine"] * plan["points"], n)
    s1 = oi.evaluate_many(phase, sym, pts, plan["method"], threads)
    s2 = oi.evaluate_many(phase, sym, pts2, plan["method"], threads)
    res = fc.check_domination(s1, envp, s2)
    ok = res.stable and res.covered
    extra = {"envelope": envp.to_dict(), "domination": res.to_dict()}
    return s1 + s2, [], [{"name": "domination", "verdict": "pass" if ok else "fail"}], extra


def _lp_lq_grid(phase, window, kmax_factor, max_points):
    """Box and resolution for a point-mass probe over a time window."""
    tmin, tmax = window
    m2 = phase.m2
    kmax = kmax_factor * tmin ** (-1.0 / m2)
    # the spike is filtered at kmax/3, so the box must hold speeds up to a'(kmax)
    f, fp, _ = ph.radial_profile(phase)
    L = 1.2 * float(fp(kmax)) * tmax
    dx = math.pi / kmax
    points = 1 << max(4, math.ceil(math.log2(2 * L / dx)))
    if points > max_points:
        raise HypothesisError(f"window {window} needs {points} grid points, above {max_points}")
    return points, L, kmax / 3


def _run_lp_lq(plan, threads):
    phase, sym = plan["phase"], plan["sym"]
    if phase.dimension != 1:
        raise HypothesisError("lp_lq_ratio runs are one-dimensional")
    region = en.quadrangle(1, phase.m2, sym.b2, phase.m1)
    wsym = None if sym.kind == "constant_one" else sym
    rows, fits, curves = [], [], []
    for w in plan["windows"]:
        points, L, kc = _lp_lq_grid(phase, w, plan["kmax_factor"], plan["max_points"])
        probes = ([pr.band_limited_spike(1, points, L, kc)] if plan["probe"] == "spike"
                  else pr.default_probes(1, points, L, plan["seed"]))
        ts = np.geomspace(*w, plan["times"])
        rs = [pr.operator_ratio(phase, wsym, float(plan["p"]), float(plan["q"]), t, probes, threads)
              for t in ts]
        pred = -en.lp_lq_rate(region, plan["p"], plan["q"], float(np.sqrt(w[0] * w[1])), phase, sym)
        slope, stderr, r2 = fc._linfit(np.log(ts), np.log([r.value for r in rs]))
        rep = fc.ExponentReport(f"t in [{w[0]:g}, {w[1]:g}]", pred, slope, stderr,
                                (float(w[0]), float(w[1])), len(ts), plan["tolerance"], r2, "t",
                                ("aliasing",) if any(r.aliasing for r in rs) else ())
        fits.append(rep)
        curves.append({"window": list(w), "points": points, "half_width": L,
                       "ratios": [r.value for r in rs], "label": "lower bound"})
        for t, r in zip(ts, rs):
            rows.append([repr(float(t)), "0.0", repr(r.value), "0.0", repr(r.value),
                         "operator_ratio", "", ""])
    verdicts = [{"name": f"ratio:{r.regime}", "verdict": r.verdict} for r in fits]
    extra = {"region": region.to_dict(), "curves": curves,
             "prediction": en.lp_lq_prediction(region, plan["p"], plan["q"]).to_dict()}
    return rows, fits, verdicts, extra


def _run_strichartz(plan, threads):
    phase, sym = plan["phase"], plan["sym"]
    b = en.frac(sym.b2)
    rng = en.strichartz_pairs(1, phase.m2, b, phase.m1)
    pairs = list(plan["pairs"])
    if plan["admissible_count"]:
        pairs += [pq for pq in rng.sample(plan["admissible_count"] + 1)[1:]]
    for p, q in pairs:
        if not rng.admissible(p) or rng.q_of(p) != q:
            raise RegionError(f"pair (p, q) = ({p}, {q}) is not admissible")
    u0 = pr.gaussian(1, plan["points"], plan["half_width"], plan["width"])
    results, verdicts, rows = [], [], []
    for role, group in (("admissible", pairs), ("control", plan["controls"])):
        for p, q in group:
            r = pr.strichartz_norm(phase, u0, float(p), float(q), plan["T"], plan["time_steps"],
                                   float(b), plan["threshold"])
            ok = (not r.unstable) if role == "admissible" else r.unstable
            name = f"{role}:p={en._jsonable(p)},q={en._jsonable(q)}"
            verdicts.append({"name": name, "verdict": "pass" if ok else "fail"})
            results.append({"role": role, "p": en._jsonable(p), "q": en._jsonable(q),
                            "value": r.value, "value_doubled": r.value_doubled, "delta": r.delta,
                            "unstable": r.unstable, "window": r.window})
            rows.append([repr(r.window), "0.0", repr(r.value), "0.0", repr(r.value),
                         f"strichartz {name}", "", repr(r.delta)])
    return rows, [], verdicts, {"strichartz_range": rng.to_dict(), "results": results}


def _run_region(plan, threads):
    r = plan["region"]
    region = en.quadrangle(r["n"], r["m2"], r["b"], r["m1"])
    extra = {"region": region.to_dict()}
    try:
        extra["strichartz_range"] = en.strichartz_pairs(r["n"], r["m2"], r["b"], r["m1"]).to_dict()
    except RegionError as e:
        extra["strichartz_range"] = {"empty": True, "reason": str(e)}
    preds = []
    for p, q in plan["pairs"]:
        pos = en.classify(region, p, q)
        entry = {"p": en._jsonable(p), "q": en._jsonable(q), "position": pos}
        if pos != "outside":
            entry["prediction"] = en.lp_lq_prediction(region, p, q).to_dict()
        preds.append(entry)
    extra["pairs"] = preds
    if plan["frac_schrodinger"]:
        extra["frac_schrodinger"] = en.frac_schrodinger_region(r["n"], *plan["frac_schrodinger"]).to_dict()
    return [], [], [], extra


def _run_ellipticity(plan, threads):
    rep = ph.verify_ellipticity(plan["phase"], plan["shell_samples"], plan["decades"])
    extra = {"ellipticity": {"holds": rep.holds, "violations": [str(v) for v in rep.violations],
                             "constants": rep.spec.ellipticity.to_dict()}}
    return [], [], [{"name": "ellipticity", "verdict": "pass" if rep.holds else "fail"}], extra


RUNNERS = {"pointwise_decay": _run_pointwise, "envelope_domination": _run_domination,
           "lp_lq_ratio": _run_lp_lq, "strichartz": _run_strichartz,
           "region_report": _run_region, "ellipticity_audit": _run_ellipticity}


def _csv_text(rows, n):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"x_{i + 1}" for i in range(n)] +
               ["re", "im", "abs", "method", "epsilon", "est_error"])
    for row in rows:
        w.writerow(_sample_row(row) if isinstance(row, oi.KernelSample) else row)
    return buf.getvalue()


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def run(config, out_dir, threads=1):
    """Validate, run and write artifacts. Returns the exit status."""
    plan = validate(config)
    rows, fits, verdicts, extra = RUNNERS[plan["kind"]](plan, threads)
    n = plan["phase"].dimension if "phase" in plan else 1
    passed = all(v["verdict"] == "pass" for v in verdicts)
    report = {"kind": plan["kind"], "seed": plan["seed"], "config": config,
              "verdicts": verdicts, "passed": passed, **extra}
    if "phase" in plan:
        report["phase"] = plan["phase"].to_dict()
        report["symbol"] = plan["sym"].to_dict()
    files = {"samples.csv": _csv_text(rows, n),
             "fits.json": _dump([f.to_dict() for f in fits]),
             "report.json": _dump(report)}
    os.makedirs(out_dir, exist_ok=True)
    tmp = tempfile.mkdtemp(prefix=".partial-", dir=out_dir)
    try:
        for name, text in files.items():
            with open(os.path.join(tmp, name), "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        for name in files:
            os.replace(os.path.join(tmp, name), os.path.join(out_dir, name))
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
    return EXIT_OK if passed else EXIT_VERDICT


def exit_code(err):
    if isinstance(err, ConfigError):
        return EXIT_CONFIG
    if isinstance(err, (HypothesisError, RegionError)):
        return EXIT_HYPOTHESIS
    if isinstance(err, (NonConvergenceError, ResolutionError, BudgetError, FitError)):
        return EXIT_NUMERIC
    return EXIT_NUMERIC


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from None


def bundled_config(name):
    """Path of a config shipped with the package (for example 'theorem11.json')."""
    return os.path.join(os.path.dirname(__file__), "configs", name)


def main(argv=None):
    ap = argparse.ArgumentParser(prog="oscdecay", description="Run a decay experiment from a JSON config.")
    ap.add_argument("--config", required=True, help="experiment JSON; a bare name loads a bundled config")
    ap.add_argument("--out", default="oscdecay-out", help="output directory")
    ap.add_argument("--threads", type=int, default=1, help="worker threads, 0 = one per CPU")
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    threads = args.threads if args.threads > 0 else (os.cpu_count() or 1)
    path = args.config
    if not os.path.exists(path) and os.path.exists(bundled_config(path)):
        path = bundled_config(path)
    try:
        code = run(load_config(path), args.out, threads)
    except OscDecayError as e:
        print(f"oscdecay: {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code(e)
    log.info("wrote artifacts to %s", args.out)
    if code == EXIT_VERDICT:
        print("oscdecay: at least one verdict failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
