"""Power-law fits of sampled kernels and envelope domination checks."""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .envelope import frac, _jsonable
from .errors import FitError

DEFAULT_TOLERANCE = 0.05
MIN_POINTS = 8
MIN_R2 = 0.9
STABILITY_FACTOR = 2.0


@dataclass(frozen=True)
class ExponentReport:
    """Signed exponents: a decay |t|^-1/4 is reported as -1/4."""

    regime: str
    predicted_exponent: Fraction
    fitted_exponent: float
    stderr: float
    fit_window: tuple
    n_points: int
    tolerance: float = DEFAULT_TOLERANCE
    r2: float = 1.0
    variable: str = "t"
    flags: tuple = ()

    @property
    def verdict(self):
        return ("pass" if self.n_points >= MIN_POINTS and not self.flags
                and abs(self.fitted_exponent - float(self.predicted_exponent)) <= self.tolerance
                and self.stderr <= self.tolerance / 2 else "fail")

    @property
    def passed(self):
        return self.verdict == "pass"

    def at_tolerance(self, tolerance):
        return ExponentReport(self.regime, self.predicted_exponent, self.fitted_exponent,
                              self.stderr, self.fit_window, self.n_points, tolerance,
                              self.r2, self.variable, self.flags)

    def to_dict(self):
        return {"regime": self.regime, "variable": self.variable,
                "predicted_exponent": _jsonable(self.predicted_exponent),
                "fitted_exponent": self.fitted_exponent, "stderr": self.stderr,
                "fit_window": list(self.fit_window), "n_points": self.n_points,
                "tolerance": self.tolerance, "r2": self.r2, "flags": list(self.flags),
                "verdict": self.verdict}


def _abs_values(samples):
    return np.array([abs(s.value) for s in samples], dtype=float)


def _linfit(u, v):
    """Least-squares slope of v on u with its standard error and R^2."""
    n = u.size
    um, vm = u.mean(), v.mean()
    sxx = float(np.sum((u - um) ** 2))
    if sxx == 0:
        raise FitError("swept variable is constant")
    slope = float(np.sum((u - um) * (v - vm)) / sxx)
    res = v - vm - slope * (u - um)
    ssr = float(np.sum(res ** 2))
    sst = float(np.sum((v - vm) ** 2))
    stderr = math.sqrt(ssr / (n - 2) / sxx) if n > 2 else math.inf
    # a flat, noise-free response has no variance to explain
    r2 = 1.0 if sst <= 1e-24 * max(1.0, n) else 1.0 - ssr / sst
    return slope, stderr, r2


def local_maxima(values):
    """Indices of the upper envelope used for fitting.

    Interior samples not smaller than both neighbours are kept. When fewer
    than ``MIN_POINTS`` such peaks exist the sequence is not oscillating on
    the sampled scale and every index is returned.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return np.arange(v.size)
    inner = np.nonzero((v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:]))[0] + 1
    # drop plateaus of a monotone run: a peak must exceed at least one neighbour
    inner = inner[(v[inner] > v[inner - 1]) | (v[inner] > v[inner + 1])]
    if inner.size < MIN_POINTS:
        return np.arange(v.size)
    return inner


def _report(regime, predicted, u, a, window, tolerance, variable, flags=()):
    if u.size < MIN_POINTS:
        raise FitError(f"need at least {MIN_POINTS} points, got {u.size}")
    if np.any(a <= 0) or not np.all(np.isfinite(a)):
        raise FitError("magnitudes must be positive and finite for a log fit")
    slope, stderr, r2 = _linfit(u, np.log(a))
    flags = tuple(flags)
    if r2 < MIN_R2:
        flags += ("oscillation_dominated",)
    return ExponentReport(regime, frac(predicted), slope, stderr, window, int(u.size),
                          float(tolerance), r2, variable, flags)


def fit_time_decay(samples, predicted, regime="", tolerance=DEFAULT_TOLERANCE,
                   envelope=False, min_decades=2.0):
    """Slope of log|I| against log|t| for samples taken at a fixed x-regime.

    ``predicted`` is the signed exponent. ``envelope=True`` fits the
    local-maximum envelope instead of every sample.
    """
    samples = sorted(samples, key=lambda s: abs(s.t))
    t = np.array([abs(s.t) for s in samples])
    if t.size == 0:
        raise FitError("no samples")
    span = math.log10(t[-1] / t[0]) if t[0] > 0 else 0.0
    if span < min_decades - 1e-9:
        raise FitError(f"samples span {span:.3g} decades of |t|, need {min_decades}")
    a = _abs_values(samples)
    idx = local_maxima(a) if envelope else np.arange(a.size)
    return _report(regime, predicted, np.log(t[idx]), a[idx], (float(t[0]), float(t[-1])),
                   tolerance, "t")


def fit_space_decay(samples, predicted, m, regime="", tolerance=DEFAULT_TOLERANCE,
                    min_decades=1.0):
    """Slope of the local-maximum envelope of log|I| against log(1+|t|^{-1/m}|x|).

    All samples must share one t. A poor straight-line fit (R^2 < 0.9) is
    reported through the ``oscillation_dominated`` flag and fails.
    """
    if not samples:
        raise FitError("no samples")
    ts = {s.t for s in samples}
    if len(ts) != 1:
        raise FitError("spatial fits need a single fixed t")
    t = abs(samples[0].t)
    r = np.array([float(np.linalg.norm(s.x)) for s in samples])
    order = np.argsort(r, kind="stable")
    samples = [samples[i] for i in order]
    z = 1 + t ** (-1.0 / float(m)) * r[order]
    span = math.log10(z[-1] / z[0])
    if span < min_decades - 1e-9:
        raise FitError(f"samples span {span:.3g} decades of the scaled radius, need {min_decades}")
    a = _abs_values(samples)
    idx = local_maxima(a)
    return _report(regime, predicted, np.log(z[idx]), a[idx], (float(z[0] - 1), float(z[-1] - 1)),
                   tolerance, "scaled_x")


@dataclass(frozen=True)
class DominationResult:
    C_fit: float
    stable: bool
    C_refined: float = None
    argmax: tuple = None
    flagged: tuple = ()
    coverage: dict = field(default_factory=dict)
    min_coverage: int = 16

    @property
    def covered(self):
        return bool(self.coverage) and min(self.coverage.values()) >= self.min_coverage

    def to_dict(self):
        return {"C_fit": self.C_fit, "C_refined": self.C_refined, "stable": self.stable,
                "argmax": list(self.argmax) if self.argmax else None,
                "flagged": list(self.flagged), "coverage": self.coverage,
                "covered": self.covered}


def _ratios(samples, envelope):
    t = np.array([s.t for s in samples], dtype=float)
    r = np.array([float(np.linalg.norm(s.x)) for s in samples])
    a = _abs_values(samples)
    e = np.asarray(envelope(t, r), dtype=float)
    return a / e, envelope.piece_index(t, r)


def check_domination(samples, envelope, refined_samples=None, min_coverage=16):
    """C_fit = max |I|/E over the samples, with a refinement stability check.

    ``stable`` is true when ``refined_samples`` (typically the same window
    sampled twice as densely) give a C_fit within a factor 2; without a
    refined set the check cannot be made and ``stable`` is False.
    Samples whose est_error exceeds 10% of |I| are listed in ``flagged``.
    """
    if not samples:
        raise FitError("no samples")
    ratio, idx = _ratios(samples, envelope)
    k = int(np.argmax(ratio))
    C = float(ratio[k])
    names = [p.regime for p in envelope.pieces]
    coverage = {nm: int(np.sum(idx == i)) for i, nm in enumerate(names)}
    flagged = tuple(i for i, s in enumerate(samples) if s.est_error > 0.1 * abs(s.value))
    C_ref = None
    stable = False
    if refined_samples:
        C_ref = float(np.max(_ratios(refined_samples, envelope)[0]))
        stable = bool(max(C_ref, C) < STABILITY_FACTOR * min(C_ref, C))
    return DominationResult(C, stable, C_ref, (samples[k].t, float(np.linalg.norm(samples[k].x))),
                            flagged, coverage, min_coverage)
