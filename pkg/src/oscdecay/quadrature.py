"""Panel quadrature for oscillatory half-line integrals.

The integrals handled here have the form ``int_{u0}^inf exp(i Phi(u)) g(u) du``
with ``Phi(u) = t f(u) + c u``. Two routes are provided.

* Contour route: the half-line is deformed into a connector, a short
  straight segment through each real stationary point along its
  steepest-descent direction, and a ray on which ``exp(i Phi)`` decays
  super-exponentially. Requires f and g analytic near the positive axis.
* Real-axis route: Gauss-Legendre panels of bounded phase increment up to
  a truncation radius plus an integration-by-parts tail correction.

Both report the panel refinement delta (20 vs 10 nodes) plus the bounds on
discarded pieces as the error estimate.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonConvergenceError
from . import kernels

PANEL_PHASE = math.pi / 2
MAX_PANELS = 200_000


@lru_cache(maxsize=None)
def gauss_legendre(q):
    x, w = np.polynomial.legendre.leggauss(q)
    return x, w


@dataclass
class HalfLine:
    """Phase ``t f(u) + c u`` and amplitude ``g(u)`` on ``[u0, inf)``.

    ``fns`` is ``(f, fp, fpp)``; ``lead`` is ``(coef, order)`` with
    ``f(u) ~ coef u^order`` for large u, needed by the contour route.
    ``freq`` adds a known oscillation rate of g to the panel sizing, and
    ``scale`` is a characteristic length used to place samples.
    """

    t: float
    c: float
    fns: tuple
    amp: object
    lead: tuple = None
    u0: float = 0.0
    freq: float = 0.0
    scale: float = 1.0

    def phase(self, u):
        f, fp, fpp = self.fns
        u = np.asarray(u)
        return (self.t * f(u) + self.c * u, self.t * fp(u) + self.c, self.t * fpp(u))


@dataclass
class Segment:
    start: complex
    end: complex = None        # None marks a ray
    direction: complex = None  # ray direction
    graded: bool = False       # geometric refinement toward start


def stationary_points(hl, lo=1e-6, hi=1e6, per_decade=512):
    """Real roots of Phi' on (u0, hi], bracketed on a log grid then bisected."""
    lo = max(lo, hl.u0 * (1 + 1e-9)) if hl.u0 > 0 else lo
    if lo >= hi:
        return []
    num = max(8, int(per_decade * math.log10(hi / lo)) + 1)
    grid = np.geomspace(lo, hi, num)
    dp = np.real(hl.phase(grid)[1])
    sgn = np.sign(dp)
    idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    roots = []
    for i in idx:
        a, b = grid[i], grid[i + 1]
        fa = dp[i]
        for _ in range(200):
            m = 0.5 * (a + b)
            fm = float(np.real(hl.phase(np.array([m]))[1][0]))
            if fm == 0 or (b - a) <= 4e-16 * m:
                break
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    roots += [float(u) for u in grid[np.nonzero(dp == 0)[0]]]
    return sorted(roots)


def _sample_params(length, graded):
    k = np.arange(2049)
    s = np.concatenate([np.linspace(0.0, length, 2049),
                        0.5 * length * (1 - np.cos(np.pi * k / 2048))])
    if graded:
        s = np.concatenate([s, length * np.logspace(-15, 0, 301)])
    return np.unique(s)


class _SampledSegment:
    def __init__(self, seg, length, hl, grade_floor):
        self.seg = seg
        self.length = length
        self.dir = (seg.end - seg.start) / length if seg.end is not None else seg.direction
        self.s = _sample_params(length, seg.graded)
        z = seg.start + self.dir * self.s
        ph, dph, d2ph = hl.phase(z)
        amp = np.asarray(hl.amp(z), dtype=complex)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            self.logmag = -np.imag(ph) + np.log(np.abs(amp))
        self.logmag = np.where(np.isfinite(self.logmag), self.logmag, -np.inf)
        self.refmask = self.s >= grade_floor * length if seg.graded else np.ones(self.s.shape, bool)
        amag = np.abs(amp)
        dam = np.abs(np.diff(amp)) / (np.maximum(np.maximum(amag[1:], amag[:-1]), 1e-300) * np.diff(self.s))
        dam = np.concatenate([dam, dam[-1:]]) if dam.size else np.zeros(1)
        self.w = np.abs(dph) + hl.freq + np.sqrt(np.abs(d2ph)) + dam
        self.w = np.where(np.isfinite(self.w), self.w, 0.0)


def _ray_extent(seg, hl, cut_log):
    """Length after which the integrand on a ray stays below exp(cut_log)."""
    s = hl.scale * np.logspace(-10, 10, 801)
    z = seg.start + seg.direction * s
    ph = hl.phase(z)[0]
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        lm = -np.imag(ph) + np.log(np.abs(np.asarray(hl.amp(z), dtype=complex)))
    lm = np.where(np.isnan(lm), np.where(-np.imag(ph) < -600, -np.inf, np.inf), lm)
    if cut_log is None:
        return None, lm
    above = np.nonzero(lm >= cut_log)[0]
    if above.size == 0:
        return s[0], lm
    last = above[-1]
    if last >= s.size - 2:
        raise NonConvergenceError("integrand does not decay along the ray",
                                  {"start": complex(seg.start), "direction": complex(seg.direction)})
    return s[last + 1], lm


def _breakpoints(s, w, a, b, graded_at_a):
    sel = (s >= a) & (s <= b)
    ss, ww = s[sel], w[sel]
    if ss.size < 2 or ss[0] > a or ss[-1] < b:
        ss = np.concatenate([[a], ss, [b]])
        ww = np.concatenate([[ww[0] if ww.size else 0.0], ww, [ww[-1] if ww.size else 0.0]])
        ss, keep = np.unique(ss, return_index=True)
        ww = ww[keep]
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (ww[1:] + ww[:-1]) * np.diff(ss))])
    npan = max(1, int(math.ceil(cum[-1] / PANEL_PHASE)))
    if npan > MAX_PANELS:
        raise NonConvergenceError("panel budget exceeded", {"panels": npan})
    bp = np.interp(np.linspace(0.0, cum[-1], npan + 1), cum, ss) if cum[-1] > 0 else np.array([a, b])
    bp[0], bp[-1] = a, b
    if graded_at_a:
        first = bp[1] - a
        geo = a + first * 0.15 ** np.arange(1, 24)[::-1]
        bp = np.concatenate([[a], geo, bp[1:]])
    return bp


def integrate_path(segments, hl, tol, prune=1e-3):
    with np.errstate(all="ignore"):
        return _integrate_path(segments, hl, tol, prune)


def _integrate_path(segments, hl, tol, prune):
    """Integrate exp(i Phi) g along a piecewise linear path.

    Returns ``(value, est_error, info)``. Regions where the integrand sits
    below ``tol * prune`` times its peak are skipped and their sampled mass
    is added to the error estimate.
    """
    xg, wg = gauss_legendre(20)
    xc, wc = gauss_legendre(10)
    grade_floor = 1e-6
    # rays: find extent from a coarse log sweep, then treat as finite
    ray_logs = [
        _ray_extent(seg, hl, None)[1] if seg.end is None else None for seg in segments
    ]
    peak = -np.inf
    for seg, lm in zip(segments, ray_logs):
        if lm is not None:
            peak = max(peak, np.max(lm[np.isfinite(lm)], initial=-np.inf))
    sampled = []
    finite = []
    for seg in segments:
        if seg.end is None:
            finite.append(None)
        else:
            length = abs(seg.end - seg.start)
            if length == 0:
                continue
            ss = _SampledSegment(seg, length, hl, grade_floor)
            peak = max(peak, np.max(ss.logmag[ss.refmask], initial=-np.inf))
            finite.append(ss)
    if not np.isfinite(peak):
        raise NonConvergenceError("integrand is not finite on the path", {})
    cut = peak + math.log(tol * prune)
    segs_done = []
    for seg, ss in zip([s for s in segments if s.end is None or abs(s.end - s.start) > 0], finite):
        if ss is None:
            ext, _ = _ray_extent(seg, hl, cut)
            ss = _SampledSegment(Segment(seg.start, seg.start + seg.direction * ext,
                                         graded=seg.graded), ext, hl, grade_floor)
        segs_done.append(ss)

    value_terms = []
    err = 0.0
    pruned = 0.0
    npanels = 0
    for ss in segs_done:
        act = ss.logmag >= cut
        mag = np.exp(np.minimum(ss.logmag, 700))
        # pruned mass, trapezoid on the samples outside active runs
        inact = ~act
        if inact.any():
            seg_mass = 0.5 * (mag[1:] + mag[:-1]) * np.diff(ss.s)
            pruned += float(np.sum(seg_mass[inact[1:] & inact[:-1]]))
        if not act.any():
            continue
        idx = np.nonzero(act)[0]
        runs = np.split(idx, np.nonzero(np.diff(idx) > 1)[0] + 1)
        for run in runs:
            i0 = max(run[0] - 1, 0)
            i1 = min(run[-1] + 1, ss.s.size - 1)
            a, b = ss.s[i0], ss.s[i1]
            graded = ss.seg.graded and i0 == 0
            bp = _breakpoints(ss.s, ss.w, a, b, graded)
            npanels += bp.size - 1
            if npanels > MAX_PANELS:
                raise NonConvergenceError("panel budget exceeded", {"panels": npanels})
            lo, hi = bp[:-1], bp[1:]
            half = 0.5 * (hi - lo)[:, None]
            mid = 0.5 * (hi + lo)[:, None]
            sf = mid + half * xg[None, :]
            sc = mid + half * xc[None, :]
            zf = ss.seg.start + ss.dir * sf
            zc = ss.seg.start + ss.dir * sc
            ff = np.exp(1j * hl.phase(zf)[0]) * hl.amp(zf)
            fc = np.exp(1j * hl.phase(zc)[0]) * hl.amp(zc)
            pf = (ff * wg[None, :]).sum(axis=1) * half[:, 0] * ss.dir
            pc = (fc * wc[None, :]).sum(axis=1) * half[:, 0] * ss.dir
            value_terms.append(pf)
            err += float(np.sum(np.abs(pf - pc)))
    if value_terms:
        vals = np.concatenate(value_terms)
        if not np.all(np.isfinite(vals)):
            raise NonConvergenceError("non-finite panel values", {"panels": npanels})
        value = kernels.csum(vals)
    else:
        value = 0j
    info = {"panels": npanels, "pruned_mass": pruned}
    return value, err + pruned, info


def _ray_angle(hl):
    coef, order = hl.lead
    return math.copysign(math.pi / (2 * order), hl.t * coef)


def contour_path(hl, roots=None):
    """Segments for the deformed path of a half-line integral."""
    if hl.lead is None:
        raise NonConvergenceError("contour route needs the leading term of the phase", {})
    if roots is None:
        roots = stationary_points(hl)
    theta = _ray_angle(hl)
    segs = []
    cur = complex(hl.u0)
    graded = True
    for k, us in enumerate(roots):
        d2 = float(np.real(hl.phase(np.array([us]))[2][0]))
        if d2 == 0:
            raise NonConvergenceError("degenerate stationary point", {"u": us})
        nxt = roots[k + 1] if k + 1 < len(roots) else math.inf
        width = min(8.0 / math.sqrt(abs(d2)), 0.5 * (us - cur.real), 0.5 * (nxt - us))
        e_dir = complex(math.cos(math.pi / 4), math.copysign(math.sin(math.pi / 4), d2))
        entry = us - width * e_dir
        exit_ = us + width * e_dir
        # short steepest-descent leg off the current point, when worthwhile
        dp0 = float(np.real(hl.phase(np.array([cur]))[1][0]))
        if dp0 != 0:
            ideal = -1j if dp0 < 0 else 1j
            dA = 0.5 + (math.sqrt(3) / 2) * ideal
            sA = min(40.0 / (abs(dp0) * math.sqrt(3) / 2), 0.25 * (us - cur.real))
            if sA * abs(dp0) * math.sqrt(3) / 2 > 10.0:
                pA = cur + sA * dA
                segs.append(Segment(cur, pA, graded=graded))
                cur, graded = pA, False
        segs.append(Segment(cur, entry, graded=graded))
        segs.append(Segment(entry, exit_))
        cur, graded = exit_, False
    segs.append(Segment(cur, None, direction=complex(math.cos(theta), math.sin(theta)),
                        graded=graded))
    return segs


def _tail_correction(hl, R):
    """Two-term integration-by-parts value of int_R^inf and a bound on the rest."""
    h = 1e-3 * R

    def h1(u):
        return hl.amp(u) / (1j * hl.phase(u)[1])

    def h2(u):
        d = (h1(u + h) - h1(u - h)) / (2 * h)
        return d / (1j * hl.phase(u)[1])

    u = np.array([R], dtype=float)
    e = np.exp(1j * hl.phase(u)[0])
    first = -e * h1(u)
    second = e * h2(u)
    d3 = (h2(u + h) - h2(u - h)) / (2 * h)
    rest = np.abs(d3 / hl.phase(u)[1])
    return complex((first + second)[0]), float(rest[0])


def real_axis(hl, tol, roots=None, r_max=1e6):
    """Real-axis panels with an integration-by-parts tail; returns (value, err, info)."""
    if roots is None:
        roots = stationary_points(hl)
    base = max([hl.u0, hl.scale] + list(roots))
    R = 2 * base
    target = None
    while R <= r_max:
        corr, rest = _tail_correction(hl, R)
        if rest < tol * 1e-2:
            target = (R, corr, rest)
            break
        R *= 1.5
    if target is None:
        raise NonConvergenceError("tail bound stalls on the real axis", {"R": R})
    R, corr, rest = target
    pts = [hl.u0] + [u for u in roots if u > hl.u0] + [R]
    segs = [Segment(complex(a), complex(b), graded=(i == 0)) for i, (a, b) in enumerate(zip(pts[:-1], pts[1:]))]
    value, err, info = integrate_path(segs, hl, tol, prune=1e-300)
    info["truncation"] = R
    return value + corr, err + rest, info


def half_line_integral(hl, tol, contour=True):
    """int_{u0}^inf exp(i(t f + c u)) g du by the chosen route."""
    roots = stationary_points(hl)
    if contour:
        return integrate_path(contour_path(hl, roots), hl, tol)
    return real_axis(hl, tol, roots)
