"""Numerical evaluation of I(t, x) = int exp(i(t a(xi) + x.xi)) psi(xi) dxi.

Three methods are available.

``eval_lattice``
    Trapezoidal lattice sum of the Gaussian-regularized integrand, any n,
    with extrapolation of the regularization parameter to zero.
``eval_adaptive_1d``
    One-dimensional panel quadrature split at the stationary points of the
    phase, on a steepest-descent contour (or on the real axis).
``eval_hankel``
    Radial reduction to a single integral against J_{n/2-1}, n >= 2.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels, phase as ph, symbol as sy
from .bessel import check_order, hankel_factor, lambda_fn
from .errors import BudgetError, HypothesisError, ResolutionError
from .quadrature import HalfLine, Segment, half_line_integral, integrate_path, stationary_points

DEFAULT_BUDGET = 2 ** 26
GAUSS_CUT = 36.0
SPACING_FACTOR = 0.7


@dataclass(frozen=True)
class KernelSample:
    t: float
    x: tuple
    value: complex
    method: str
    epsilon: float
    est_error: float
    grid_meta: dict = field(default_factory=dict, compare=False)

    @property
    def abs(self):
        return abs(self.value)


def _xvec(x, n):
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if xv.shape != (n,):
        raise HypothesisError(f"x must have {n} components")
    return xv


def _time_scale(phase, t):
    """Radius where |t| a reaches 1 (radial profile or leading term)."""
    if phase.kind in ("power_sum", "pure_power", "monomial_odd_1d"):
        terms = phase.terms
        f = lambda r: sum(a * r ** m for a, m in terms)
    elif phase.radial_fns is not None:
        f = lambda r: abs(phase.radial_fns[0](r))
    else:
        return abs(t) ** (-1.0 / phase.m2)
    lo, hi = 1e-12, 1e12
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if abs(t) * f(mid) < 1:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1 + 1e-12:
            break
    return math.sqrt(lo * hi)


# ------------------------------------------------------------- adaptive 1D

def _analytic(phase, sym):
    p_ok = phase.kind != "custom" or (phase.analytic and phase.lead is not None)
    s_ok = sym.kind != "custom" or sym.radial_fn is not None
    return p_ok and s_ok


def _amp_fn(g):
    return lambda u: np.asarray(g(u), dtype=complex) * np.ones(np.shape(u))


def eval_adaptive_1d(phase, sym, t, x, tolerance=1e-10, contour=None):
    """Panel quadrature of the one-dimensional integral.

    Each half-line xi = sigma*u, u > 0, is integrated separately. With
    ``contour=True`` (the default for analytic built-in phases and symbols)
    the path is deformed through the stationary points so the tails decay
    exponentially; ``contour=False`` stays on the real axis and closes the
    tail by integration by parts.
    """
    if phase.dimension != 1:
        raise HypothesisError("eval_adaptive_1d needs n = 1")
    if t == 0:
        raise HypothesisError("t must be nonzero")
    if not tolerance > 0:
        raise HypothesisError("tolerance must be positive")
    sym.check_dimension(1)
    xv = float(_xvec(x, 1)[0])
    if contour is None:
        contour = _analytic(phase, sym)
    scale = _time_scale(phase, t)
    total, err, meta = 0j, 0.0, {}
    for sigma in (1, -1):
        hl = HalfLine(t=float(t), c=sigma * xv, fns=ph.half_line(phase, sigma),
                      amp=_amp_fn(sy.half_line(sym, sigma)),
                      lead=ph.leading_term(phase, sigma), scale=scale)
        v, e, info = half_line_integral(hl, tolerance, contour=contour)
        total += v
        err += e
        meta[f"panels_{'+' if sigma > 0 else '-'}"] = info["panels"]
    meta["route"] = "contour" if contour else "real_axis"
    return KernelSample(float(t), (xv,), complex(total), "adaptive1d", 0.0, float(err), meta)


# ------------------------------------------------------------------ Hankel

def eval_hankel(phase, sym, t, x, tolerance=1e-10):
    """Radial evaluation for n >= 2.

    I = (2 pi)^{n/2} int_0^inf e^{i t a(s)} psi(s) s^{n-1} J_nu(s|x|)/(s|x|)^nu ds
    with nu = n/2 - 1; at x = 0 this is the sphere-area reduction. For large
    s|x| the Bessel factor is split into its two Hankel parts, each handled
    on its own deformed path.
    """
    n = phase.dimension
    if n < 2:
        raise HypothesisError("eval_hankel needs n >= 2")
    if not (phase.is_radial and sym.is_radial):
        raise HypothesisError("eval_hankel needs a radial phase and symbol")
    if t == 0:
        raise HypothesisError("t must be nonzero")
    sym.check_dimension(n)
    nu = check_order(n / 2 - 1)
    xv = _xvec(x, n)
    r = float(np.linalg.norm(xv))
    fns = ph.radial_profile(phase)
    g = sy.radial_profile(sym)
    lead = ph.leading_term(phase) if phase.kind != "custom" else phase.lead
    scale = _time_scale(phase, t)
    pref = (2 * math.pi) ** (n / 2)

    def amp_j(u):
        u = np.asarray(u)
        return g(u) * u ** (n - 1) * lambda_fn(nu, u * r)

    probe = HalfLine(t=float(t), c=-math.copysign(r, t), fns=fns, amp=amp_j, lead=lead, scale=scale)
    roots = stationary_points(probe) if r > 0 else []
    meta = {}
    if r == 0 or not roots or roots[-1] * r <= 40.0:
        hl = HalfLine(t=float(t), c=0.0, fns=fns, amp=amp_j, lead=lead, freq=r, scale=scale)
        v, e, info = half_line_integral(hl, tolerance)
        meta["split"] = False
        meta["panels"] = info["panels"]
    else:
        ua = 20.0 / r
        hl0 = HalfLine(t=float(t), c=0.0, fns=fns, amp=amp_j, lead=lead, freq=r, scale=scale)
        v, e, info = integrate_path([Segment(0j, complex(ua), graded=True)], hl0, tolerance)
        panels = info["panels"]
        for kind, c in ((1, r), (2, -r)):
            def amp_h(u, kind=kind):
                u = np.asarray(u)
                z = u * r
                return 0.5 * g(u) * u ** (n - 1) * hankel_factor(nu, z, kind) / z ** nu
            hl = HalfLine(t=float(t), c=c, fns=fns, amp=amp_h, lead=lead, u0=ua, scale=scale)
            vk, ek, ik = half_line_integral(hl, tolerance)
            v += vk
            e += ek
            panels += ik["panels"]
        meta["split"] = True
        meta["panels"] = panels
    return KernelSample(float(t), tuple(xv.tolist()), complex(pref * v), "hankel", 0.0,
                        float(pref * e), meta)


# ----------------------------------------------------------------- lattice

def _max_gradient(phase, radius):
    if phase.kind in ("power_sum", "pure_power", "monomial_odd_1d"):
        return sum(a * m * radius ** (m - 1) for a, m in phase.terms)
    n = phase.dimension
    rng = np.random.default_rng(12345)
    d = rng.normal(size=(256, n))
    d /= np.linalg.norm(d, axis=-1, keepdims=True)
    pts = np.concatenate([radius * d, radius * np.eye(n), -radius * np.eye(n)])
    return 1.25 * float(np.max(np.linalg.norm(ph.grad_phase(phase, pts), axis=-1)))


def _rounding(phase, sym, t, xv, eps, Xi):
    """Floating-point floor of a lattice sum: phases carry ulp(|t a| + |x xi|)."""
    n = phase.dimension
    R = Xi * math.sqrt(n)
    if phase.kind in ("power_sum", "pure_power", "monomial_odd_1d"):
        amax = sum(abs(a) * R ** m for a, m in phase.terms)
    else:
        d = np.concatenate([np.eye(n), -np.eye(n), np.ones((1, n)) / math.sqrt(n)])
        amax = float(np.max(np.abs(ph.eval_phase(phase, R * d))))
    b = max(float(sym.b2), 0.0)
    mass = (math.pi / eps) ** (n / 2) * (1 + R * R) ** (b / 2)
    return 4 * np.finfo(float).eps * mass * (1 + abs(t) * amax + float(np.abs(xv).sum()) * Xi)


def _kinds(phase, sym):
    if phase.kind in ("power_sum", "pure_power"):
        pk = 0
    elif phase.kind == "monomial_odd_1d":
        pk = 1
    else:
        pk = None
    sk = {"constant_one": 0, "bessel_weight": 1, "pure_power": 2, "monomial": 3}.get(sym.kind)
    return pk, sk


def _separable(phase, sym):
    n = phase.dimension
    if sym.kind not in ("constant_one", "monomial") and not (sym.kind == "pure_power" and sym.b == 0):
        return False
    if n == 1:
        return True
    return phase.kind in ("power_sum", "pure_power") and all(m == 2.0 for _, m in phase.terms)


def _lattice_once(phase, sym, t, xv, eps, h, npts):
    """(fine, coarse) scaled lattice sums at one regularization level."""
    n = phase.dimension
    pk, sk = _kinds(phase, sym)
    alpha = list(sym.multi_index) if sym.kind == "monomial" else [0] * n
    if pk is not None and sk is not None:
        coef = [a for a, _ in phase.terms]
        expo = [m for _, m in phase.terms]
        if _separable(phase, sym) and n > 1:
            fine, coarse = 1 + 0j, 1 + 0j
            for d in range(n):
                f1, c1 = kernels.lattice_sum(1, npts, h, t, [xv[d]], eps, coef, expo, pk,
                                             3 if sym.kind == "monomial" else 0, 0.0, [alpha[d]])
                fine *= f1 * h
                coarse *= c1 * 2 * h
            return fine, coarse, n * npts
        f, c = kernels.lattice_sum(n, npts, h, t, xv, eps, coef, expo, pk, sk, sym.b, alpha)
        return f * h ** n, c * (2 * h) ** n, npts ** n
    return _lattice_generic(phase, sym, t, xv, eps, h, npts)


def _lattice_generic(phase, sym, t, xv, eps, h, npts, chunk=1 << 16):
    """Vectorized lattice sum for phases or symbols without a compiled kernel."""
    n = phase.dimension
    c = (npts - 1) // 2
    psi = sy.regularize(sym, eps)
    parts_f, parts_c = [], []
    total = npts ** n
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        idx = np.stack(np.unravel_index(flat, (npts,) * n), axis=-1) - c
        pts = idx * h
        val = np.exp(1j * (t * np.asarray(ph.eval_phase(phase, pts)) + pts @ xv)) \
            * np.asarray(psi(pts))
        even = np.all(idx % 2 == 0, axis=-1)
        parts_f.append(kernels.csum(val))
        parts_c.append(kernels.csum(val[even]))
    fine = kernels.csum(np.array(parts_f))
    coarse = kernels.csum(np.array(parts_c))
    return fine * h ** n, coarse * (2 * h) ** n, total


def _grid(phase, t, xv, eps, spacing, cutoff):
    Xi = cutoff if cutoff is not None else math.sqrt(GAUSS_CUT / eps)
    freq = abs(t) * _max_gradient(phase, Xi) + float(np.max(np.abs(xv)))
    hmax = math.pi / freq
    if spacing is None:
        h = SPACING_FACTOR * hmax
    else:
        h = float(spacing)
        if h >= hmax:
            raise ResolutionError(f"spacing {h} gives a phase increment above pi per cell; "
                                  f"need h < {hmax}", min_spacing=hmax)
    half = int(math.ceil(Xi / h))
    half += (-half) % 2  # npts = 2*half+1 must be 1 mod 4
    return h, 2 * half + 1, Xi


def eval_lattice(phase, sym, t, x, epsilon=None, cutoff=None, spacing=None,
                 budget=DEFAULT_BUDGET, extrapolate=True):
    """Gaussian-regularized lattice sum over [-Xi, Xi]^n.

    The lattice uses spacing h with h*(|t| max|grad a| + |x|_inf) < pi on
    the cutoff ball; the even sublattice (spacing 2h) gives the resolution
    delta. The sum is taken at epsilon and epsilon/4 and extrapolated
    linearly to epsilon = 0. The default epsilon is kappa/l^2 with l the
    larger of the radius where |t| a = 1 and 1.5 times the stationary
    radius, and kappa the smallest value in [0.02, 1] that keeps the finer
    level within ``budget`` points. ``cutoff`` defaults to sqrt(36/eps).
    """
    n = phase.dimension
    if t == 0:
        raise HypothesisError("t must be nonzero")
    sym.check_dimension(n)
    xv = _xvec(x, n)
    ell = _time_scale(phase, t)
    if phase.kind in ("power_sum", "pure_power", "monomial_odd_1d"):
        rx = float(np.linalg.norm(xv))
        if rx > 0:
            lo, hi = 1e-12, 1e12
            fp = lambda r: sum(a * m * r ** (m - 1) for a, m in phase.terms)
            for _ in range(200):
                mid = math.sqrt(lo * hi)
                lo, hi = (mid, hi) if abs(t) * fp(mid) < rx else (lo, mid)
            ell = max(ell, 1.5 * math.sqrt(lo * hi))
    sep = _separable(phase, sym)

    def cost(eps):
        h, npts, _ = _grid(phase, t, xv, eps, None, None if cutoff is None else cutoff)
        return n * npts if (sep and n > 1) else npts ** n

    if epsilon is None:
        for kappa in np.geomspace(0.02, 1.0, 15):
            eps = kappa / ell ** 2
            if cost(eps / 4 if extrapolate else eps) <= budget:
                break
        else:
            raise BudgetError("lattice exceeds the point budget for every admissible epsilon")
    else:
        eps = float(epsilon)
        if not eps > 0:
            raise HypothesisError("epsilon must be positive")
    levels = [eps, eps / 4] if extrapolate else [eps]
    results = []
    for e in levels:
        h, npts, Xi = _grid(phase, t, xv, e, spacing, cutoff)
        pts = n * npts if (sep and n > 1) else npts ** n
        if pts > budget:
            raise BudgetError(f"lattice needs {pts} points, budget is {budget}")
        fine, coarse, _ = _lattice_once(phase, sym, float(t), xv, e, h, npts)
        results.append((fine, coarse, h, npts, Xi))
    f0 = results[0][0]
    err_h = sum(abs(r[0] - r[1]) for r in results[-1:])
    if extrapolate:
        f1 = results[1][0]
        value = (4 * f1 - f0) / 3
        err = err_h + abs(value - f1)
    else:
        value = f0
        err = err_h
    last = results[-1]
    err += _rounding(phase, sym, t, xv, levels[-1], last[4])
    meta = {"cutoff": last[4], "spacing": last[2], "points_per_axis": last[3],
            "separable": bool(sep and n > 1), "levels": len(levels)}
    return KernelSample(float(t), tuple(xv.tolist()), complex(value), "lattice", float(eps),
                        float(err), meta)


# --------------------------------------------------------------- dispatch

METHODS = {"lattice": eval_lattice, "adaptive1d": eval_adaptive_1d, "hankel": eval_hankel}


def default_method(phase, sym):
    if phase.dimension == 1:
        return "adaptive1d"
    if phase.is_radial and sym.is_radial:
        return "hankel"
    return "lattice"


def evaluate(phase, sym, t, x, method=None, **kw):
    """Evaluate with ``method`` (default: the most accurate applicable one)."""
    method = method or default_method(phase, sym)
    return METHODS[method](phase, sym, t, x, **kw)


def evaluate_many(phase, sym, points, method=None, threads=1, **kw):
    """Evaluate at a list of ``(t, x)``; results keep the input order."""
    from concurrent.futures import ThreadPoolExecutor

    job = lambda tx: evaluate(phase, sym, tx[0], tx[1], method, **kw)
    points = list(points)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(job, points))
    return [job(p) for p in points]
