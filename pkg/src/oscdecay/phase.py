"""Phase functions a(xi) and numerical checks of their ellipticity bounds.

Built-in kinds are radial power sums ``sum_j A_j |xi|^{m_j}`` (``pure_power``
is the one-term case) and the odd monomial ``xi^k`` in one dimension. A
``custom`` kind wraps caller supplied value, gradient and Hessian closures.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, HypothesisError

KINDS = ("power_sum", "pure_power", "monomial_odd_1d", "custom")


@dataclass(frozen=True)
class Ellipticity:
    """Two-sided constants for |grad a| and |det Ha|.

    ``c1, c2`` bound |grad a|/|xi|^{m-1} and ``c1p, c2p`` bound
    |det Ha|/|xi|^{n(m-2)} in the outer regime. ``d2p, d2`` are the gradient
    bounds on the inner ball (order m1), ``d1, d1p`` those on the outer set
    (order m2). Unknown constants are None.
    """

    c1: float = None
    c2: float = None
    c1p: float = None
    c2p: float = None
    d1: float = None
    d1p: float = None
    d2: float = None
    d2p: float = None

    def to_dict(self):
        return {k: getattr(self, k) for k in
                ("c1", "c2", "c1p", "c2p", "d1", "d1p", "d2", "d2p")}


@dataclass(frozen=True)
class PhaseSpec:
    dimension: int
    kind: str
    m1: float
    m2: float
    terms: tuple = ()
    r0: float = 0.5
    R0: float = 2.0
    ellipticity: Ellipticity = field(default_factory=Ellipticity)
    value_fn: object = field(default=None, compare=False, repr=False)
    grad_fn: object = field(default=None, compare=False, repr=False)
    hess_fn: object = field(default=None, compare=False, repr=False)
    radial_fns: object = field(default=None, compare=False, repr=False)
    analytic: bool = False
    lead: tuple = None

    @property
    def is_radial(self):
        return self.kind in ("power_sum", "pure_power") or self.radial_fns is not None

    @property
    def degree(self):
        """Odd monomial degree k (monomial_odd_1d only)."""
        return int(self.m1)

    def to_dict(self):
        if self.kind == "custom":
            raise HypothesisError("custom phases carry closures and cannot be serialized")
        d = {"kind": self.kind, "dimension": self.dimension}
        if self.kind == "power_sum":
            d["terms"] = [[a, m] for a, m in self.terms]
        elif self.kind == "pure_power":
            d["m"] = self.m1
            if self.terms[0][0] != 1.0:
                d["coefficient"] = self.terms[0][0]
        else:
            d["k"] = self.degree
        d["r0"] = self.r0
        d["R0"] = self.R0
        return d


def _check_radii(r0, R0):
    if not (R0 > r0 > 0):
        raise HypothesisError(f"need R0 > r0 > 0, got r0={r0}, R0={R0}")


def _power_sum_constants(terms, r0, R0):
    # gradient bounds on B1 = {|xi| < R0} (order m1) and B2 = {|xi| > r0} (order m2)
    (a1, m1), (aJ, mJ) = terms[0], terms[-1]
    d2p = a1 * m1
    d2 = a1 * m1 + sum(a * m * R0 ** (m - m1) for a, m in terms[1:])
    d1 = aJ * mJ
    d1p = sum(a * m * r0 ** (m - mJ) for a, m in terms[:-1]) + aJ * mJ
    return d1, d1p, d2, d2p


def power_sum(terms, dimension=1, r0=0.5, R0=2.0):
    """Radial phase ``sum_j A_j |xi|^{m_j}``.

    ``terms`` is a sequence of ``(A_j, m_j)``. Coefficients of the smallest
    and largest exponent must be positive, the others nonnegative.
    """
    _check_radii(r0, R0)
    if dimension < 1 or int(dimension) != dimension:
        raise HypothesisError("dimension must be a positive integer")
    ts = sorted((float(a), float(m)) for a, m in terms)
    ts = sorted(ts, key=lambda p: p[1])
    if not ts:
        raise HypothesisError("power_sum needs at least one term")
    ms = [m for _, m in ts]
    if len(set(ms)) != len(ms):
        raise HypothesisError("power_sum exponents must be distinct")
    if any(m <= 1 for m in ms):
        raise HypothesisError("power_sum exponents must exceed 1")
    if any(a < 0 for a, _ in ts) or ts[0][0] <= 0 or ts[-1][0] <= 0:
        raise HypothesisError("outer coefficients must be positive and the rest nonnegative")
    ts = tuple(ts)
    m1, m2 = ts[0][1], ts[-1][1]
    d1, d1p, d2, d2p = _power_sum_constants(ts, r0, R0)
    if d1 * r0 ** (m2 - 1) > d2 * R0 ** (m1 - 1):
        raise HypothesisError("compatibility d1*r0^(m2-1) <= d2*R0^(m1-1) fails")
    ell = Ellipticity(d1=d1, d1p=d1p, d2=d2, d2p=d2p, c1=d1, c2=d1p)
    if len(ts) == 1:
        a, m = ts[0]
        cdet = (m - 1) * (a * m) ** dimension
        ell = replace(ell, c1p=cdet, c2p=cdet)
    return PhaseSpec(dimension=int(dimension), kind="power_sum", m1=m1, m2=m2,
                     terms=ts, r0=r0, R0=R0, ellipticity=ell)


def pure_power(m, dimension=1, coefficient=1.0, r0=0.5, R0=2.0):
    """Homogeneous phase ``A |xi|^m``."""
    p = power_sum([(coefficient, m)], dimension, r0, R0)
    return replace(p, kind="pure_power")


def monomial_odd_1d(k, r0=0.5, R0=2.0):
    """One-dimensional phase ``xi^k`` for odd k >= 3."""
    _check_radii(r0, R0)
    if int(k) != k or k < 3 or k % 2 == 0:
        raise HypothesisError("monomial_odd_1d needs an odd integer k >= 3")
    k = int(k)
    ell = Ellipticity(c1=k, c2=k, c1p=k * (k - 1), c2p=k * (k - 1),
                      d1=k, d1p=k, d2=k, d2p=k)
    return PhaseSpec(dimension=1, kind="monomial_odd_1d", m1=float(k), m2=float(k),
                     terms=((1.0, float(k)),), r0=r0, R0=R0, ellipticity=ell)


def custom(value, grad, hess, dimension, m1, m2, r0=0.5, R0=2.0,
           analytic=False, lead=None, radial=None, ellipticity=None):
    """Phase given by closures.

    ``value(xi)``, ``grad(xi)`` and ``hess(xi)`` take points of shape
    ``(..., n)`` and return shapes ``(...)``, ``(..., n)`` and ``(..., n, n)``.
    Set ``analytic=True`` only if the closures accept complex input and
    continue analytically; ``lead=(coef, order)`` then gives the leading
    behaviour ``coef * u^order`` of ``a(u)`` for large positive ``u`` (1D).
    ``radial=(f, fp, fpp)`` declares a radial profile for Hankel evaluation.
    """
    _check_radii(r0, R0)
    if not (m2 >= m1 > 1):
        raise HypothesisError("need m2 >= m1 > 1")
    return PhaseSpec(dimension=int(dimension), kind="custom", m1=float(m1), m2=float(m2),
                     r0=r0, R0=R0, ellipticity=ellipticity or Ellipticity(),
                     value_fn=value, grad_fn=grad, hess_fn=hess, radial_fns=radial,
                     analytic=bool(analytic), lead=lead)


def from_dict(d):
    """Build a PhaseSpec from its JSON form."""
    d = dict(d)
    kind = d.pop("kind", None)
    n = d.pop("dimension", 1)
    radii = {k: d.pop(k) for k in ("r0", "R0") if k in d}
    if kind == "power_sum":
        return power_sum(d.pop("terms"), n, **radii)
    if kind == "pure_power":
        return pure_power(d.pop("m"), n, d.pop("coefficient", 1.0), **radii)
    if kind == "monomial_odd_1d":
        if n != 1:
            raise HypothesisError("monomial_odd_1d is one-dimensional")
        return monomial_odd_1d(d.pop("k"), **radii)
    raise HypothesisError(f"unknown or non-serializable phase kind {kind!r}")


# ---------------------------------------------------------------- evaluation

def _points(spec, xi):
    x = np.asarray(xi, dtype=float)
    n = spec.dimension
    if n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != n:
        raise DomainError(f"expected points with last axis {n}, got shape {x.shape}")
    return x


def radial_profile(spec):
    """Return ``(f, fp, fpp)`` with a(xi) = f(|xi|), valid for complex s."""
    if spec.radial_fns is not None:
        return spec.radial_fns
    if spec.kind not in ("power_sum", "pure_power"):
        raise HypothesisError(f"phase kind {spec.kind} is not radial")
    terms = spec.terms

    def f(s):
        s = np.asarray(s)
        return sum(a * s ** m for a, m in terms)

    def fp(s):
        s = np.asarray(s)
        return sum(a * m * s ** (m - 1) for a, m in terms)

    def fpp(s):
        s = np.asarray(s)
        return sum(a * m * (m - 1) * s ** (m - 2) for a, m in terms)

    return f, fp, fpp


def half_line(spec, sigma):
    """Profile of u -> a(sigma*u) on u > 0 for one-dimensional phases.

    Returns ``(f, fp, fpp)`` as functions of u (derivatives in u). For the
    built-in kinds they continue analytically to complex u.
    """
    if spec.dimension != 1:
        raise HypothesisError("half_line needs a one-dimensional phase")
    if spec.kind in ("power_sum", "pure_power"):
        return radial_profile(spec)
    if spec.kind == "monomial_odd_1d":
        k = spec.degree
        return (lambda u: sigma * np.asarray(u) ** k,
                lambda u: sigma * k * np.asarray(u) ** (k - 1),
                lambda u: sigma * k * (k - 1) * np.asarray(u) ** (k - 2))
    vf, gf, hf = spec.value_fn, spec.grad_fn, spec.hess_fn
    return (lambda u: vf((sigma * np.asarray(u))[..., None]),
            lambda u: sigma * gf((sigma * np.asarray(u))[..., None])[..., 0],
            lambda u: hf((sigma * np.asarray(u))[..., None])[..., 0, 0])


def leading_term(spec, sigma=1):
    """``(coef, order)`` with f(u) ~ coef*u^order along the half-line, or None."""
    if spec.kind in ("power_sum", "pure_power"):
        return spec.terms[-1][0], spec.terms[-1][1]
    if spec.kind == "monomial_odd_1d":
        return float(sigma), float(spec.degree)
    if spec.lead is None:
        return None
    c, m = spec.lead
    if spec.dimension == 1 and sigma < 0:
        # caller gives the u -> +inf behaviour; for u -> -inf use parity of order
        if float(m).is_integer():
            c = c * (-1) ** int(m)
        else:
            return None
    return float(c), float(m)


def eval_phase(spec, xi):
    """a(xi); xi has shape (n,) or (..., n) (a scalar is fine for n = 1)."""
    x = _points(spec, xi)
    if spec.kind in ("power_sum", "pure_power"):
        r = np.sqrt(np.sum(x * x, axis=-1))
        out = radial_profile(spec)[0](r)
    elif spec.kind == "monomial_odd_1d":
        out = x[..., 0] ** spec.degree
    else:
        out = np.asarray(spec.value_fn(x), dtype=float)
    return float(out) if np.ndim(out) == 0 else out


def _check_nonzero(r):
    if np.any(r == 0):
        raise DomainError("derivatives of the phase are not evaluated at xi = 0")


def grad_phase(spec, xi):
    """Gradient of a at xi != 0, shape matching the points."""
    x = _points(spec, xi)
    r = np.sqrt(np.sum(x * x, axis=-1))
    _check_nonzero(r)
    if spec.kind in ("power_sum", "pure_power"):
        g = (radial_profile(spec)[1](r) / r)[..., None] * x
    elif spec.kind == "monomial_odd_1d":
        k = spec.degree
        g = k * x ** (k - 1)
    else:
        g = np.asarray(spec.grad_fn(x), dtype=float)
    if np.ndim(xi) == 0:
        return g.reshape(1)
    return g


def hessian_det(spec, xi):
    """det of the Hessian of a at xi != 0."""
    x = _points(spec, xi)
    r = np.sqrt(np.sum(x * x, axis=-1))
    _check_nonzero(r)
    n = spec.dimension
    if spec.kind in ("power_sum", "pure_power"):
        _, fp, fpp = radial_profile(spec)
        out = fpp(r) * (fp(r) / r) ** (n - 1)
    elif spec.kind == "monomial_odd_1d":
        k = spec.degree
        out = k * (k - 1) * x[..., 0] ** (k - 2)
    else:
        out = np.linalg.det(np.asarray(spec.hess_fn(x), dtype=float))
    return float(out) if np.ndim(out) == 0 else out


# ------------------------------------------------------- ellipticity checking

@dataclass(frozen=True)
class EllipticityReport:
    """Outcome of :func:`verify_ellipticity`.

    ``inner`` and ``outer`` hold empirical min/max of the gradient and
    determinant ratios on B1 and B2. ``violations`` lists the offending
    points. ``spec`` is a copy of the phase carrying the empirical constants.
    """

    holds: bool
    inner: dict
    outer: dict
    violations: list
    spec: PhaseSpec

    def to_dict(self):
        return {"holds": self.holds, "inner": self.inner, "outer": self.outer,
                "violations": self.violations,
                "ellipticity": self.spec.ellipticity.to_dict()}


def _directions(n, count):
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        th = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    eye = np.eye(n)
    dirs = [eye, -eye]
    # golden-angle spiral lifted to n dimensions, deterministic
    k = np.arange(count) + 0.5
    z = 1 - 2 * k / count
    rho = np.sqrt(1 - z * z)
    phi = np.pi * (3 - np.sqrt(5)) * k
    base = np.zeros((count, n))
    base[:, 0] = rho * np.cos(phi)
    base[:, 1] = rho * np.sin(phi)
    base[:, 2] = z
    if n > 3:
        base[:, 3:] = np.cos(np.outer(k, np.arange(1, n - 2)))
    base /= np.linalg.norm(base, axis=-1, keepdims=True)
    diag = np.ones((1, n)) / np.sqrt(n)
    dirs += [base, diag]
    return np.concatenate(dirs)


def _ratio_stats(spec, radii, dirs, m, end, slope_tol, label):
    n = spec.dimension
    pts = radii[:, None, None] * dirs[None, :, :]
    r = radii[:, None]
    g = np.linalg.norm(grad_phase(spec, pts), axis=-1) / r ** (m - 1)
    d = np.abs(hessian_det(spec, pts)) / r ** (n * (m - 2))
    viol = []
    for name, q in (("gradient", g), ("hessian_det", d)):
        bad = ~np.isfinite(q) | (q <= 1e-10 * np.nanmax(np.where(np.isfinite(q), q, 0.0)))
        for i, j in zip(*np.nonzero(bad)):
            viol.append({"region": label, "quantity": name,
                         "xi": pts[i, j].tolist(), "ratio": float(q[i, j])})
        # trend over the decade nearest the unbounded end of the regime
        lr = np.log10(radii)
        idx = (lr <= lr[0] + 1) if end == "low" else (lr >= lr[-1] - 1)
        i0, i1 = np.nonzero(idx)[0][[0, -1]]
        with np.errstate(divide="ignore", invalid="ignore"):
            lq = np.log10(q)
            slope = (lq[i1] - lq[i0]) / (lr[i1] - lr[i0])
        for j in np.nonzero(~(np.abs(slope) <= slope_tol))[0]:
            ie = i0 if end == "low" else i1
            viol.append({"region": label, "quantity": name,
                         "xi": pts[ie, j].tolist(), "ratio": float(q[ie, j]),
                         "trend": float(slope[j])})
    ok = lambda q: q[np.isfinite(q)]
    stats = {"gradient_min": float(np.min(ok(g))) if ok(g).size else None,
             "gradient_max": float(np.max(ok(g))) if ok(g).size else None,
             "det_min": float(np.min(ok(d))) if ok(d).size else None,
             "det_max": float(np.max(ok(d))) if ok(d).size else None}
    return stats, viol


def verify_ellipticity(spec, shell_samples=32, decades=6, slope_tol=0.05):
    """Sample |grad a|/|xi|^{m-1} and |det Ha|/|xi|^{n(m-2)} on B1 and B2.

    B1 = {|xi| < R0} uses order m1, B2 = {|xi| > r0} uses order m2. A ratio
    counts as degenerate if it vanishes or is non-finite at some sample, or
    if its log-log trend over the last decade toward 0 (B1) or infinity (B2)
    exceeds ``slope_tol``. Failures are reported, not raised.
    """
    if shell_samples < 16:
        raise HypothesisError("shell_samples must be at least 16")
    dirs = _directions(spec.dimension, shell_samples)
    nr = max(shell_samples, 8 * decades)
    inner_r = np.logspace(np.log10(spec.R0) - decades, np.log10(spec.R0), nr)[:-1]
    outer_r = np.logspace(np.log10(spec.r0), np.log10(spec.r0) + decades, nr)[1:]
    inner, v1 = _ratio_stats(spec, inner_r, dirs, spec.m1, "low", slope_tol, "inner")
    outer, v2 = _ratio_stats(spec, outer_r, dirs, spec.m2, "high", slope_tol, "outer")
    viol = v1 + v2
    ell = Ellipticity(c1=outer["gradient_min"], c2=outer["gradient_max"],
                      c1p=outer["det_min"], c2p=outer["det_max"],
                      d1=outer["gradient_min"], d1p=outer["gradient_max"],
                      d2=inner["gradient_max"], d2p=inner["gradient_min"])
    return EllipticityReport(holds=not viol, inner=inner, outer=outer,
                             violations=viol[:64], spec=replace(spec, ellipticity=ell))
