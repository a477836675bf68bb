"""Exponent algebra for decay envelopes and admissible Lebesgue exponents.

Everything here is exact: inputs are converted to ``fractions.Fraction``
(floats through their shortest decimal repr) and infinite exponents are
``math.inf``. No integrals are evaluated in this module.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import HypothesisError, ParameterRangeError, RegionError

INF = math.inf
DEFAULT_EPSILON = Fraction(1, 1000)
RAPID_EXPONENT = 8


def frac(v):
    """Exact rational from int, Fraction, str or float (via repr)."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v)
    v = float(v)
    if not math.isfinite(v):
        raise ValueError("infinite value has no rational form")
    return Fraction(repr(v))


def recip(p):
    """1/p with 1/inf = 0."""
    if p == INF:
        return Fraction(0)
    p = frac(p)
    if p == 0:
        raise ValueError("exponent 0 has no reciprocal")
    return 1 / p


def from_recip(u):
    """Inverse of :func:`recip`."""
    return INF if u == 0 else 1 / Fraction(u)


def _jsonable(v):
    if v is None:
        return None
    if v == INF:
        return "inf"
    if isinstance(v, Fraction):
        return str(v)
    return v


def mu(n, m, b):
    """(n(m-2)-2b)/(2(m-1)) as an exact rational; requires m > 1."""
    n, m, b = frac(n), frac(m), frac(b)
    if not m > 1:
        raise ParameterRangeError("mu needs m > 1")
    return (n * (m - 2) - 2 * b) / (2 * (m - 1))


# ------------------------------------------------------------------ envelopes

QUANTITIES = ("t", "x_over_t", "scaled_x")


@dataclass(frozen=True)
class Condition:
    """``quantity op bound`` with quantity |t|, |x|/|t| or |t|^{-1/m}|x|."""

    quantity: str
    op: str
    bound: Fraction
    m: Fraction = None

    def holds(self, t, r):
        t = np.abs(np.asarray(t, dtype=float))
        r = np.asarray(r, dtype=float)
        if self.quantity == "t":
            v = t
        elif self.quantity == "x_over_t":
            v = r / t
        else:
            v = t ** (-1.0 / float(self.m)) * r
        b = float(self.bound)
        return {"<": v < b, "<=": v <= b, ">": v > b, ">=": v >= b}[self.op]

    def to_dict(self):
        d = {"quantity": self.quantity, "op": self.op, "bound": _jsonable(self.bound)}
        if self.m is not None:
            d["m"] = _jsonable(self.m)
        return d


FORMS = ("scaled", "product", "spatial", "temporal", "power")


@dataclass(frozen=True)
class Piece:
    """One regime of an envelope.

    Forms, with p = ``t_exponent`` and q = ``x_exponent``:
    ``scaled`` |t|^-p (1+|t|^{-1/m}|x|)^-q, ``product`` |t|^-p |x|^-q,
    ``spatial`` (1+|x|)^-q, ``temporal`` (1+|t|^{1/m})^-p, ``power`` |t|^-p.
    A negative p means growth in time.
    """

    regime: str
    form: str
    conditions: tuple
    t_exponent: Fraction = Fraction(0)
    x_exponent: Fraction = Fraction(0)
    m: Fraction = None
    label: str = ""

    def holds(self, t, r):
        mask = np.ones(np.broadcast(np.asarray(t), np.asarray(r)).shape, dtype=bool)
        for c in self.conditions:
            mask &= c.holds(t, r)
        return mask

    def rate(self, t, r):
        t = np.abs(np.asarray(t, dtype=float))
        r = np.asarray(r, dtype=float)
        p, q = float(self.t_exponent), float(self.x_exponent)
        with np.errstate(divide="ignore"):
            if self.form == "scaled":
                return t ** -p * (1 + t ** (-1 / float(self.m)) * r) ** -q
            if self.form == "product":
                return t ** -p * r ** -q
            if self.form == "spatial":
                return (1 + r) ** -q * np.ones_like(t)
            if self.form == "temporal":
                return (1 + t ** (1 / float(self.m))) ** -p * np.ones_like(r)
            return t ** -p * np.ones_like(r)

    def to_dict(self):
        return {"predicate": {"regime": self.regime,
                              "conditions": [c.to_dict() for c in self.conditions]},
                "form": self.form, "t_exponent": _jsonable(self.t_exponent),
                "x_exponent": _jsonable(self.x_exponent), "m": _jsonable(self.m),
                "label": self.label}


@dataclass(frozen=True)
class DecayEnvelope:
    """Piecewise majorant E(t, x), up to a multiplicative constant."""

    name: str
    pieces: tuple
    n: int
    t0: Fraction = Fraction(1)
    N: Fraction = Fraction(1)
    tau0: Fraction = Fraction(1)
    exponents: dict = field(default_factory=dict)

    @property
    def mu_b(self):
        return self.exponents.get("mu_b")

    @property
    def nu1(self):
        return self.exponents.get("nu1")

    @property
    def nu2(self):
        return self.exponents.get("nu2")

    @property
    def upsilon1(self):
        return self.exponents.get("upsilon1")

    @property
    def upsilon2(self):
        return self.exponents.get("upsilon2")

    def piece_index(self, t, r):
        """Index of the first piece whose region contains (t, |x|); -1 if none."""
        t, r = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(r, dtype=float))
        out = np.full(t.shape, -1)
        for i, pc in reversed(list(enumerate(self.pieces))):
            out = np.where(pc.holds(t, r), i, out)
        return out

    def __call__(self, t, x):
        """E(t, x); x may be a vector (last axis n) or a radius."""
        r = _radius(x, self.n)
        t, r = np.broadcast_arrays(np.asarray(t, dtype=float), r)
        idx = self.piece_index(t, r)
        if np.any(idx < 0):
            raise HypothesisError("point outside every envelope piece")
        out = np.empty(t.shape)
        for i, pc in enumerate(self.pieces):
            sel = idx == i
            if sel.any():
                out[sel] = pc.rate(t[sel], r[sel])
        return float(out) if out.ndim == 0 else out

    def to_dict(self):
        return {"name": self.name, "n": self.n, "t0": _jsonable(self.t0), "N": _jsonable(self.N),
                "tau0": _jsonable(self.tau0),
                "exponents": {k: _jsonable(v) for k, v in self.exponents.items()},
                "pieces": [p.to_dict() for p in self.pieces]}


def _radius(x, n):
    x = np.asarray(x, dtype=float)
    if n > 1 and x.ndim >= 1 and x.shape[-1] == n:
        return np.linalg.norm(x, axis=-1)
    if n == 1 and x.ndim >= 1 and x.shape[-1] == 1 and x.ndim > 1:
        return np.abs(x[..., 0])
    return np.abs(x)


def theorem31_envelope(phase, sym, t0=1, N=1):
    """Two-regime envelope for phases with orders (m1, m2) and symbols (b1, b2).

    Small times and the outer cone |x| > N|t| use
    |t|^{-(n+b2)/m2}(1+|t|^{-1/m2}|x|)^{-nu2}; the inner cone at large times
    uses |t|^{-(n+b1)/m1}(1+|t|^{-1/m1}|x|)^{-nu1}.
    """
    n = phase.dimension
    m1, m2 = frac(phase.m1), frac(phase.m2)
    b1, b2 = frac(sym.b1), frac(sym.b2)
    t0, N = frac(t0), frac(N)
    if not (m2 >= m1 > 1):
        raise HypothesisError("need m2 >= m1 > 1")
    if b1 < Fraction(-n, 2):
        raise HypothesisError(f"b1 = {b1} is below -n/2 = {Fraction(-n, 2)}")
    if b1 > b2:
        raise HypothesisError("need b1 <= b2")
    if t0 <= 0 or N <= 0:
        raise HypothesisError("t0 and N must be positive")
    e = phase.ellipticity
    if e.d1 is not None and e.d2 is not None:
        if e.d1 * phase.r0 ** (phase.m2 - 1) > e.d2 * phase.R0 ** (phase.m1 - 1) * (1 + 1e-12):
            raise HypothesisError("compatibility d1*r0^(m2-1) <= d2*R0^(m1-1) fails")
    nu1, nu2 = mu(n, m1, b1), mu(n, m2, b2)
    small = dict(form="scaled", t_exponent=(n + b2) / m2, x_exponent=nu2, m=m2)
    pieces = (
        Piece("small_t", conditions=(Condition("t", "<", t0),), **small),
        Piece("outer", conditions=(Condition("t", ">=", t0), Condition("x_over_t", ">", N)), **small),
        Piece("inner", "scaled", (Condition("t", ">=", t0), Condition("x_over_t", "<=", N)),
              (n + b1) / m1, nu1, m1),
    )
    ex = {"nu1": nu1, "nu2": nu2, "mu_b": mu(n, m2, b2) if m1 == m2 and b1 == b2 else None}
    bsym = frac(sym.b)
    ex["upsilon1"] = mu(n, m1, bsym)
    ex["upsilon2"] = mu(n, m2, bsym)
    return DecayEnvelope("theorem31", pieces, n, t0=t0, N=N, exponents=ex)


def lemma1_envelope(phase, sym, t0=1, K=RAPID_EXPONENT):
    """Envelope for symbols supported away from the origin (order m2, radius r0).

    For |t| >= t0: |t|^{-n/2+mu}|x|^{-mu} when |x|/|t| > (2/3) c1 r0^{m-1},
    otherwise rapid decay |t|^{-K}. For |t| < t0:
    |t|^{-(n+b)/m}(1+|t|^{-1/m}|x|)^{-mu}. Uses c1 = d1 and b = b2.
    """
    n = phase.dimension
    m, b, t0 = frac(phase.m2), frac(sym.b2), frac(t0)
    if b < Fraction(-n, 2):
        raise ParameterRangeError(f"b = {b} outside [-n/2, inf) required for the small-time piece")
    c1 = phase.ellipticity.d1 if phase.ellipticity.d1 is not None else phase.ellipticity.c1
    if c1 is None:
        raise HypothesisError("phase has no lower gradient constant d1/c1")
    mb = mu(n, m, b)
    thr = Fraction(2, 3) * frac(c1) * frac(float(phase.r0) ** (float(m) - 1))
    pieces = (
        Piece("stationary", "product", (Condition("t", ">=", t0), Condition("x_over_t", ">", thr)),
              Fraction(n, 2) - mb, mb),
        Piece("rapid", "power", (Condition("t", ">=", t0), Condition("x_over_t", "<=", thr)),
              Fraction(K), label="rapid"),
        Piece("small_t", "scaled", (Condition("t", "<", t0),), (n + b) / m, mb, m),
    )
    return DecayEnvelope("lemma1", pieces, n, t0=t0, N=thr, exponents={"mu_b": mb})


def lemma2_envelope(phase, sym, tau0=1):
    """Envelope for symbols supported near the origin (order m1, radius R0).

    With tau = |t|^{-1/m}|x| and threshold 2 c2 R0^{m-1} on |x|/|t|:
    (1+|x|)^{-(n+b)} when tau > tau0 and |x|/|t| above threshold,
    |t|^{-n/2+mu}|x|^{-mu} when tau > tau0 and |x|/|t| at most threshold,
    (1+|t|^{1/m})^{-(n+b)} when tau <= tau0. Uses c2 = d2 and b = b1.
    """
    n = phase.dimension
    m, b, tau0 = frac(phase.m1), frac(sym.b1), frac(tau0)
    if not b > -n:
        raise ParameterRangeError(f"b = {b} outside (-n, inf) required for the spatial and temporal pieces")
    if b < Fraction(-n, 2):
        raise ParameterRangeError(f"b = {b} outside [-n/2, inf) required for the product piece")
    c2 = phase.ellipticity.d2 if phase.ellipticity.d2 is not None else phase.ellipticity.c2
    if c2 is None:
        raise HypothesisError("phase has no upper gradient constant d2/c2")
    thr = 2 * frac(c2) * frac(float(phase.R0) ** (float(m) - 1))
    mb = mu(n, m, b)
    pieces = (
        Piece("spatial", "spatial", (Condition("scaled_x", ">", tau0, m), Condition("x_over_t", ">", thr)),
              Fraction(0), n + b, m),
        Piece("stationary", "product", (Condition("scaled_x", ">", tau0, m), Condition("x_over_t", "<=", thr)),
              Fraction(n, 2) - mb, mb, m),
        Piece("temporal", "temporal", (Condition("scaled_x", "<=", tau0, m),), n + b, Fraction(0), m),
    )
    return DecayEnvelope("lemma2", pieces, n, tau0=tau0, N=thr, exponents={"mu_b": mb})


def proposition34_envelope(phase, sym, p=1, q=INF):
    """Operator-norm envelope in time for phases with only outer-regime bounds.

    Decay (n/m)(1/p-1/q)+b/m for |t| < 1 and growth n|1/q+1/p-1| for
    |t| >= 1, with m = m2 and b = b2.
    """
    n = phase.dimension
    m, b = frac(phase.m2), frac(sym.b2)
    up, uq = recip(p), recip(q)
    small = Fraction(n) / m * (up - uq) + b / m
    growth = n * abs(uq + up - 1)
    pieces = (
        Piece("small_t", "power", (Condition("t", "<", Fraction(1)),), small),
        Piece("large_t", "power", (Condition("t", ">=", Fraction(1)),), -growth, label="growth"),
    )
    return DecayEnvelope("proposition34", pieces, n,
                         exponents={"decay_small_t": small, "growth_large_t": growth})


# ---------------------------------------------------------- Lebesgue region

@dataclass(frozen=True)
class LebesgueRegion:
    """Closed quadrangle ABCD in (1/p, 1/q) coordinates."""

    n: int
    m1: Fraction
    m2: Fraction
    b: Fraction
    p0: Fraction
    p1: Fraction
    A: tuple
    B: tuple
    C: tuple
    D: tuple
    upsilon1: Fraction
    upsilon2: Fraction
    epsilon: Fraction = DEFAULT_EPSILON

    @property
    def vertices(self):
        return (self.A, self.B, self.C, self.D)

    def hull(self):
        return _hull(list(self.vertices))

    @property
    def degenerate(self):
        return len(self.hull()) < 3

    def to_dict(self):
        pt = lambda v: [str(v[0]), str(v[1])]
        return {"n": self.n, "m1": str(self.m1), "m2": str(self.m2), "b": str(self.b),
                "p0": str(self.p0), "p1": str(self.p1), "A": pt(self.A), "B": pt(self.B),
                "C": pt(self.C), "D": pt(self.D), "upsilon1": str(self.upsilon1),
                "upsilon2": str(self.upsilon2), "epsilon": str(self.epsilon),
                "hull": [pt(v) for v in self.hull()]}


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    h = lower[:-1] + upper[:-1]
    if len(h) == 2 or len(h) < 3:
        return [pts[0], pts[-1]]
    return h


def quadrangle(n, m2, b, m1=None, epsilon=DEFAULT_EPSILON):
    """Admissible (1/p, 1/q) region for the weighted propagator.

    p0 = 2 if m2 = 2, else 2n(m2-2)/(n(m2-2)+2b); p1 = n/(n-upsilon2).
    Requires 2 <= m1 <= m2 and 0 <= b <= n(m1-2)/2 (m1 defaults to m2).
    """
    n = int(n)
    m2 = frac(m2)
    m1 = m2 if m1 is None else frac(m1)
    b = frac(b)
    if not (2 <= m1 <= m2):
        raise HypothesisError("Lebesgue estimates need 2 <= m1 <= m2")
    if not (0 <= b <= Fraction(n) * (m1 - 2) / 2):
        raise HypothesisError(f"b = {b} outside [0, n(m1-2)/2] = [0, {Fraction(n) * (m1 - 2) / 2}]")
    p0 = Fraction(2) if m2 == 2 else 2 * n * (m2 - 2) / (n * (m2 - 2) + 2 * b)
    ups1, ups2 = mu(n, m1, b), mu(n, m2, b)
    p1 = Fraction(n) / (n - ups2)
    A = (1 / p0, 1 - 1 / p0)
    B = (Fraction(1), 1 - 1 / p1)
    C = (Fraction(1), Fraction(0))
    D = (1 / p1, Fraction(0))
    return LebesgueRegion(n, m1, m2, b, p0, p1, A, B, C, D, ups1, ups2, frac(epsilon))


def _on_segment(a, b, p):
    if _cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def classify(region, p, q):
    """'interior', 'boundary' or 'outside' for the pair (p, q)."""
    pt = (recip(p), recip(q))
    h = region.hull()
    if len(h) == 1:
        return "boundary" if pt == h[0] else "outside"
    if len(h) == 2:
        return "boundary" if _on_segment(h[0], h[1], pt) else "outside"
    signs = [_cross(h[i], h[(i + 1) % len(h)], pt) for i in range(len(h))]
    if any(s < 0 for s in signs):
        return "outside"
    return "boundary" if any(s == 0 for s in signs) else "interior"


def contains(region, p, q):
    """Membership of (1/p, 1/q) in the closed quadrangle, exact."""
    return classify(region, p, q) != "outside"


def sigma_exponent(region, q, epsilon=None):
    """Large-time L^1 -> L^q exponent with its case label."""
    eps = region.epsilon if epsilon is None else frac(epsilon)
    n, m1, b, u1 = region.n, region.m1, region.b, region.upsilon1
    w = recip(q)
    crit = u1 / n  # compare 1/q with upsilon1/n, i.e. q with n/upsilon1
    if w > crit:
        return Fraction(n, 2) - n * w, "q<n/upsilon1"
    if w < crit:
        return Fraction(n) / m1 * (1 - w) + b / m1, "q>n/upsilon1"
    return Fraction(n, 2) - n * w - eps, "q=n/upsilon1"


@dataclass(frozen=True)
class LpLqPrediction:
    small_t: Fraction
    large_t: Fraction
    case: str
    s: object
    epsilon_used: bool
    position: str
    dual: bool

    def to_dict(self):
        return {"small_t": str(self.small_t), "large_t": str(self.large_t), "case": self.case,
                "s": _jsonable(self.s), "epsilon_used": self.epsilon_used,
                "position": self.position, "dual": self.dual,
                "note": "endpoint: not numerically probed" if self.position == "boundary" else ""}


def lp_lq_prediction(region, p, q, epsilon=None):
    """Both time exponents for (p, q) in the region (decay rate |t|^-exponent)."""
    pos = classify(region, p, q)
    if pos == "outside":
        raise RegionError(f"(1/p, 1/q) = ({recip(p)}, {recip(q)}) lies outside the quadrangle")
    eps = region.epsilon if epsilon is None else frac(epsilon)
    n, m1, m2, b = region.n, region.m1, region.m2, region.b
    x, y = recip(p), recip(q)
    small = Fraction(n) / m2 * (x - y) + b / m2
    dual = x + y < 1
    if dual:  # triangle ADC: use the dual pair (q', p')
        x, y = 1 - y, 1 - x
    u, w = 1 - x, y  # 1/p', 1/q
    u0 = 1 - 1 / region.p0  # 1/p0'
    base = Fraction(n) / m1 * (x - y) + b / m1
    if u == u0 and u0 != 0:
        return LpLqPrediction(small, base, "vertex_A", None, False, pos, dual)
    inv_s = w if u0 == u else u0 * (w - u) / (u0 - u)
    s = from_recip(inv_s) if inv_s >= 0 else None
    crit = region.upsilon1 / n
    theta = 1 - (u / u0 if u0 != 0 else 0)
    if inv_s > crit:
        large = base - theta * (1 - 1 / m1) * (n * inv_s - region.upsilon1)
        case = "s<n/upsilon1"
        used = False
    elif inv_s < crit:
        large, case, used = base, "s>n/upsilon1", False
    else:
        large, case, used = base - eps, "s=n/upsilon1", True
    return LpLqPrediction(small, large, case, s, used, pos, dual)


def lp_lq_rate(region, p, q, t, phase=None, sym=None):
    """Predicted decay exponent of the L^p -> L^q norm at time t.

    Returns e with ||W_b(t)|| <= C |t|^{-e}. If ``phase``/``sym`` are
    given they must match the region's orders and weight.
    """
    if phase is not None:
        if frac(phase.m2) != region.m2 or frac(phase.m1) != region.m1:
            raise HypothesisError("phase orders do not match the region")
    if sym is not None and frac(sym.b) != region.b:
        raise HypothesisError("symbol weight does not match the region")
    if t == 0:
        raise HypothesisError("t must be nonzero")
    pred = lp_lq_prediction(region, p, q)
    return pred.small_t if abs(t) < 1 else pred.large_t


# --------------------------------------------------------------- Strichartz

@dataclass(frozen=True)
class StrichartzRange:
    """Admissible p in [p_min, p_max) and the map p -> q."""

    n: int
    m2: Fraction
    b: Fraction
    p_min: object
    p_max: object

    def q_of(self, p):
        """q with 2/q = (n/m2)(1-2/p) + b/m2."""
        v = Fraction(self.n) / self.m2 * (1 - 2 * recip(p)) + self.b / self.m2
        if v < 0:
            raise RegionError("p below the admissible range")
        return INF if v == 0 else 2 / v

    def admissible(self, p):
        lo_ok = (p >= self.p_min) if p != INF else True
        hi_ok = (p != INF) and (self.p_max == INF or p < self.p_max)
        return lo_ok and hi_ok and (self.p_min != INF)

    def sample(self, count=8):
        """``count`` admissible (p, q) pairs, evenly spaced in 1/p."""
        u_hi = recip(self.p_min)
        u_lo = recip(self.p_max)
        out = []
        for k in range(count):
            u = u_hi - (u_hi - u_lo) * Fraction(k, count)
            p = from_recip(u)
            out.append((p, self.q_of(p)))
        return out

    def to_dict(self):
        return {"n": self.n, "m2": str(self.m2), "b": str(self.b),
                "p_min": _jsonable(self.p_min), "p_max": _jsonable(self.p_max),
                "relation": "2/q = (n/m2)(1-2/p) + b/m2", "p_max_open": True}


def strichartz_pairs(n, m2, b, m1=None):
    """Admissible Strichartz range; p_max = 2n/(n-m2+b), or inf if n-m2+b <= 0."""
    reg = quadrangle(n, m2, b, m1)
    p0p = from_recip(1 - 1 / reg.p0)
    den = n - reg.m2 + reg.b
    p_max = INF if den <= 0 else 2 * Fraction(n) / den
    if p0p == INF or (p_max != INF and p0p >= p_max):
        raise RegionError(f"empty Strichartz range: p0' = {p0p} is not below {p_max}")
    return StrichartzRange(int(n), reg.m2, reg.b, p0p, p_max)


# ------------------------------------------------------ fractional Schrodinger

@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object
    lo_closed: bool
    hi_closed: bool

    @property
    def empty(self):
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def __contains__(self, v):
        if self.empty:
            return False
        lo_ok = v > self.lo or (self.lo_closed and v == self.lo)
        hi_ok = v < self.hi or (self.hi_closed and v == self.hi)
        return lo_ok and hi_ok

    def intersect(self, other):
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lc, hc)

    def to_dict(self):
        return {"lo": _jsonable(self.lo), "hi": _jsonable(self.hi),
                "lo_closed": self.lo_closed, "hi_closed": self.hi_closed, "empty": self.empty}


@dataclass(frozen=True)
class FracSchrodingerRegion:
    n: int
    alpha: Fraction
    p: Fraction
    R: Interval
    admissible_r: Interval
    beta_threshold: Fraction

    def to_dict(self):
        return {"n": self.n, "alpha": str(self.alpha), "p": str(self.p), "R": self.R.to_dict(),
                "admissible_r": self.admissible_r.to_dict(),
                "beta_threshold": str(self.beta_threshold),
                "omega": "growth rate reported, not computed"}


def r_interval(alpha, p):
    """The interval R_{p,alpha} of potential integrability indices."""
    a, p = frac(alpha), frac(p)
    c = (2 * a - 1) / a
    if p == 2:
        return Interval(INF, INF, True, True)
    hi = (2 * a - 1) * p / (a * (2 - p))
    if p < c:
        return Interval(p, hi, True, False)
    return Interval(p / (a * (2 - p)), hi, False, False)


def frac_schrodinger_region(n, alpha, p):
    """Admissible r and the beta threshold for the fractional Schrodinger operator."""
    a, p = frac(alpha), frac(p)
    if not a > 1:
        raise ParameterRangeError("alpha must exceed 1")
    if not (1 < p <= 2):
        raise ParameterRangeError("p must lie in (1, 2]")
    R = r_interval(a, p)
    adm = Interval(Fraction(n) / (2 * a), INF, False, True).intersect(R)
    beta = n * abs(Fraction(1, 2) - 1 / p) + 1 / p
    return FracSchrodingerRegion(int(n), a, p, R, adm, beta)
