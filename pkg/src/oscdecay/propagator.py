"""Spectral evolution u(t) = exp(i t a(D)) psi(D) u0 on a periodic box.

Fields live on the grid x_j = -L + 2L j / P per axis; the discrete Fourier
multiplier uses the wavenumbers 2 pi/(2L) * {-P/2, ..., P/2-1}.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import phase as ph, symbol as sy
from .errors import HypothesisError

log = logging.getLogger(__name__)

FRAME_FRACTION = 0.1
FRAME_TOLERANCE = 1e-6
DEFAULT_POINTS = {1: 2 ** 10, 2: 2 ** 8, 3: 2 ** 6}
DEFAULT_HALF_WIDTH = 32.0


@dataclass(frozen=True)
class GridField:
    n: int
    points: int
    half_width: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.points < 2 or self.points & (self.points - 1):
            raise HypothesisError("points per axis must be a power of two")
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.points,) * self.n:
            raise HypothesisError(f"values must have shape {(self.points,) * self.n}")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def dx(self):
        return 2 * self.half_width / self.points

    @property
    def cell_volume(self):
        return self.dx ** self.n

    def axis(self):
        return -self.half_width + self.dx * np.arange(self.points)

    def wavenumbers(self):
        return 2 * np.pi * np.fft.fftfreq(self.points, d=self.dx)

    def with_values(self, values):
        return GridField(self.n, self.points, self.half_width, values)


def coordinates(n, points, half_width):
    """Grid coordinates stacked on the last axis, shape (P,)*n + (n,)."""
    ax = -half_width + (2 * half_width / points) * np.arange(points)
    return np.stack(np.meshgrid(*([ax] * n), indexing="ij"), axis=-1)


def make_field(fn, n=1, points=None, half_width=DEFAULT_HALF_WIDTH):
    """Sample ``fn(x)`` (x of shape (..., n)) on the grid."""
    points = points or DEFAULT_POINTS.get(n, 2 ** 6)
    x = coordinates(n, points, half_width)
    return GridField(n, points, half_width, fn(x))


def gaussian(n=1, points=None, half_width=DEFAULT_HALF_WIDTH, width=1.0, center=0.0, k0=0.0):
    """exp(-|x-c|^2/(2 w^2)) exp(i k0 x_1)."""
    return make_field(lambda x: np.exp(-np.sum((x - center) ** 2, axis=-1) / (2 * width ** 2)
                                       + 1j * k0 * x[..., 0]), n, points, half_width)


def point_mass(n=1, points=None, half_width=DEFAULT_HALF_WIDTH):
    """Grid delta at the origin with unit integral."""
    points = points or DEFAULT_POINTS.get(n, 2 ** 6)
    v = np.zeros((points,) * n, dtype=complex)
    dx = 2 * half_width / points
    v[(points // 2,) * n] = 1.0 / dx ** n
    return GridField(n, points, half_width, v)


def band_limited_spike(n=1, points=None, half_width=DEFAULT_HALF_WIDTH, kc=1.0):
    """Point mass filtered by exp(-|k|^2/kc^2); unit integral, spectrum negligible beyond 4 kc."""
    d = point_mass(n, points, half_width)
    k = d.wavenumbers()
    kk = np.stack(np.meshgrid(*([k] * n), indexing="ij"), axis=-1)
    filt = np.exp(-np.sum(kk ** 2, axis=-1) / kc ** 2)
    return d.with_values(np.fft.ifftn(np.fft.fftn(d.values) * filt))


def default_probes(n=1, points=None, half_width=DEFAULT_HALF_WIDTH, seed=0):
    """Gaussians of 8 widths, modulated Gaussians and a point mass."""
    points = points or DEFAULT_POINTS.get(n, 2 ** 6)
    dx = 2 * half_width / points
    widths = np.geomspace(2 * dx, half_width / 8, 8)
    rng = np.random.default_rng(seed)
    probes = [gaussian(n, points, half_width, w) for w in widths]
    for w in widths[::2]:
        k0 = float(rng.uniform(0.5, 2.0)) / w
        probes.append(gaussian(n, points, half_width, w, k0=k0))
    probes.append(point_mass(n, points, half_width))
    return probes


def _multiplier(phase, sym, field_, t):
    k = field_.wavenumbers()
    n = field_.n
    kk = np.stack(np.meshgrid(*([k] * n), indexing="ij"), axis=-1)
    if phase.kind in ("power_sum", "pure_power"):
        a = ph.radial_profile(phase)[0](np.linalg.norm(kk, axis=-1))
    else:
        a = ph.eval_phase(phase, kk)
    mult = np.exp(1j * t * np.asarray(a))
    if sym is not None:
        r = np.linalg.norm(kk, axis=-1)
        if sym.kind == "pure_power" and sym.b < 0:
            psi = np.zeros(r.shape)
            nz = r > 0
            psi[nz] = r[nz] ** sym.b
            log.info("symbol singular at the zero mode; set to 0 there")
        else:
            psi = np.asarray(sy.eval_symbol(sym, kk), dtype=complex)
        mult = mult * psi
    return mult


def evolve(phase, sym, u0, t):
    """exp(i t a(D)) psi(D) u0 by FFT; ``sym=None`` means psi = 1."""
    if phase.dimension != u0.n:
        raise HypothesisError("phase and field dimensions differ")
    if t == 0 and sym is None:
        return u0
    spec = np.fft.fftn(u0.values)
    out = np.fft.ifftn(spec * _multiplier(phase, sym, u0, t))
    return u0.with_values(out)


def lp_norm(field_, p):
    """Riemann-sum L^p norm; p = inf is the max norm."""
    a = np.abs(field_.values)
    if p == math.inf:
        return float(a.max())
    if p <= 0:
        raise HypothesisError("p must be positive")
    return float((np.sum(a ** p) * field_.cell_volume) ** (1.0 / p))


def frame_fraction(field_, frac=FRAME_FRACTION):
    """Share of |u|^2 mass in the outer frame |x_j| > (1-frac) L for some j."""
    x = np.abs(field_.axis())
    edge = x > (1 - frac) * field_.half_width
    mass = np.abs(field_.values) ** 2
    mask = np.zeros(mass.shape, dtype=bool)
    for d in range(field_.n):
        shape = [1] * field_.n
        shape[d] = field_.points
        mask |= edge.reshape(shape)
    total = mass.sum()
    return float(mass[mask].sum() / total) if total > 0 else 0.0


@dataclass(frozen=True)
class RatioResult:
    """Largest measured ||W u||_q / ||u||_p; a lower bound on the operator norm."""

    value: float
    best_probe: int
    ratios: tuple
    aliasing: bool
    label: str = "lower bound"


def _pmap(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(i) for i in items]


def operator_ratio(phase, sym, p, q, t, probe_set, threads=1):
    """max over probes of ||W_b(t) u||_q / ||u||_p with a frame-mass aliasing flag."""
    probes = list(probe_set)
    if not probes:
        raise HypothesisError("probe set is empty")

    def one(u):
        w = evolve(phase, sym, u, t)
        return lp_norm(w, q) / lp_norm(u, p), frame_fraction(w) > FRAME_TOLERANCE

    res = _pmap(one, probes, threads)
    ratios = tuple(r for r, _ in res)
    best = int(np.argmax(ratios))
    return RatioResult(float(ratios[best]), best, ratios, any(a for _, a in res))


@dataclass(frozen=True)
class StrichartzResult:
    value: float
    value_doubled: float
    delta: float
    unstable: bool
    window: float


def _mixed_norm(norms, dt, q):
    if q == math.inf:
        return float(np.max(norms))
    return float((np.sum(norms ** q) * dt) ** (1.0 / q))


def strichartz_norm(phase, u0, p, q, time_window, time_steps=256, b=0.0, threshold=0.2):
    """(int_{-T}^{T} ||<D>^{b/2} W(t) u0||_p^q dt)^{1/q}, also at 2T.

    ``time_steps`` is the number of uniform steps per unit time (midpoint
    rule). ``delta`` is the relative change from T to 2T and ``unstable``
    flags a change above ``threshold``.
    """
    T = float(time_window)
    if T <= 0:
        raise HypothesisError("time window must be positive")
    nsteps = int(math.ceil(2 * (2 * T) * time_steps))
    dt = 4 * T / nsteps
    times = -2 * T + dt * (np.arange(nsteps) + 0.5)
    spec = np.fft.fftn(u0.values)
    if b:
        spec = spec * _multiplier(phase, sy.bessel_weight(b / 2), u0, 0.0)
    k = u0.wavenumbers()
    kk = np.stack(np.meshgrid(*([k] * u0.n), indexing="ij"), axis=-1)
    if phase.kind in ("power_sum", "pure_power"):
        a = ph.radial_profile(phase)[0](np.linalg.norm(kk, axis=-1))
    else:
        a = ph.eval_phase(phase, kk)
    norms = np.empty(nsteps)
    for i, t in enumerate(times):
        w = u0.with_values(np.fft.ifftn(spec * np.exp(1j * t * a)))
        norms[i] = lp_norm(w, p)
    inner = np.abs(times) < T
    v1 = _mixed_norm(norms[inner], dt, q)
    v2 = _mixed_norm(norms, dt, q)
    delta = abs(v2 - v1) / v1
    return StrichartzResult(v1, v2, float(delta), bool(delta > threshold), T)


@dataclass(frozen=True)
class ResolventResult:
    value: float
    threshold: float
    below_threshold: bool
    ratios: tuple
    aliasing: bool
    label: str = "lower bound"


def resolvent_smallness(alpha, V, p, q, lambda_re, probe_set=None, threshold=0.5):
    """max over probes of ||V (lambda - i|D|^{2 alpha})^{-1} u||_p / ||u||_p.

    ``V`` is a GridField; ``q`` is the intermediate exponent with
    1/p - 1/q = 1/r and is only recorded.
    """
    if not lambda_re > 0:
        raise HypothesisError("lambda_re must be positive")
    if not alpha > 0:
        raise HypothesisError("alpha must be positive")
    probes = list(probe_set) if probe_set is not None else default_probes(V.n, V.points, V.half_width)
    k = V.wavenumbers()
    kk = np.stack(np.meshgrid(*([k] * V.n), indexing="ij"), axis=-1)
    r = np.linalg.norm(kk, axis=-1)
    mult = 1.0 / (lambda_re - 1j * r ** (2 * alpha))
    ratios, alias = [], False
    for u in probes:
        w = u.with_values(V.values * np.fft.ifftn(np.fft.fftn(u.values) * mult))
        ratios.append(lp_norm(w, p) / lp_norm(u, p))
        alias |= frame_fraction(w) > FRAME_TOLERANCE
    val = float(max(ratios))
    return ResolventResult(val, threshold, val < threshold, tuple(ratios), alias)
