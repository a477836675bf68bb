"""Smoothing symbols psi(xi) and their Gaussian regularization."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, HypothesisError

KINDS = ("bessel_weight", "monomial", "pure_power", "constant_one", "custom")


@dataclass(frozen=True)
class SymbolSpec:
    """A symbol with growth order ``b1`` near the origin and ``b2`` at infinity.

    ``b`` is the weight exponent for ``bessel_weight`` and ``pure_power``;
    ``multi_index`` is used by ``monomial``.
    """

    kind: str
    b1: float
    b2: float
    b: float = 0.0
    multi_index: tuple = ()
    func: object = field(default=None, compare=False, repr=False)
    radial_fn: object = field(default=None, compare=False, repr=False)

    @property
    def is_radial(self):
        return self.kind in ("bessel_weight", "pure_power", "constant_one") or self.radial_fn is not None

    def check_dimension(self, n):
        """Raise if the symbol is incompatible with dimension n."""
        if self.kind == "monomial" and len(self.multi_index) != n:
            raise HypothesisError(f"multi-index {self.multi_index} does not match n={n}")
        if self.b1 < -n / 2:
            raise HypothesisError(f"b1={self.b1} is below -n/2={-n / 2}")

    def to_dict(self):
        if self.kind == "custom":
            raise HypothesisError("custom symbols carry closures and cannot be serialized")
        d = {"kind": self.kind}
        if self.kind in ("bessel_weight", "pure_power"):
            d["b"] = self.b
        if self.kind == "monomial":
            d["alpha"] = list(self.multi_index)
        return d


def bessel_weight(b):
    """<xi>^b = (1+|xi|^2)^{b/2}. For b < 0 the near-origin order is b."""
    b = float(b)
    return SymbolSpec("bessel_weight", b1=min(0.0, b), b2=b, b=b)


def monomial(alpha):
    """xi^alpha for a multi-index alpha."""
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha) or not alpha:
        raise HypothesisError("multi-index entries must be nonnegative integers")
    s = float(sum(alpha))
    return SymbolSpec("monomial", b1=s, b2=s, b=s, multi_index=alpha)


def pure_power(b):
    """|xi|^b."""
    b = float(b)
    return SymbolSpec("pure_power", b1=b, b2=b, b=b)


def constant_one():
    return SymbolSpec("constant_one", b1=0.0, b2=0.0, b=0.0)


def custom(func, b1, b2, radial=None):
    """Symbol given by ``func(xi)`` on points of shape (..., n).

    ``b1`` and ``b2`` are asserted by the caller. ``radial`` is an optional
    profile ``g(s)`` with psi(xi) = g(|xi|), needed for Hankel evaluation.
    """
    if b1 > b2:
        raise HypothesisError("need b1 <= b2")
    return SymbolSpec("custom", b1=float(b1), b2=float(b2), b=float(b2), func=func,
                      radial_fn=radial)


def from_dict(d):
    kind = d.get("kind")
    if kind == "bessel_weight":
        return bessel_weight(d.get("b", 0.0))
    if kind == "monomial":
        return monomial(d["alpha"])
    if kind == "pure_power":
        return pure_power(d["b"])
    if kind in ("constant_one", None):
        return constant_one()
    raise HypothesisError(f"unknown or non-serializable symbol kind {kind!r}")


def radial_profile(spec):
    """g with psi(xi) = g(|xi|), valid for complex s off the negative axis."""
    if spec.radial_fn is not None:
        return spec.radial_fn
    if spec.kind == "constant_one":
        return lambda s: np.ones_like(np.asarray(s, dtype=complex))
    if spec.kind == "bessel_weight":
        b = spec.b
        return lambda s: (1 + np.asarray(s) ** 2) ** (b / 2)
    if spec.kind == "pure_power":
        b = spec.b
        return lambda s: np.asarray(s) ** b
    raise HypothesisError(f"symbol kind {spec.kind} is not radial")


def half_line(spec, sigma):
    """u -> psi(sigma*u) for one-dimensional symbols, analytic in u."""
    if spec.kind == "monomial":
        k = spec.multi_index[0]
        return lambda u: (sigma * np.asarray(u)) ** k
    if spec.kind == "custom" and spec.radial_fn is None:
        f = spec.func
        return lambda u: f((sigma * np.asarray(u))[..., None])
    return radial_profile(spec)


def _points(xi, n=None):
    x = np.asarray(xi, dtype=float)
    if x.ndim == 0:
        x = x[None]
    if n == 1 and x.shape[-1] != 1:
        x = x[..., None]
    return x


def eval_symbol(spec, xi):
    """psi(xi) for points of shape (n,) or (..., n)."""
    n = len(spec.multi_index) if spec.kind == "monomial" else None
    x = _points(xi, n)
    if spec.kind == "constant_one":
        out = np.ones(x.shape[:-1])
    elif spec.kind == "bessel_weight":
        out = (1 + np.sum(x * x, axis=-1)) ** (spec.b / 2)
    elif spec.kind == "pure_power":
        r = np.sqrt(np.sum(x * x, axis=-1))
        if spec.b < 0 and np.any(r == 0):
            raise DomainError("|xi|^b with b < 0 is singular at xi = 0")
        out = r ** spec.b
    elif spec.kind == "monomial":
        if x.shape[-1] != len(spec.multi_index):
            raise DomainError("point dimension does not match the multi-index")
        out = np.prod(x ** np.array(spec.multi_index), axis=-1)
    else:
        out = np.asarray(spec.func(x))
    return float(out) if np.ndim(out) == 0 and np.isrealobj(out) else out


def regularize(spec, epsilon):
    """Closure xi -> exp(-epsilon |xi|^2) psi(xi)."""
    if not epsilon > 0:
        raise HypothesisError("epsilon must be positive")
    n = len(spec.multi_index) if spec.kind == "monomial" else None

    def psi_eps(xi):
        x = _points(xi, n)
        out = np.exp(-epsilon * np.sum(x * x, axis=-1)) * eval_symbol(spec, x)
        return float(out) if np.ndim(out) == 0 and np.isrealobj(out) else out

    return psi_eps
