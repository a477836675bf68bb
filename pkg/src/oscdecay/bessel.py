"""Bessel functions of integer and half-integer order up to 6.

Small arguments use the ascending series, large arguments the Hankel
asymptotic expansion, which terminates exactly for half-integer orders.
Everything accepts complex arguments in the right half-plane.
"""

import math

import numpy as np

from .errors import UnsupportedOrderError

SERIES_RADIUS = 14.0
_MAX_TERMS = 80


def check_order(nu):
    if not (0 <= nu <= 6 and float(2 * nu).is_integer()):
        raise UnsupportedOrderError(f"Bessel order {nu} outside integer/half-integer 0..6")
    return float(nu)


def lambda_series(nu, z):
    """J_nu(z) / z^nu by its ascending series (entire in z)."""
    z = np.asarray(z)
    w = -(z * z) / 4
    term = np.full(w.shape, 1.0 / (2 ** nu * math.gamma(nu + 1)), dtype=complex if np.iscomplexobj(w) else float)
    total = term.copy()
    for k in range(1, _MAX_TERMS):
        term = term * w / (k * (k + nu))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _asym_coeffs(nu, count):
    mu = 4 * nu * nu
    a = [1.0]
    for k in range(1, count):
        a.append(a[-1] * (mu - (2 * k - 1) ** 2) / (k * 8))
    return a


def hankel_factor(nu, z, kind):
    """H^{(kind)}_nu(z) * exp(-+ i z), from the large-argument expansion.

    kind 1 returns H1(z) e^{-iz}, kind 2 returns H2(z) e^{iz}; both are
    slowly varying and safe to multiply by an exponential carried in a phase.
    """
    z = np.asarray(z, dtype=complex)
    s = 1j if kind == 1 else -1j
    a = _asym_coeffs(nu, _MAX_TERMS)
    total = np.ones(z.shape, dtype=complex)
    prev = np.ones(z.shape)
    active = np.ones(z.shape, dtype=bool)
    zk = np.ones(z.shape, dtype=complex)
    for k in range(1, _MAX_TERMS):
        if a[k] == 0.0:
            break
        zk = zk * (s / z)
        term = a[k] * zk
        mag = np.abs(term)
        if k > nu + 1:
            active &= mag < prev
        total = np.where(active, total + term, total)
        prev = np.where(active, mag, prev)
        active &= mag > 1e-17
        if not active.any():
            break
    omega = -s * (nu * math.pi / 2 + math.pi / 4)
    return np.sqrt(2 / (math.pi * z)) * np.exp(omega) * total


def lambda_fn(nu, z):
    """J_nu(z)/z^nu for complex z with Re z >= 0."""
    z = np.asarray(z)
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) <= SERIES_RADIUS
    if small.any():
        out[small] = lambda_series(nu, z[small])
    big = ~small
    if big.any():
        zb = z[big].astype(complex)
        j = 0.5 * (hankel_factor(nu, zb, 1) * np.exp(1j * zb)
                   + hankel_factor(nu, zb, 2) * np.exp(-1j * zb))
        out[big] = j / zb ** nu
    return out


def bessel_j(order, z):
    """J_order(z) for real z >= 0; order integer or half-integer in [0, 6]."""
    nu = check_order(order)
    za = np.asarray(z, dtype=float)
    if np.any(za < 0):
        raise ValueError("bessel_j expects z >= 0")
    out = np.empty(za.shape)
    small = za <= max(12.0, 2 * nu)
    if small.any():
        zs = za[small]
        out[small] = np.real(lambda_series(nu, zs)) * zs ** nu
    big = ~small
    if big.any():
        zb = za[big]
        out[big] = np.real(hankel_factor(nu, zb, 1) * np.exp(1j * zb))
    return float(out) if out.ndim == 0 else out
