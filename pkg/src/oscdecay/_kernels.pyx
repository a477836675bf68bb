# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled lattice sums and compensated summation."""

from libc.math cimport exp, cos, sin, pow, fabs, sqrt

import numpy as np


cdef inline void _neumaier(double v, double* s, double* c) noexcept nogil:
    cdef double tt = s[0] + v
    if fabs(s[0]) >= fabs(v):
        c[0] += (s[0] - tt) + v
    else:
        c[0] += (v - tt) + s[0]
    s[0] = tt


def csum(values):
    """Neumaier-compensated sum of a complex vector in index order."""
    cdef const double[::1] re = np.ascontiguousarray(np.real(values), dtype=np.float64).ravel()
    cdef const double[::1] im = np.ascontiguousarray(np.imag(values), dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = re.shape[0]
    cdef double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0
    with nogil:
        for i in range(n):
            _neumaier(re[i], &sr, &cr)
            _neumaier(im[i], &si, &ci)
    return complex(sr + cr, si + ci)


cdef inline double _ipow(double v, int k) noexcept nogil:
    cdef double out = 1.0
    while k > 0:
        if k & 1:
            out *= v
        v *= v
        k >>= 1
    return out


cdef inline double _phase(double r2, double x0, int kind, const double* coef,
                          const double* expo, const int* ity, int nterm) noexcept nogil:
    # ity[j] >= 0: expo[j] is the integer ity[j]; -1: general power
    cdef double a = 0.0, r = -1.0
    cdef int j, k
    if kind == 1:
        return coef[0] * _ipow(x0, ity[0]) if ity[0] >= 0 else coef[0] * pow(x0, expo[0])
    if r2 == 0.0:
        return 0.0
    for j in range(nterm):
        k = ity[j]
        if k >= 0 and k % 2 == 0:
            a += coef[j] * _ipow(r2, k // 2)
        elif k >= 0:
            if r < 0.0:
                r = sqrt(r2)
            a += coef[j] * _ipow(r2, k // 2) * r
        else:
            a += coef[j] * pow(r2, 0.5 * expo[j])
    return a


def lattice_sum(int ndim, long npts, double h, double t, x, double eps,
                coef, expo, int phase_kind, int sym_kind, double sym_b, alpha):
    """Sum exp(i(t a + x.xi) - eps|xi|^2) psi over the lattice h*(k - c).

    ``npts`` must be 1 mod 4 so that the even-index sublattice (spacing 2h)
    shares both ends. Returns ``(fine, coarse)`` unscaled complex sums.
    Phase kinds: 0 radial power sum, 1 odd monomial ``coef*xi^k``. Symbol
    kinds: 0 one, 1 Bessel weight, 2 pure power, 3 monomial.
    """
    if ndim < 1 or ndim > 3:
        raise ValueError("compiled lattice kernel supports 1 <= n <= 3")
    cdef double[::1] cf = np.ascontiguousarray(coef, dtype=np.float64)
    cdef double[::1] ex = np.ascontiguousarray(expo, dtype=np.float64)
    cdef int nterm = cf.shape[0]
    ity_np = np.array([int(m) if float(m).is_integer() and 0 <= m < 64 else -1
                       for m in np.asarray(ex)], dtype=np.intc)
    cdef int[::1] ity = ity_np
    xs = np.zeros(3)
    xs[:ndim] = np.asarray(x, dtype=np.float64)
    al = np.zeros(3, dtype=np.int64)
    al[:ndim] = np.asarray(alpha, dtype=np.int64) if len(alpha) else 0
    cdef long c = (npts - 1) // 2
    k = np.arange(npts)
    xi = (k - c) * h
    sizes = [npts if d < ndim else 1 for d in range(3)]
    ax_xi = []
    ax_re = []
    ax_im = []
    ax_sq = []
    for d in range(3):
        if d < ndim:
            v = xi
        else:
            v = np.zeros(1)
        ax_xi.append(np.ascontiguousarray(v))
        ax_sq.append(np.ascontiguousarray(v * v))
        if d == 0:
            # axis 0 weights and phases are formed inside the loop
            continue
        ph = xs[d] * v
        w = np.exp(-eps * v * v)
        if sym_kind == 3:
            w = w * v ** int(al[d])
        ax_re.append(np.ascontiguousarray(w * np.cos(ph)))
        ax_im.append(np.ascontiguousarray(w * np.sin(ph)))
    cdef double[::1] x0 = ax_xi[0]
    cdef double[::1] q0 = ax_sq[0]
    cdef double[::1] q1 = ax_sq[1]
    cdef double[::1] q2 = ax_sq[2]
    cdef double[::1] r1 = ax_re[0]
    cdef double[::1] i1 = ax_im[0]
    cdef double[::1] r2v = ax_re[1]
    cdef double[::1] i2 = ax_im[1]
    cdef double xs0 = xs[0]
    cdef int al0 = int(al[0])
    cdef double w0
    cdef long n0 = sizes[0], n1 = sizes[1], n2 = sizes[2]
    cdef long a, b, e
    cdef double fr = 0.0, fcr = 0.0, fi = 0.0, fci = 0.0
    cdef double gr = 0.0, gcr = 0.0, gi = 0.0, gci = 0.0
    cdef double br, bi, r2, ph_, vr, vi, cosv, sinv, psi
    cdef bint even12, even
    with nogil:
        for e in range(n2):
            for b in range(n1):
                # combine axis factors of the two outer axes once per row
                br = r1[b] * r2v[e] - i1[b] * i2[e]
                bi = r1[b] * i2[e] + i1[b] * r2v[e]
                even12 = ((n1 == 1) or ((b - c) % 2 == 0)) and ((n2 == 1) or ((e - c) % 2 == 0))
                for a in range(n0):
                    r2 = q0[a] + q1[b] + q2[e]
                    ph_ = t * _phase(r2, x0[a], phase_kind, &cf[0], &ex[0], &ity[0], nterm) \
                        + xs0 * x0[a]
                    cosv = cos(ph_)
                    sinv = sin(ph_)
                    w0 = exp(-eps * q0[a])
                    if sym_kind == 1:
                        psi = w0 * pow(1.0 + r2, 0.5 * sym_b)
                    elif sym_kind == 2:
                        if r2 == 0.0:
                            psi = w0 if sym_b == 0.0 else 0.0
                        else:
                            psi = w0 * pow(r2, 0.5 * sym_b)
                    elif sym_kind == 3:
                        psi = w0 * _ipow(x0[a], al0)
                    else:
                        psi = w0
                    vr = psi * (br * cosv - bi * sinv)
                    vi = psi * (br * sinv + bi * cosv)
                    _neumaier(vr, &fr, &fcr)
                    _neumaier(vi, &fi, &fci)
                    even = even12 and ((a - c) % 2 == 0)
                    if even:
                        _neumaier(vr, &gr, &gcr)
                        _neumaier(vi, &gi, &gci)
    return complex(fr + fcr, fi + fci), complex(gr + gcr, gi + gci)
