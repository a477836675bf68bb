"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

import math

import numpy as np

_CHUNK = 1 << 18


def csum(values):
    """Correctly rounded sum of a complex vector (real and imaginary parts)."""
    v = np.asarray(values).ravel()
    return complex(math.fsum(np.real(v).tolist()), math.fsum(np.imag(v).tolist()))


class _Acc:
    """Neumaier accumulator over chunk partial sums."""

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, v):
        t = self.s + v
        if abs(self.s) >= abs(v):
            self.c += (self.s - t) + v
        else:
            self.c += (v - t) + self.s
        self.s = t

    @property
    def value(self):
        return self.s + self.c


def lattice_sum(ndim, npts, h, t, x, eps, coef, expo, phase_kind, sym_kind, sym_b, alpha):
    """Same contract as the compiled ``lattice_sum``; any ndim is accepted."""
    c = (npts - 1) // 2
    k = np.arange(npts)
    xi = (k - c) * h
    even_ax = ((k - c) % 2) == 0
    x = np.asarray(x, dtype=float)
    alpha = list(alpha) if len(alpha) else [0] * ndim
    coef = np.asarray(coef, dtype=float)
    expo = np.asarray(expo, dtype=float)
    ax = []
    for d in range(ndim):
        w = np.exp(-eps * xi * xi + 1j * x[d] * xi)
        if sym_kind == 3:
            w = w * xi ** int(alpha[d])
        ax.append(w)
    sq = xi * xi
    acc = [_Acc() for _ in range(4)]

    def block(r2, x0, wfac, emask):
        if phase_kind == 1:
            a = coef[0] * x0 ** expo[0]
        else:
            a = np.zeros_like(r2)
            for cj, mj in zip(coef, expo):
                a = a + cj * r2 ** (0.5 * mj)
        val = np.exp(1j * t * a) * wfac
        if sym_kind == 1:
            val = val * (1.0 + r2) ** (0.5 * sym_b)
        elif sym_kind == 2:
            with np.errstate(divide="ignore"):
                p = np.where(r2 == 0.0, 1.0 if sym_b == 0.0 else 0.0,
                             np.where(r2 == 0.0, 1.0, r2) ** (0.5 * sym_b))
            val = val * p
        fs = np.sum(val)
        gs = np.sum(val[emask])
        acc[0].add(float(fs.real))
        acc[1].add(float(fs.imag))
        acc[2].add(float(gs.real))
        acc[3].add(float(gs.imag))

    if ndim == 1:
        for s in range(0, npts, _CHUNK):
            sl = slice(s, min(s + _CHUNK, npts))
            block(sq[sl], xi[sl], ax[0][sl], even_ax[sl])
    else:
        inner = ndim - 1 if npts ** (ndim - 1) <= _CHUNK else 1
        outer_dims = ndim - inner
        # outer indices loop in lexicographic order; inner axes are vectorized
        iq = np.zeros((npts,) * inner)
        iw = np.ones((npts,) * inner, dtype=complex)
        ie = np.ones((npts,) * inner, dtype=bool)
        for d in range(inner):
            shape = [1] * inner
            shape[d] = npts
            iq = iq + sq.reshape(shape)
            iw = iw * ax[outer_dims + d].reshape(shape)
            ie = ie & even_ax.reshape(shape)
        for idx in np.ndindex(*([npts] * outer_dims)):
            oq = sum(sq[i] for i in idx)
            ow = np.prod([ax[d][i] for d, i in enumerate(idx)])
            oe = all(even_ax[i] for i in idx)
            x0 = xi[idx[0]] * np.ones_like(iq)
            r2 = oq + iq
            em = ie if oe else np.zeros_like(ie)
            block(r2.ravel(), x0.ravel(), (ow * iw).ravel(), em.ravel())
    return complex(acc[0].value, acc[1].value), complex(acc[2].value, acc[3].value)
