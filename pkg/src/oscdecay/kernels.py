"""Kernel backend: the compiled extension when importable, else numpy.

Set ``OSCDECAY_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("OSCDECAY_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

csum = _impl.csum


def lattice_sum(ndim, npts, h, t, x, eps, coef, expo, phase_kind, sym_kind, sym_b, alpha):
    """Lattice sum on the selected backend; n > 3 always uses numpy."""
    impl = _impl if ndim <= 3 else _kernels_py
    return impl.lattice_sum(ndim, npts, h, t, x, eps, coef, expo, phase_kind,
                            sym_kind, sym_b, alpha)
