"""Backend selection for the hot kernels.

Every kernel in :mod:`nolhd.kernels` exists twice: a loop implementation
compiled with numba's ``@njit`` and a pure-numpy implementation.  The numba
path is used when numba imports cleanly, unless ``NOLHD_DISABLE_NUMBA`` is
set to a truthy value (``1``, ``true``, ``yes``, ``on``).

The flag only picks an implementation; it never changes what is computed.
"""

from __future__ import annotations

import os

DISABLE_ENV = "NOLHD_DISABLE_NUMBA"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def _disabled_by_env() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in {"1", "true", "yes", "on"}


USE_NUMBA = HAVE_NUMBA and not _disabled_by_env()
BACKEND = "numba" if USE_NUMBA else "numpy"


def compile_kernel(func):
    """Return ``func`` compiled in nopython mode, or ``None`` without numba.

    Compilation is lazy (first call), so importing the package stays cheap
    even when the numpy path is selected.
    """
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True, nogil=True)(func)


def pick(numba_impl, numpy_impl):
    """Choose the active implementation of one kernel."""
    if USE_NUMBA and numba_impl is not None:
        return numba_impl
    return numpy_impl
