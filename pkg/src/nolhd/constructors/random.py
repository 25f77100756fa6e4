"""Random Latin hypercube designs and i.i.d. uniform samples."""

from __future__ import annotations

import numpy as np

from ..design import DesignMatrix, as_array
from ..exceptions import DomainError


def _range(range_) -> tuple[float, float]:
    a, b = (float(v) for v in range_)
    if not a < b:
        raise DomainError(f"design range needs a < b, got [{a}, {b}]")
    return a, b


def _counts(n, p):
    if int(n) != n or int(p) != p or n < 1 or p < 1:
        raise DomainError(f"need positive integer n and p, got n={n!r}, p={p!r}")
    return int(n), int(p)


def random_latin_hypercube(n: int, p: int, range_=(0.0, 1.0), rng=None) -> DesignMatrix:
    """Random Latin hypercube design on ``[a, b]^p``.

    Column ``j`` is ``(d_j - u_j) / n`` for an independent permutation ``d_j``
    of ``1..n`` and independent ``u_ij ~ U[0, 1)``, then mapped affinely onto
    ``[a, b]``.  Each column has exactly one point in each of the ``n``
    equal-width strata ``(a + (k-1)w, a + kw]``.
    """
    n, p = _counts(n, p)
    a, b = _range(range_)
    rng = np.random.default_rng(rng)
    d = np.column_stack([rng.permutation(n) + 1 for _ in range(p)])
    u = rng.random((n, p))
    z = (d - u) / n
    return DesignMatrix((b - a) * z + a, kind="generic",
                        meta={"method": "rlhd", "range": [a, b]})


def iid_uniform_sample(n: int, p: int, range_=(0.0, 1.0), rng=None) -> DesignMatrix:
    """``n x p`` independent Uniform[a, b] draws."""
    n, p = _counts(n, p)
    a, b = _range(range_)
    rng = np.random.default_rng(rng)
    return DesignMatrix(rng.uniform(a, b, size=(n, p)), kind="iid-sample",
                        meta={"method": "iid", "range": [a, b]})


def stratum_indices(X, range_) -> np.ndarray:
    """1-based stratum of every entry for ``n`` equal strata of ``[a, b]``."""
    A = as_array(X)
    a, b = _range(range_)
    n = A.shape[0]
    v = (A - a) / (b - a) * n
    # points sit in half-open strata (lo, hi]; absorb rounding at the upper edge
    return np.ceil(v - 1e-9).astype(np.int64)


def is_stratified(X, range_) -> bool:
    """True when every column has exactly one point per stratum."""
    k = stratum_indices(X, range_)
    n = k.shape[0]
    return bool(np.all(np.sort(k, axis=0) == np.arange(1, n + 1)[:, None]))
