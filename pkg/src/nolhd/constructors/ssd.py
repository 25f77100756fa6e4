"""Two-level designs optimised for E(s^2) by columnwise pair exchange.

This stands in for commercial supersaturated-design software: each column
keeps its count of +1 entries, and swapping one +1 with one -1 is applied
whenever it lowers ``sum_j (z_c . z_j)^2``.  Passes repeat until no column
improves.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..design import DesignMatrix, SignMatrix
from ..exceptions import DomainError, UnsupportedParameterError


def e_s2(Z) -> float:
    """Average squared inner product over column pairs of a +/-1 matrix."""
    Z = np.asarray(Z, dtype=np.int64)
    p = Z.shape[1]
    if p < 2:
        return 0.0
    S = Z.T @ Z
    off = S[np.triu_indices(p, 1)]
    return float(np.sum(off * off)) / (p * (p - 1) / 2)


def _random_start(n, p, rng, near_balanced):
    cols = []
    for _ in range(p):
        n_plus = n // 2
        if near_balanced and n % 2:
            n_plus += int(rng.integers(0, 2))
        col = np.full(n, -1, dtype=np.int64)
        col[:n_plus] = 1
        cols.append(rng.permutation(col))
    return np.column_stack(cols)


def es2_descent(n: int, p: int, rng=None, *, allow_odd: bool = False,
                max_passes: int = 1000) -> tuple[np.ndarray, dict]:
    """Random (near-)balanced start followed by exchange descent on E(s^2).

    Returns the +/-1 matrix and a small diagnostics dict.
    """
    if int(n) != n or int(p) != p or n < 2 or p < 2:
        raise DomainError(f"need n >= 2 and p >= 2, got n={n!r}, p={p!r}")
    n, p = int(n), int(p)
    if n % 2 and not allow_odd:
        raise UnsupportedParameterError(f"balanced two-level columns need even n, got {n}")
    rng = np.random.default_rng(rng)
    Z = np.ascontiguousarray(_random_start(n, p, rng, near_balanced=bool(n % 2)))
    start = e_s2(Z)
    Sm = Z.T @ Z
    passes = 0
    while passes < max_passes:
        passes += 1
        if kernels.es2_pass(Z, Sm) == 0:
            break
    return Z, {"e_s2": e_s2(Z), "e_s2_start": start, "passes": passes}


def es2_supersaturated(n: int, p: int, rng=None, *, allow_odd: bool = False,
                       max_passes: int = 1000) -> DesignMatrix:
    """Two-level design at levels ``+/-(n-1)/2`` with small E(s^2).

    Columns are balanced (sum zero).  For odd ``n`` exact balance is
    impossible; pass ``allow_odd=True`` to accept columns summing to ``+/-1``.

    Raises
    ------
    UnsupportedParameterError
        If ``n`` is odd and ``allow_odd`` is false.
    """
    Z, info = es2_descent(n, p, rng, allow_odd=allow_odd, max_passes=max_passes)
    half = (int(n) - 1) / 2
    return DesignMatrix(Z * half, kind="two-level",
                        meta={"method": "ssd", "balanced": int(n) % 2 == 0, **info})


def nearly_orthogonal_signs(n: int, m: int, rng=None) -> SignMatrix:
    """``n x m`` +/-1 matrix with small column inner products (any ``n``)."""
    Z, _ = es2_descent(n, max(m, 2), rng, allow_odd=True)
    return SignMatrix(Z[:, :m])
