"""Kronecker ingredients that meet the near-orthogonality hypotheses exactly.

* ``B`` is a 4 x 2 orthogonal Latin hypercube and ``D`` two orthogonal sign
  columns with ``B.T @ D = 0``; ``r = 4``.
* ``C_1 = [C0; -C0]`` and ``A_1 = [A0; A0]`` with orthogonal sign columns
  ``A0``, so ``A_1`` is orthogonal and ``A_1.T @ C_1 = 0``.
* ``(A_2, C_2)`` is a seeded joint row permutation of ``(A_1, C_1)``.
"""

from __future__ import annotations

import numpy as np

from nolhd.design import sylvester_sign_matrix

B4 = np.array([[1.5, -0.5], [0.5, 1.5], [-0.5, -1.5], [-1.5, 0.5]])
D4 = np.array([[1, 1], [1, -1], [1, -1], [1, 1]], dtype=float)
R4 = 4.0


def signed_half(h: int, m: int, rng, orthogonal: bool = False) -> np.ndarray:
    """``h x m`` columns, each a signed permutation of ``0.5, ..., h - 0.5``.

    With ``orthogonal`` the columns are mutually orthogonal (rejection sampling).
    """
    mags = np.arange(h) + 0.5
    cols: list[np.ndarray] = []
    for _ in range(2_000_000):
        col = rng.permutation(mags) * rng.choice([-1.0, 1.0], h)
        if not orthogonal or all(col @ c == 0 for c in cols):
            cols.append(col)
            if len(cols) == m:
                return np.column_stack(cols)
    raise RuntimeError("no orthogonal half found")


def kron_case(seed: int, n1: int = 16, m1: int = 3, orthogonal_c: bool = False):
    """``(A_list, C_list, B, D, r)`` for one seeded construction."""
    rng = np.random.default_rng(seed)
    h = n1 // 2
    C0 = signed_half(h, m1, rng, orthogonal_c)
    A0 = sylvester_sign_matrix(h).values[:, :m1].astype(float)
    A1, C1 = np.vstack([A0, A0]), np.vstack([C0, -C0])
    perm = rng.permutation(n1)
    return [A1, A1[perm]], [C1, C1[perm]], B4, D4, R4


def cross_block_max(rho: np.ndarray, m1: int) -> float:
    """Largest ``|rho|`` between columns of different blocks."""
    block = np.arange(rho.shape[0]) // m1
    return float(np.max(np.abs(rho[block[:, None] != block[None, :]]), initial=0.0))
