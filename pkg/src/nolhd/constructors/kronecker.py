"""Block Kronecker constructions of nearly orthogonal Latin hypercubes.

The generalized construction places ``b_qj * A_j + r * d_qj * C_j`` in block
``(q, j)``, so every column block gets its own sign matrix ``A_j`` and Latin
hypercube ``C_j``.  :func:`kronecker_base` is the plain two-term Kronecker
sum that reuses one ``A`` and one ``C`` everywhere.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..design import DesignMatrix, LatinHypercubeReport, as_array, is_latin_hypercube
from ..exceptions import DomainError


@dataclass(frozen=True, eq=False)
class KroneckerInputs:
    A_list: list[np.ndarray]
    C_list: list[np.ndarray]
    B: np.ndarray
    D: np.ndarray
    r: float

    @classmethod
    def build(cls, A_list, C_list, B, D, r) -> "KroneckerInputs":
        inputs = cls([as_array(A) for A in A_list], [as_array(C) for C in C_list],
                     as_array(B), as_array(D), float(r))
        inputs.validate()
        return inputs

    @property
    def n1(self) -> int:
        return self.C_list[0].shape[0]

    @property
    def m1(self) -> int:
        return self.C_list[0].shape[1]

    @property
    def n2(self) -> int:
        return self.B.shape[0]

    @property
    def m2(self) -> int:
        return self.B.shape[1]

    def validate(self) -> None:
        if self.B.ndim != 2 or self.B.shape != self.D.shape:
            raise DomainError(f"B {self.B.shape} and D {self.D.shape} must have equal 2-d shapes")
        m2 = self.B.shape[1]
        if len(self.A_list) != m2 or len(self.C_list) != m2:
            raise DomainError(f"need m2 = {m2} A and C blocks, got {len(self.A_list)} and {len(self.C_list)}")
        shape = self.C_list[0].shape
        for j, (A, C) in enumerate(zip(self.A_list, self.C_list)):
            if A.shape != shape or C.shape != shape:
                raise DomainError(f"block {j + 1}: A {A.shape} and C {C.shape} must both be {shape}")
            if not np.all(np.abs(A) == 1):
                raise DomainError(f"A_{j + 1} must have entries +/-1")
        if not np.all(np.abs(self.D) == 1):
            raise DomainError("D must have entries +/-1")


@dataclass(frozen=True)
class Prop1Report:
    cond_a: bool
    cond_b: bool
    r_equals_n2: bool
    details: dict = field(default_factory=dict)

    @property
    def guarantees_lh(self) -> bool:
        return self.r_equals_n2 and (self.cond_a or self.cond_b)


@dataclass(frozen=True)
class KroneckerReport:
    prop1: Prop1Report
    latin_hypercube: LatinHypercubeReport
    ingredients_lh: dict


def _negation_paired(levels: np.ndarray, signs: np.ndarray, decimals: int = 9) -> bool:
    # rows can be matched (p, p') with levels negated and signs equal; zero pairs with itself
    counts = Counter(zip(np.round(levels, decimals).tolist(), signs.tolist()))
    for (lev, sg), c in counts.items():
        if lev != 0 and counts.get((-lev, sg), 0) != c:
            return False
    return True


def check_prop1_conditions(inputs: KroneckerInputs) -> Prop1Report:
    """Sufficient conditions for the block design to be a Latin hypercube.

    (a) within every ``C_j`` column the rows pair up with ``c`` negated and the
    matching ``A_j`` entry unchanged; (b) within every column of ``B`` the rows
    pair up with ``b`` negated and the ``D`` entry unchanged.  Pairings are
    searched per column.
    """
    fail_a = [(j, i) for j, (A, C) in enumerate(zip(inputs.A_list, inputs.C_list))
              for i in range(C.shape[1]) if not _negation_paired(C[:, i], A[:, i])]
    fail_b = [k for k in range(inputs.m2) if not _negation_paired(inputs.B[:, k], inputs.D[:, k])]
    return Prop1Report(
        cond_a=not fail_a,
        cond_b=not fail_b,
        r_equals_n2=bool(np.isclose(inputs.r, inputs.n2)),
        details={"cond_a_failures": fail_a[:10], "cond_b_failures": fail_b[:10],
                 "r": inputs.r, "n2": inputs.n2},
    )


def assemble_blocks(A_list, C_list, B, D, r) -> np.ndarray:
    """Raw block matrix without validation; ``A_list``/``C_list`` may carry a
    leading batch axis (``m2 x ... x n1 x m1``)."""
    A = np.stack([np.asarray(a, dtype=float) for a in A_list], axis=-3)
    C = np.stack([np.asarray(c, dtype=float) for c in C_list], axis=-3)
    B, D = np.asarray(B, dtype=float), np.asarray(D, dtype=float)
    # blocks[..., q, j, i, k] = b_qj A_j[i, k] + r d_qj C_j[i, k]
    blocks = (B[:, :, None, None] * A[..., None, :, :, :]
              + float(r) * D[:, :, None, None] * C[..., None, :, :, :])
    n2, m2, n1, m1 = blocks.shape[-4:]
    blocks = np.swapaxes(blocks, -3, -2)
    return blocks.reshape(blocks.shape[:-4] + (n2 * n1, m2 * m1))


def kronecker_construct(A_list, C_list, B, D, r) -> tuple[DesignMatrix, KroneckerReport]:
    """Block Kronecker design of size ``(n1 n2) x (m1 m2)``.

    The output is tagged ``latin-hypercube`` only when the direct check
    passes; failed sufficient conditions are reported, never raised.
    """
    inputs = KroneckerInputs.build(A_list, C_list, B, D, r)
    n1, m1, n2, m2 = inputs.n1, inputs.m1, inputs.n2, inputs.m2
    M = assemble_blocks(inputs.A_list, inputs.C_list, inputs.B, inputs.D, inputs.r)
    lh = is_latin_hypercube(M)
    report = KroneckerReport(
        prop1=check_prop1_conditions(inputs),
        latin_hypercube=lh,
        ingredients_lh={
            "B": bool(is_latin_hypercube(inputs.B)),
            "C": [bool(is_latin_hypercube(C)) for C in inputs.C_list],
        },
    )
    design = DesignMatrix(M, kind="latin-hypercube" if lh else "generic",
                          meta={"method": "kron", "n1": n1, "m1": m1, "n2": n2, "m2": m2,
                                "r": inputs.r})
    return design, report


def kronecker_base(A, B, C, D, r) -> DesignMatrix:
    """Two-term Kronecker sum ``A kron B + r * C kron D``."""
    A, B, C, D = (as_array(M) for M in (A, B, C, D))
    if A.shape != C.shape:
        raise DomainError(f"A {A.shape} and C {C.shape} must have equal shapes")
    if B.shape != D.shape:
        raise DomainError(f"B {B.shape} and D {D.shape} must have equal shapes")
    L = np.kron(A, B) + float(r) * np.kron(C, D)
    lh = is_latin_hypercube(L)
    return DesignMatrix(L, kind="latin-hypercube" if lh else "generic",
                        meta={"method": "kron-base", "r": float(r)})


def joint_row_permute(A, C, rng=None, perm=None) -> tuple[np.ndarray, np.ndarray]:
    """Apply one shared row permutation to ``A`` and ``C``.

    Sharing the permutation keeps ``A.T @ C`` unchanged.
    """
    A, C = as_array(A), as_array(C)
    if A.shape[0] != C.shape[0]:
        raise DomainError(f"row counts differ: {A.shape[0]} vs {C.shape[0]}")
    if perm is None:
        perm = np.random.default_rng(rng).permutation(A.shape[0])
    return A[perm], C[perm]
