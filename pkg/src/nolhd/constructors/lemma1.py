"""Nearly orthogonal Latin hypercubes from orthogonal arrays.

Given an OA(s^2, 2f, s) ``A`` and an ``s x p`` Latin hypercube ``B``, column
``j`` of ``B`` relabels the symbols of ``A``; every consecutive pair of the
relabelled columns ``(x, y)`` becomes ``(x + s*y, -s*x + y)``.  The result is
an ``s^2 x 2pf`` Latin hypercube whose correlation matrix is
``rho(B) kron I_{2f}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..design import (DesignMatrix, OrthogonalArray, as_array, check_oa_strength2,
                      is_latin_hypercube)
from ..exceptions import RejectedInputError


@dataclass(frozen=True, eq=False)
class Lemma1Inputs:
    A: OrthogonalArray
    B: np.ndarray

    @property
    def s(self) -> int:
        return self.A.s

    @property
    def f(self) -> int:
        return self.A.cols // 2

    @property
    def p(self) -> int:
        return self.B.shape[1]

    def validate(self) -> None:
        s = self.A.s
        if self.A.runs != s * s:
            raise RejectedInputError(f"OA must have s^2 = {s * s} runs, got {self.A.runs}")
        if self.A.cols % 2 or self.A.cols == 0:
            raise RejectedInputError(f"OA needs an even, positive column count, got {self.A.cols}")
        oa = check_oa_strength2(self.A)
        if not oa:
            raise RejectedInputError(f"A is not a strength-two OA: {oa.reason}")
        if self.B.ndim != 2 or self.B.shape[0] != s:
            raise RejectedInputError(f"B must have s = {s} rows, got shape {self.B.shape}")
        lh = is_latin_hypercube(self.B)
        if not lh:
            raise RejectedInputError(f"B is not a Latin hypercube: {lh.reason}")


def lemma1_construct(A: OrthogonalArray, B) -> DesignMatrix:
    """OA-based nearly orthogonal Latin hypercube of size ``s^2 x 2pf``.

    Raises
    ------
    RejectedInputError
        If ``A`` is not an OA(s^2, 2f, s) of strength two or ``B`` is not an
        ``s``-run Latin hypercube on the centered levels.
    """
    inputs = Lemma1Inputs(A, as_array(B))
    inputs.validate()
    s, f, p = inputs.s, inputs.f, inputs.p
    codes = np.asarray(A.values, dtype=np.int64) - 1
    blocks = []
    for j in range(p):
        Aj = inputs.B[codes, j]
        x, y = Aj[:, 0::2], Aj[:, 1::2]
        Mj = np.empty_like(Aj)
        Mj[:, 0::2] = x + s * y
        Mj[:, 1::2] = -s * x + y
        blocks.append(Mj)
    M = np.hstack(blocks)
    return DesignMatrix(M, kind="latin-hypercube",
                        meta={"method": "lemma1", "s": s, "f": f, "p": p})
