"""Core design types, level systems and structural checks.

Everything downstream works on plain ``numpy`` arrays; the small dataclasses
here add a ``kind`` tag and validation on top.  Functions accept either a
:class:`DesignMatrix` or anything :func:`numpy.asarray` understands.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

import numpy as np

from .exceptions import DomainError, UnsupportedParameterError
from .galois import factor_prime_power, field_tables

LEVEL_TOL = 1e-9

Kind = Literal["latin-hypercube", "two-level", "iid-sample", "generic"]
KINDS = ("latin-hypercube", "two-level", "iid-sample", "generic")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LevelSet:
    """The ``n`` centered levels a Latin hypercube column permutes."""

    n: int
    levels: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.levels if dtype is None else self.levels.astype(dtype)


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """An ``n x p`` real design with a kind tag and free-form metadata.

    ``values`` is stored read-only.  A ``latin-hypercube`` tag is verified on
    construction, so holding one is proof the check passed.
    """

    values: np.ndarray
    kind: Kind = "generic"
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2 or vals.size == 0:
            raise DomainError(f"design must be a non-empty 2-d array, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("design contains non-finite entries")
        if self.kind not in KINDS:
            raise DomainError(f"unknown design kind {self.kind!r}")
        object.__setattr__(self, "values", _frozen(vals))
        n = vals.shape[0]
        if self.kind == "latin-hypercube":
            report = is_latin_hypercube(vals)
            if not report:
                raise DomainError(f"not a Latin hypercube: {report.reason}")
        elif self.kind == "two-level":
            h = (n - 1) / 2
            if not np.all(np.isclose(np.abs(vals), h, rtol=0, atol=LEVEL_TOL)):
                raise DomainError(f"two-level design entries must be +/-{h}")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True, eq=False)
class OrthogonalArray:
    """An ``n x k`` array over symbols ``1..s``."""

    values: np.ndarray
    s: int

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 2:
            raise DomainError("orthogonal array must be 2-d")
        if not np.issubdtype(vals.dtype, np.integer):
            if not np.all(vals == np.round(vals)):
                raise DomainError("orthogonal array symbols must be integers")
            vals = vals.astype(np.int64)
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def runs(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True, eq=False)
class SignMatrix:
    """A matrix with entries in {-1, +1}."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 2:
            raise DomainError("sign matrix must be 2-d")
        if not np.all(np.abs(vals) == 1):
            raise DomainError("sign matrix entries must be +/-1")
        object.__setattr__(self, "values", _frozen(vals.astype(np.int64)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def as_array(x) -> np.ndarray:
    """Plain float view of a design-like object."""
    if isinstance(x, (DesignMatrix, SignMatrix, OrthogonalArray, LevelSet)):
        return np.asarray(x.values if not isinstance(x, LevelSet) else x.levels, dtype=float)
    return np.asarray(x, dtype=float)


def centered_levels(n: int) -> LevelSet:
    """Levels ``-(n-1)/2, ..., (n-1)/2`` in unit steps (half-integers for even n)."""
    if int(n) != n or n < 1:
        raise DomainError(f"need a positive integer number of levels, got {n!r}")
    n = int(n)
    return LevelSet(n, _frozen(np.arange(n, dtype=float) - (n - 1) / 2))


# -- validity reports ---------------------------------------------------------


@dataclass(frozen=True)
class LatinHypercubeReport:
    ok: bool
    column: int | None = None
    value: float | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"latin_hypercube": self.ok, "column": self.column, "value": self.value,
                "reason": self.reason}


@dataclass(frozen=True)
class OAReport:
    ok: bool
    columns: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_latin_hypercube(X, tol: float = LEVEL_TOL) -> LatinHypercubeReport:
    """Check that every column permutes ``centered_levels(n)``.

    Never raises; a failing design gets the first offending column and the
    first sorted value that misses its level.
    """
    try:
        A = as_array(X)
    except (TypeError, ValueError) as exc:
        return LatinHypercubeReport(False, reason=f"not numeric: {exc}")
    if A.ndim != 2 or A.size == 0:
        return LatinHypercubeReport(False, reason=f"expected a non-empty 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        col = int(np.argwhere(~np.isfinite(A))[0, 1])
        return LatinHypercubeReport(False, column=col, reason="non-finite entry")
    n = A.shape[0]
    levels = centered_levels(n).levels
    dev = np.abs(np.sort(A, axis=0) - levels[:, None])
    bad = dev > tol
    if not bad.any():
        return LatinHypercubeReport(True)
    col = int(np.flatnonzero(bad.any(axis=0))[0])
    row = int(np.flatnonzero(bad[:, col])[0])
    value = float(np.sort(A[:, col])[row])
    return LatinHypercubeReport(
        False, column=col, value=value,
        reason=f"column {col}: sorted value {value:g} where level {float(levels[row]):g} expected",
    )


def check_oa_strength2(A: OrthogonalArray | np.ndarray, s: int | None = None) -> OAReport:
    """Exhaustive pair-count test for strength two.

    Every ordered symbol pair must appear ``n / s**2`` times in every pair of
    columns.
    """
    if isinstance(A, OrthogonalArray):
        vals, s = A.values, A.s if s is None else s
    else:
        vals = np.asarray(A)
        if s is None:
            raise DomainError("symbol count s is required for a bare array")
    vals = np.asarray(vals, dtype=np.int64)
    n, k = vals.shape
    if n % (s * s):
        return OAReport(False, reason=f"runs {n} not divisible by s^2 = {s * s}")
    if vals.min() < 1 or vals.max() > s:
        return OAReport(False, reason=f"symbols must lie in 1..{s}")
    lam = n // (s * s)
    codes = vals - 1
    for i in range(k):
        for j in range(i + 1, k):
            counts = np.bincount(codes[:, i] * s + codes[:, j], minlength=s * s)
            if np.any(counts != lam):
                return OAReport(False, columns=(i, j),
                                reason=f"columns {i},{j}: pair counts {counts.min()}..{counts.max()}, expected {lam}")
    return OAReport(True)


def rao_hamming_oa(s: int) -> OrthogonalArray:
    """The linear OA(s^2, s+1, s) over GF(s).

    Rows are indexed by ``(u, v)`` with ``u`` varying slowest; the columns are
    ``u``, ``v`` and ``u + a*v`` for every nonzero field element ``a``.  For a
    prime ``s`` this is plain arithmetic mod ``s``.  Symbols are 1-based.
    """
    if factor_prime_power(int(s)) is None or int(s) != s:
        raise UnsupportedParameterError(f"OA(s^2, s+1, s) needs a prime power s, got {s!r}")
    s = int(s)
    add, mul = field_tables(s)
    u = np.repeat(np.arange(s), s)
    v = np.tile(np.arange(s), s)
    cols = [u, v] + [add[u, mul[a, v]] for a in range(1, s)]
    return OrthogonalArray(np.column_stack(cols) + 1, s)


def sylvester_sign_matrix(k: int) -> SignMatrix:
    """Sylvester-type Hadamard matrix of order ``k`` (a power of two)."""
    if int(k) != k or k < 1 or (int(k) & (int(k) - 1)):
        raise UnsupportedParameterError(f"Sylvester construction needs a power-of-two order, got {k!r}")
    H = np.ones((1, 1), dtype=np.int64)
    while H.shape[0] < k:
        H = np.block([[H, H], [H, -H]])
    return SignMatrix(H)


# -- design CSV ------------------------------------------------------------------


def read_design_csv(path) -> np.ndarray:
    """Read a headerless comma-separated numeric design."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # empty input; reported below
        arr = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    if arr.size == 0:
        raise DomainError(f"{path}: empty design file")
    return arr


def format_design_csv(X) -> str:
    A = as_array(X)
    if A.ndim == 1:
        A = A[:, None]
    buf = io.StringIO()
    for row in A:
        buf.write(",".join(_fmt(v) for v in row))
        buf.write("\n")
    return buf.getvalue()


def _fmt(v: float) -> str:
    # integers print without a trailing ".0"; everything else round-trips at 17 digits
    if float(v).is_integer() and abs(v) < 2**53:
        return str(int(v))
    return f"{v:.17g}"


def write_design_csv(X, path) -> None:
    Path(path).write_text(format_design_csv(X))
