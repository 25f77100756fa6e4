"""Correlation-based design criteria and their predicted values.

``rho_max`` is the largest absolute off-diagonal correlation, ``rho_ave`` the
root mean square of the strict upper triangle, and ``delta`` the proportion
correlation vector: for thresholds ``t_1 >= ... >= t_q`` the share of column
pairs whose absolute correlation does not exceed each threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .design import as_array
from .exceptions import DegenerateColumnError, DomainError

DEFAULT_T = (0.1, 0.05, 0.01, 0.005)


@dataclass(frozen=True, eq=False)
class CorrelationSummary:
    rho: np.ndarray
    rho_max: float | None = None
    rho_ave: float | None = None
    t: tuple[float, ...] = ()
    delta: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def p(self) -> int:
        return self.rho.shape[0]

    def to_dict(self) -> dict:
        return {
            "rho_max": self.rho_max,
            "rho_ave": self.rho_ave,
            "t": list(self.t),
            "delta": [float(d) for d in self.delta],
        }


def correlation_matrix(X) -> np.ndarray:
    """Pearson correlation matrix of the columns of ``X``.

    The diagonal is exactly one and the matrix exactly symmetric.

    Raises
    ------
    DomainError
        If ``X`` has fewer than two rows.
    DegenerateColumnError
        If some column is constant.
    """
    A = as_array(X)
    if A.ndim != 2 or A.shape[0] < 2:
        raise DomainError(f"need at least two runs, got shape {A.shape}")
    Xc = A - A.mean(axis=0)
    G = kernels.gram(np.ascontiguousarray(Xc))
    d = np.diag(G).copy()
    scale = np.max(np.abs(A), axis=0)
    bad = d <= (1e-12 * np.maximum(scale, 1e-300)) ** 2 * A.shape[0]
    if bad.any():
        raise DegenerateColumnError(int(np.flatnonzero(bad)[0]))
    s = np.sqrt(d)
    rho = G / s[:, None] / s[None, :]
    rho = np.clip(rho, -1.0, 1.0)
    rho = np.triu(rho, 1)
    rho = rho + rho.T
    np.fill_diagonal(rho, 1.0)
    return rho


def _check_thresholds(t) -> tuple[float, ...]:
    t = tuple(float(v) for v in np.atleast_1d(np.asarray(t, dtype=float)))
    if not t:
        raise DomainError("threshold vector t is empty")
    if any(v < 0 or v > 1 for v in t):
        raise DomainError(f"thresholds must lie in [0, 1], got {t}")
    if any(a < b for a, b in zip(t, t[1:])):
        raise DomainError(f"thresholds must be non-increasing, got {t}")
    return t


def upper_offdiag(rho: np.ndarray) -> np.ndarray:
    return rho[np.triu_indices(rho.shape[0], 1)]


def proportion_correlation(rho: np.ndarray, t=DEFAULT_T) -> np.ndarray:
    """Share of off-diagonal ``|rho_ij| <= t_k`` for each threshold."""
    t = _check_thresholds(t)
    off = np.abs(upper_offdiag(rho))
    if off.size == 0:
        return np.ones(len(t))
    # the ordered-pair count is twice the upper-triangle count, so the ratio is the same
    return np.array([np.count_nonzero(off <= tk) / off.size for tk in t])


def criteria_from_rho(rho: np.ndarray, t=DEFAULT_T) -> CorrelationSummary:
    t = _check_thresholds(t)
    off = upper_offdiag(rho)
    if off.size == 0:
        raise DomainError("criteria need at least two columns")
    return CorrelationSummary(
        rho=rho,
        rho_max=float(np.max(np.abs(off))),
        rho_ave=float(np.sqrt(np.mean(off**2))),
        t=t,
        delta=proportion_correlation(rho, t),
    )


def compute_criteria(X, t=DEFAULT_T) -> CorrelationSummary:
    """``rho_max``, ``rho_ave`` and the proportion vector ``delta`` for ``X``."""
    A = as_array(X)
    if A.ndim != 2 or A.shape[1] < 2:
        raise DomainError("criteria need at least two columns")
    t = _check_thresholds(t)
    return criteria_from_rho(correlation_matrix(A), t)


# -- predicted criteria of constructed designs ------------------------------------


def predict_delta_lemma1(delta_B, p: int, f: int) -> np.ndarray:
    """Proportion vector of the OA-based design from that of its seed ``B``.

    Every seed pair is replicated on ``2f`` aligned column pairs and all other
    pairs are exactly uncorrelated, which gives
    ``[p(2f-1) + (p-1) delta_B] / (2pf - 1)`` elementwise.
    """
    if p < 1 or f < 1:
        raise DomainError(f"need p >= 1 and f >= 1, got p={p}, f={f}")
    dB = np.asarray(delta_B, dtype=float)
    if np.any((dB < 0) | (dB > 1)):
        raise DomainError("delta entries must lie in [0, 1]")
    return (p * (2 * f - 1) + (p - 1) * dB) / (2 * p * f - 1)


def kronecker_weights(n1: int, n2: int, m1: int, m2: int) -> tuple[float, float]:
    """Shrink factors ``(w1, w2)`` for the block Kronecker construction."""
    w1 = n2**2 * (n1**2 - 1) / (n1**2 * n2**2 - 1)
    w2 = (m1 - 1) * w1**2 / (m1 * m2 - 1) if m1 * m2 > 1 else 0.0
    return w1, w2


@dataclass(frozen=True, eq=False)
class PredictedCriteria:
    w1: float
    w2: float
    rho_max_pred: float
    rho_ave_pred: float
    delta_lower_bound: np.ndarray
    t: tuple[float, ...]
    # rho_max/rho_ave are exact under the hypotheses; delta is only a lower bound
    exact: bool = False

    def to_dict(self) -> dict:
        return {
            "w1": self.w1, "w2": self.w2,
            "rho_max_pred": self.rho_max_pred, "rho_ave_pred": self.rho_ave_pred,
            "delta_lower_bound": [float(v) for v in self.delta_lower_bound],
            "t": list(self.t), "exact": self.exact,
        }


def predict_kronecker_criteria(C_list, n1: int, n2: int, m1: int, m2: int,
                               t=DEFAULT_T) -> PredictedCriteria:
    """Criteria of the block Kronecker design predicted from its ``C_j`` blocks.

    Valid when the sign matrices, ``B`` and ``D`` are orthogonal, ``r = n2``
    and the cross terms vanish; then within-block correlations are the
    ``C_j`` correlations shrunk by ``w1`` and cross-block ones are zero.
    """
    t = _check_thresholds(t)
    Cs = [as_array(C) for C in C_list]
    if len(Cs) != m2:
        raise DomainError(f"expected m2={m2} C blocks, got {len(Cs)}")
    for j, C in enumerate(Cs):
        if C.shape != (n1, m1):
            raise DomainError(f"C_{j + 1} has shape {C.shape}, expected {(n1, m1)}")
    w1, w2 = kronecker_weights(n1, n2, m1, m2)
    if m1 < 2:
        # single-column blocks: every pair of M is cross-block, hence uncorrelated
        return PredictedCriteria(w1, w2, 0.0, 0.0, np.ones(len(t)), t)
    summaries = [compute_criteria(C, t) for C in Cs]
    rho_max = max(w1 * s.rho_max for s in summaries)
    rho_ave = float(np.sqrt(w2 * sum(s.rho_ave**2 for s in summaries) / m2))
    delta_lb = np.mean([s.delta for s in summaries], axis=0)
    return PredictedCriteria(w1, w2, float(rho_max), rho_ave, delta_lb, t)


# -- projection geometry -------------------------------------------------------------


def collinear_lines(x, y, min_points: int = 3, decimals: int = 9) -> list[tuple[int, ...]]:
    """Maximal sets of at least ``min_points`` collinear points in a 2-d projection.

    Used to compare pairwise projections of Kronecker designs, where a shared
    ingredient makes points fall on a few straight lines.
    """
    P = np.column_stack([np.asarray(x, float), np.asarray(y, float)])
    N = len(P)
    covered: set[tuple[int, int]] = set()
    lines = []
    for i in range(N):
        d = P[i + 1:] - P[i]
        keep = np.any(d != 0, axis=1)
        idx = np.arange(i + 1, N)[keep]
        ang = np.mod(np.arctan2(d[keep, 1], d[keep, 0]), np.pi)
        ang = np.round(ang, decimals) % np.round(np.pi, decimals)
        groups: dict[float, list[int]] = {}
        for j, a in zip(idx, ang):
            groups.setdefault(float(a), []).append(int(j))
        for members in groups.values():
            if len(members) + 1 < min_points or (i, members[0]) in covered:
                continue
            line = (i, *members)
            lines.append(line)
            for u in range(len(line)):
                for v in range(u + 1, len(line)):
                    covered.add((line[u], line[v]))
    return lines
