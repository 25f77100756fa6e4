"""Simulated annealing of small nearly orthogonal Latin hypercubes.

Moves swap two entries of one column, so every state is a Latin hypercube on
the centered levels.  The chain runs on doubled (integer) levels; the
objective is evaluated from the integer Gram matrix and updated in ``O(p)``
per move (``O(p^2)`` for the max-correlation objective).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..criteria import DEFAULT_T, compute_criteria
from ..design import DesignMatrix, centered_levels
from ..exceptions import DomainError

OBJECTIVES = {
    "rho_ave": kernels.OBJ_RHO_AVE,
    "rho_max": kernels.OBJ_RHO_MAX,
    "weighted-delta": kernels.OBJ_WEIGHTED_DELTA,
}


@dataclass(frozen=True)
class AnnealConfig:
    """Cooling schedule and objective.

    ``t0=None`` picks the initial temperature at which half of the uphill
    moves probed on the start design would be accepted.  ``moves_per_temp``
    defaults to ``100 * p``.  ``weighted-delta`` minimises the mean of
    ``1 - delta_t`` over ``thresholds`` plus ``w_ave * rho_ave**2``.
    """

    objective: str = "rho_ave"
    t0: float | None = None
    cooling: float = 0.95
    moves_per_temp: int | None = None
    stop_ratio: float = 1e-4
    seed: int | None = None
    thresholds: tuple[float, ...] = DEFAULT_T
    w_ave: float = 1.0
    restarts: int = 1
    probe_moves: int = 256

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise DomainError(f"unknown objective {self.objective!r}; choose from {sorted(OBJECTIVES)}")
        if not 0 < self.cooling < 1:
            raise DomainError(f"cooling factor must lie in (0, 1), got {self.cooling}")
        if not 0 < self.stop_ratio < 1:
            raise DomainError(f"stop_ratio must lie in (0, 1), got {self.stop_ratio}")
        if self.moves_per_temp is not None and self.moves_per_temp < 1:
            raise DomainError("moves_per_temp must be positive")
        if self.restarts < 1 or self.probe_moves < 1:
            raise DomainError("restarts and probe_moves must be positive")
        if self.t0 is not None and self.t0 <= 0:
            raise DomainError("t0 must be positive")


def _objective(G, S, npairs, obj, thresholds, w_ave) -> float:
    iu = np.triu_indices(G.shape[0], 1)
    off = G[iu]
    if obj == kernels.OBJ_RHO_MAX:
        return float(np.max(np.abs(off))) / S
    ave = float(np.sum(off * off)) / (float(S) * float(S) * npairs)
    if obj == kernels.OBJ_RHO_AVE:
        return ave
    r = np.abs(off) / S
    counts = np.array([np.count_nonzero(r <= t) for t in thresholds])
    return float(np.mean(1.0 - counts / npairs)) + w_ave * ave


def _start(n, p, rng):
    doubled = (2 * centered_levels(n).levels).astype(np.int64)
    return np.column_stack([rng.permutation(doubled) for _ in range(p)])


def _run_chain(n, p, cfg: AnnealConfig, rng) -> tuple[np.ndarray, float, dict]:
    obj = OBJECTIVES[cfg.objective]
    thresholds = np.asarray(cfg.thresholds, dtype=float)
    L = np.ascontiguousarray(_start(n, p, rng))
    G = L.T @ L
    S = int(G[0, 0])
    npairs = p * (p - 1) // 2
    f = _objective(G, S, npairs, obj, thresholds, cfg.w_ave)
    if cfg.t0 is not None:
        T0 = float(cfg.t0)
    else:
        m = cfg.probe_moves
        probe = kernels.anneal_probe_deltas(
            L, G, S, npairs, obj, thresholds, cfg.w_ave,
            rng.integers(0, p, m), rng.integers(0, n, m), rng.integers(0, n, m))
        uphill = probe[probe > 0]
        # median uphill move accepted with probability 1/2
        T0 = float(np.median(uphill)) / math.log(2.0) if uphill.size else 1e-12
    moves = cfg.moves_per_temp or 100 * p
    n_temps = max(1, math.ceil(math.log(cfg.stop_ratio) / math.log(cfg.cooling)))
    best_L = L.copy()
    best_f = f
    accepted = 0
    for e in range(n_temps):
        T = T0 * cfg.cooling**e
        cols = rng.integers(0, p, moves)
        ra = rng.integers(0, n, moves)
        rb = rng.integers(0, n, moves)
        logu = kernels.log_uniforms(rng, moves)
        f, best_f, acc = kernels.anneal_epoch(L, G, S, npairs, obj, thresholds, float(cfg.w_ave),
                                              float(T), cols, ra, rb, logu, float(f),
                                              float(best_f), best_L)
        accepted += int(acc)
    Gb = best_L.T @ best_L
    exact = _objective(Gb, S, npairs, obj, thresholds, cfg.w_ave)
    stats = {"t0": T0, "temperatures": n_temps, "moves_per_temp": moves,
             "accepted": accepted, "objective": exact}
    return best_L, exact, stats


def anneal_nolhd(n: int, p: int, cfg: AnnealConfig | None = None, rng=None) -> DesignMatrix:
    """Anneal an ``n x p`` Latin hypercube towards small column correlations.

    Starts from a random Latin hypercube on ``centered_levels(n)`` and returns
    the best design seen (over ``cfg.restarts`` independent chains).  ``rng``
    overrides ``cfg.seed``.
    """
    if int(n) != n or n < 2 or int(p) != p or p < 1:
        raise DomainError(f"need n >= 2 and p >= 1, got n={n!r}, p={p!r}")
    n, p = int(n), int(p)
    cfg = cfg or AnnealConfig()
    rng = np.random.default_rng(cfg.seed if rng is None else rng)
    if p == 1:
        L = _start(n, 1, rng)
        return DesignMatrix(L / 2.0, kind="latin-hypercube",
                            meta={"method": "anneal", "objective": cfg.objective,
                                  "objective_value": 0.0})
    best = None
    runs = []
    for _ in range(cfg.restarts):
        L, val, stats = _run_chain(n, p, cfg, rng)
        runs.append(stats)
        if best is None or val < best[1]:
            best = (L, val)
    X = best[0] / 2.0
    crit = compute_criteria(X, cfg.thresholds)
    return DesignMatrix(X, kind="latin-hypercube", meta={
        "method": "anneal", "objective": cfg.objective, "objective_value": best[1],
        "rho_ave": crit.rho_ave, "rho_max": crit.rho_max,
        "delta": [float(d) for d in crit.delta], "chains": runs,
    })
