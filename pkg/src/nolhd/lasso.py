"""Lasso by cyclic coordinate descent, k-fold cross-validation and gamma.

The objective is the unscaled ``(y - X b)^T (y - X b) + lam * ||b||_1``, so
soft-thresholding happens at ``lam / 2`` and the zero solution is optimal for
``lam >= 2 max_j |x_j^T y|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .design import as_array
from .exceptions import DomainError

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 100_000
GRID_SIZE = 100
GRID_RATIO = 1e-4
#: path saturation defaults for cross-validation (explained fraction, relative gain)
DEV_MAX = 0.999
DEV_STEP = 1e-5
#: penalty selection rules for cross-validation
CV_RULES = ("min", "1se")


@dataclass(frozen=True, eq=False)
class LassoProblem:
    X: np.ndarray
    y: np.ndarray
    lambda_: float

    def __post_init__(self):
        X = np.ascontiguousarray(as_array(self.X), dtype=float)
        y = np.ascontiguousarray(np.asarray(self.y, dtype=float).ravel())
        if X.ndim != 2:
            raise DomainError(f"X must be 2-d, got shape {X.shape}")
        if y.shape[0] != X.shape[0]:
            raise DomainError(f"y has {y.shape[0]} entries but X has {X.shape[0]} rows")
        if not self.lambda_ >= 0:
            raise DomainError(f"lambda must be nonnegative, got {self.lambda_}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "lambda_", float(self.lambda_))


@dataclass(frozen=True, eq=False)
class LassoFit:
    beta_hat: np.ndarray
    active_set: tuple[int, ...]
    lambda_: float
    iterations: int
    converged: bool
    max_kkt_violation: float

    def to_dict(self) -> dict:
        return {"beta_hat": self.beta_hat.tolist(), "active_set": list(self.active_set),
                "lambda": self.lambda_, "iterations": self.iterations,
                "converged": self.converged, "max_kkt_violation": self.max_kkt_violation}


@dataclass(frozen=True, eq=False)
class TrueModel:
    beta: np.ndarray
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=float).ravel())
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    @property
    def active_set(self) -> tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(self.beta))

    @property
    def p0(self) -> int:
        return int(np.count_nonzero(self.beta))


@dataclass(frozen=True, eq=False)
class CVResult:
    lambda_: float
    index: int
    grid: np.ndarray
    cv_mean: np.ndarray
    cv_fold: np.ndarray = field(repr=False)
    folds: np.ndarray = field(repr=False)


def lambda_max(X, y) -> float:
    """Smallest penalty at which the all-zero vector solves the problem."""
    X = as_array(X)
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[1] == 0:
        return 0.0
    return float(2.0 * np.max(np.abs(X.T @ y)))


def lambda_grid(lam_max: float, size: int = GRID_SIZE, ratio: float = GRID_RATIO) -> np.ndarray:
    """Decreasing log-spaced grid from ``lam_max`` to ``ratio * lam_max``."""
    if size < 1:
        raise DomainError("grid size must be positive")
    if lam_max <= 0:
        return np.zeros(1)
    return np.geomspace(lam_max, lam_max * ratio, size)


def kkt_violation(X, y, beta, lam: float) -> float:
    """Largest violation of the subgradient optimality conditions."""
    X = as_array(X)
    beta = np.asarray(beta, dtype=float)
    g = 2.0 * (X.T @ (np.asarray(y, dtype=float) - X @ beta))
    nz = beta != 0
    v_zero = np.maximum(np.abs(g[~nz]) - lam, 0.0)
    v_act = np.abs(g[nz] - lam * np.sign(beta[nz]))
    return float(max(v_zero.max(initial=0.0), v_act.max(initial=0.0)))


def _column_scale(X, standardize):
    if not standardize:
        return np.ones(X.shape[1])
    sd = X.std(axis=0)
    if np.any(sd == 0):
        raise DomainError("cannot standardize a constant column")
    return sd


def lasso_path(X, y, lambdas, *, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
               standardize: bool = False, dev_max: float = 0.0, dev_step: float = 0.0):
    """Warm-started solutions along ``lambdas`` (processed in the given order).

    ``tol`` bounds the per-sweep change of the gradient, ``2 ||x_j||^2 |db_j|``
    (or ``|db_j|`` for columns with ``2 ||x_j||^2 < 1``).  With ``dev_max > 0``
    the path stops early once ``1 - RSS / y^T y`` reaches ``dev_max`` or its
    relative gain drops below ``dev_step``; remaining entries repeat the last
    solution.

    Returns ``(betas, iterations, converged)`` with ``betas`` of shape
    ``(len(lambdas), p)`` on the original column scale.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    X = np.ascontiguousarray(as_array(X), dtype=float)
    y = np.ascontiguousarray(np.asarray(y, dtype=float).ravel())
    lambdas = np.ascontiguousarray(np.asarray(lambdas, dtype=float).ravel())
    if np.any(lambdas < 0):
        raise DomainError("lambdas must be nonnegative")
    scale = _column_scale(X, standardize)
    Xs = np.ascontiguousarray(X / scale)
    betas, iters, conv = kernels.lasso_path(Xs, y, lambdas, np.zeros(X.shape[1]),
                                            float(tol), int(max_iter), float(dev_max),
                                            float(dev_step))
    # zero is the exact solution here; the sweep's own rounding can leave ~1e-16
    betas[lambdas >= lambda_max(Xs, y)] = 0.0
    return betas / scale, iters, conv


def solve_lasso(prob: LassoProblem, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                *, standardize: bool = False, warm_path: bool = True) -> LassoFit:
    """Minimise ``||y - X b||^2 + lambda ||b||_1``.

    With ``warm_path`` the solver walks down the default grid to ``lambda``
    (much faster for small penalties when ``p > n``).  Non-convergence is
    reported through ``converged`` rather than raised.
    """
    X, y, lam = prob.X, prob.y, prob.lambda_
    if np.any(np.einsum("ij,ij->j", X, X) == 0):
        raise DomainError("X has an all-zero column")
    lambdas = np.array([lam])
    if warm_path:
        lmax = lambda_max(X, y)
        grid = lambda_grid(lmax)
        lambdas = np.append(grid[grid > lam], lam)
    betas, iters, conv = lasso_path(X, y, lambdas, tol=tol, max_iter=max_iter,
                                    standardize=standardize)
    beta = betas[-1]
    # certificate for the problem actually solved (standardized columns if requested)
    scale = _column_scale(X, standardize)
    viol = kkt_violation(X / scale, y, beta * scale, lam)
    return LassoFit(beta_hat=beta, active_set=tuple(int(j) for j in np.flatnonzero(beta)),
                    lambda_=lam, iterations=int(iters.sum()), converged=bool(conv[-1]),
                    max_kkt_violation=viol)


def make_folds(n: int, k: int, rng) -> np.ndarray:
    """Fold label per row: a random partition into ``k`` near-equal folds."""
    if k < 2 or n < k:
        raise DomainError(f"need 2 <= k <= n, got k={k}, n={n}")
    labels = np.empty(n, dtype=np.int64)
    for f, idx in enumerate(np.array_split(np.random.default_rng(rng).permutation(n), k)):
        labels[idx] = f
    return labels


def cross_validate(X, y, k: int = 5, grid=None, rng=None, *, folds=None,
                   tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                   standardize: bool = False, rescale_lambda: bool = True,
                   dev_max: float = DEV_MAX, dev_step: float = DEV_STEP,
                   rule: str = "min") -> CVResult:
    """k-fold cross-validation over a penalty grid.

    Each training fold is solved along the whole (decreasing) grid with warm
    starts.  With ``rescale_lambda`` the penalty on a fold of ``n_train`` rows
    is ``lam * n_train / n`` so that the penalty per observation matches the
    full-data fit.  The CV error of a fold is its held-out mean squared
    error.  ``rule="min"`` selects the penalty minimising the mean over
    folds, ties going to the larger penalty; ``rule="1se"`` selects the
    largest penalty whose mean is within one standard error of that
    minimum.  Fold paths saturate early as in :func:`lasso_path`
    (pass ``dev_max=0`` to solve every grid point).
    """
    if rule not in CV_RULES:
        raise DomainError(f"unknown selection rule {rule!r}; choose from {CV_RULES}")
    X = as_array(X)
    y = np.asarray(y, dtype=float).ravel()
    n = X.shape[0]
    if grid is None:
        grid = lambda_grid(lambda_max(X, y))
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise DomainError("empty lambda grid")
    order = np.argsort(-grid, kind="stable")
    labels = make_folds(n, k, rng) if folds is None else np.asarray(folds)
    cv_fold = np.empty((k, grid.size))
    for f in range(k):
        test = labels == f
        train = ~test
        factor = train.sum() / n if rescale_lambda else 1.0
        betas, _, _ = lasso_path(X[train], y[train], grid[order] * factor, tol=tol,
                                 max_iter=max_iter, standardize=standardize,
                                 dev_max=dev_max, dev_step=dev_step)
        resid = y[test][None, :] - betas @ X[test].T
        cv_fold[f, order] = np.mean(resid * resid, axis=1)
    cv_mean = cv_fold.mean(axis=0)
    best = cv_mean.min()
    ties = np.flatnonzero(cv_mean == best)
    idx = int(ties[np.argmax(grid[ties])])
    if rule == "1se":
        se = cv_fold[:, idx].std(ddof=1) / np.sqrt(k)
        within = np.flatnonzero(cv_mean <= best + se)
        idx = int(within[np.argmax(grid[within])])
    return CVResult(lambda_=float(grid[idx]), index=idx, grid=grid, cv_mean=cv_mean,
                    cv_fold=cv_fold, folds=labels)


def false_selections(fit: LassoFit | np.ndarray, truth: TrueModel | np.ndarray) -> int:
    """False positives plus false negatives of the estimated support."""
    b_hat = fit.beta_hat if isinstance(fit, LassoFit) else np.asarray(fit)
    beta = truth.beta if isinstance(truth, TrueModel) else np.asarray(truth)
    if b_hat.shape != beta.shape:
        raise DomainError(f"coefficient lengths differ: {b_hat.shape} vs {beta.shape}")
    return int(np.count_nonzero((b_hat != 0) != (beta != 0)))
