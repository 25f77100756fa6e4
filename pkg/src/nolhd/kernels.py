"""Hot numeric kernels, each with a numba loop and a pure-numpy twin.

The ``*_loops`` functions are written in the subset of Python numba compiles;
``*_numpy`` functions express the same computation with array operations.  The
module-level names without suffix are bound to whichever backend
:mod:`nolhd._accel` selected.  ``benchmarks/bench_kernels.py`` times both.

Annealing and the E(s^2) exchange work on integer-coded designs so that both
backends take exactly the same accept/reject decisions.
"""

from __future__ import annotations

import numpy as np

from ._accel import compile_kernel, pick

# objective codes shared by the annealing kernels
OBJ_RHO_AVE = 0
OBJ_RHO_MAX = 1
OBJ_WEIGHTED_DELTA = 2


# -- Gram matrix of centered columns ------------------------------------------


def gram_loops(Xc):
    n, p = Xc.shape
    G = np.empty((p, p))
    for i in range(p):
        for j in range(i, p):
            acc = 0.0
            for k in range(n):
                acc += Xc[k, i] * Xc[k, j]
            G[i, j] = acc
            G[j, i] = acc
    return G


def gram_numpy(Xc):
    # einsum without optimize runs numpy's own reduction loops (no threaded BLAS),
    # so the summation order does not depend on the thread count
    G = np.einsum("ki,kj->ij", Xc, Xc)
    upper = np.triu(G)
    return upper + np.triu(G, 1).T


gram_numba = compile_kernel(gram_loops)
gram = pick(gram_numba, gram_numpy)


# -- Lasso coordinate descent along a lambda path --------------------------------


# path saturation is only tested after this many penalties
MIN_PATH_STEPS = 5


def lasso_path_loops(X, y, lambdas, beta0, tol, max_iter, dev_max, dev_step):
    """Cyclic coordinate descent for ``||y - X b||^2 + lam * ||b||_1``.

    Solves for each ``lambdas[m]`` in turn, warm-starting from the previous
    solution.  A sweep converges when ``max_j max(1, 2||x_j||^2) |db_j| < tol``.
    If ``dev_max > 0`` the path saturates once the explained fraction of
    ``y^T y`` reaches ``dev_max`` or grows by less than a relative
    ``dev_step``; later entries repeat the last solution with zero iterations.
    """
    n, p = X.shape
    L = lambdas.shape[0]
    betas = np.zeros((L, p))
    iters = np.zeros(L, dtype=np.int64)
    converged = np.zeros(L, dtype=np.bool_)
    colsq = np.zeros(p)
    for j in range(p):
        acc = 0.0
        for i in range(n):
            acc += X[i, j] * X[i, j]
        colsq[j] = acc
    beta = beta0.copy()
    r = y.copy()
    for j in range(p):
        if beta[j] != 0.0:
            for i in range(n):
                r[i] -= X[i, j] * beta[j]
    yy = 0.0
    for i in range(n):
        yy += y[i] * y[i]
    prev_dev = 0.0
    saturated = False
    for m in range(L):
        if saturated:
            betas[m, :] = beta
            converged[m] = True
            continue
        half = 0.5 * lambdas[m]
        it = 0
        done = False
        while it < max_iter:
            it += 1
            worst = 0.0
            for j in range(p):
                cj = colsq[j]
                if cj == 0.0:
                    continue
                bj = beta[j]
                rho = 0.0
                for i in range(n):
                    rho += X[i, j] * r[i]
                rho += cj * bj
                if rho > half:
                    new = (rho - half) / cj
                elif rho < -half:
                    new = (rho + half) / cj
                else:
                    new = 0.0
                d = new - bj
                if d != 0.0:
                    for i in range(n):
                        r[i] -= d * X[i, j]
                    beta[j] = new
                    scale = 2.0 * cj if 2.0 * cj > 1.0 else 1.0
                    change = abs(d) * scale
                    if change > worst:
                        worst = change
            if worst < tol:
                done = True
                break
        betas[m, :] = beta
        iters[m] = it
        converged[m] = done
        if dev_max > 0.0 and yy > 0.0:
            rr = 0.0
            for i in range(n):
                rr += r[i] * r[i]
            dev = 1.0 - rr / yy
            if m >= MIN_PATH_STEPS and (dev >= dev_max or dev - prev_dev < dev_step * dev):
                saturated = True
            prev_dev = dev
    return betas, iters, converged


def lasso_path_numpy(X, y, lambdas, beta0, tol, max_iter, dev_max, dev_step):
    X = np.asfortranarray(X)
    p = X.shape[1]
    L = lambdas.shape[0]
    betas = np.zeros((L, p))
    iters = np.zeros(L, dtype=np.int64)
    converged = np.zeros(L, dtype=bool)
    colsq = np.einsum("ij,ij->j", X, X)
    scale = np.maximum(2.0 * colsq, 1.0)
    cols = [X[:, j] for j in range(p)]
    beta = beta0.astype(float).copy()
    r = y - X @ beta
    yy = float(y @ y)
    prev_dev = 0.0
    saturated = False
    for m in range(L):
        if saturated:
            betas[m] = beta
            converged[m] = True
            continue
        half = 0.5 * lambdas[m]
        it = 0
        done = False
        while it < max_iter:
            it += 1
            worst = 0.0
            for j in range(p):
                cj = colsq[j]
                if cj == 0.0:
                    continue
                xj = cols[j]
                bj = beta[j]
                rho = float(xj @ r) + cj * bj
                if rho > half:
                    new = (rho - half) / cj
                elif rho < -half:
                    new = (rho + half) / cj
                else:
                    new = 0.0
                d = new - bj
                if d != 0.0:
                    r -= d * xj
                    beta[j] = new
                    worst = max(worst, abs(d) * scale[j])
            if worst < tol:
                done = True
                break
        betas[m] = beta
        iters[m] = it
        converged[m] = done
        if dev_max > 0.0 and yy > 0.0:
            dev = 1.0 - float(r @ r) / yy
            if m >= MIN_PATH_STEPS and (dev >= dev_max or dev - prev_dev < dev_step * dev):
                saturated = True
            prev_dev = dev
    return betas, iters, converged


lasso_path_numba = compile_kernel(lasso_path_loops)
lasso_path = pick(lasso_path_numba, lasso_path_numpy)


# -- simulated annealing over within-column swaps -------------------------------


def anneal_delta_loops(L, G, S, npairs, obj, thresholds, w_ave, c, a, b):
    """Objective change if entries ``a`` and ``b`` of column ``c`` swap.

    ``L`` holds doubled (integer) levels, ``G = L.T @ L`` and ``S`` the common
    column sum of squares.  Writes nothing.
    """
    p = L.shape[1]
    diff = L[b, c] - L[a, c]
    S2 = float(S) * float(S)
    if obj == 1:
        best = 0.0
        for i in range(p):
            if i == c:
                continue
            for j in range(i + 1, p):
                if j == c:
                    continue
                v = abs(G[i, j]) / S
                if v > best:
                    best = v
        for j in range(p):
            if j == c:
                continue
            v = abs(G[c, j] + diff * (L[a, j] - L[b, j])) / S
            if v > best:
                best = v
        cur = 0.0
        for i in range(p):
            for j in range(i + 1, p):
                v = abs(G[i, j]) / S
                if v > cur:
                    cur = v
        return best - cur
    dsq = 0
    dcount = 0
    q = thresholds.shape[0]
    for j in range(p):
        if j == c:
            continue
        old = G[c, j]
        new = old + diff * (L[a, j] - L[b, j])
        dsq += new * new - old * old
        if obj == 2:
            ro = abs(old) / S
            rn = abs(new) / S
            for k in range(q):
                if rn <= thresholds[k]:
                    dcount += 1
                if ro <= thresholds[k]:
                    dcount -= 1
    dave = float(dsq) / (S2 * npairs)
    if obj == 0:
        return dave
    return -float(dcount) / (q * npairs) + w_ave * dave


# compiled delta when numba is present; the epoch loop below is only ever run compiled
_delta_for_loops = compile_kernel(anneal_delta_loops) or anneal_delta_loops


def anneal_epoch_loops(L, G, S, npairs, obj, thresholds, w_ave, T, cols, ra, rb, logu,
                       f, best_f, best_L):
    """Run one temperature level of Metropolis swaps in place.

    Returns the updated ``(f, best_f, n_accepted)``; ``L``, ``G`` and
    ``best_L`` are modified in place.
    """
    p = L.shape[1]
    accepted = 0
    for m in range(cols.shape[0]):
        c = cols[m]
        a = ra[m]
        b = rb[m]
        if a == b:
            continue
        delta = _delta_for_loops(L, G, S, npairs, obj, thresholds, w_ave, c, a, b)
        if delta <= 0.0 or logu[m] < -delta / T:
            diff = L[b, c] - L[a, c]
            for j in range(p):
                if j != c:
                    G[c, j] += diff * (L[a, j] - L[b, j])
                    G[j, c] = G[c, j]
            tmp = L[a, c]
            L[a, c] = L[b, c]
            L[b, c] = tmp
            f += delta
            accepted += 1
            if f < best_f - 1e-15:
                best_f = f
                best_L[:, :] = L
    return f, best_f, accepted


def _anneal_delta_numpy(L, G, S, npairs, obj, thresholds, w_ave, c, a, b):
    diff = L[b, c] - L[a, c]
    old = G[c].copy()
    new = old + diff * (L[a] - L[b])
    old[c] = 0
    new[c] = 0
    if obj == OBJ_RHO_MAX:
        mask = np.ones(G.shape[0], dtype=bool)
        mask[c] = False
        rest = np.abs(G[np.ix_(mask, mask)]) / S
        best = max(float(np.max(np.triu(rest, 1), initial=0.0)), float(np.max(np.abs(new) / S)))
        cur = float(np.max(np.triu(np.abs(G) / S, 1), initial=0.0))
        return best - cur
    dsq = int(new @ new - old @ old)
    dave = float(dsq) / (float(S) * float(S) * npairs)
    if obj == OBJ_RHO_AVE:
        return dave
    ro = np.abs(old) / S
    rn = np.abs(new) / S
    ro[c] = np.inf
    rn[c] = np.inf
    dcount = int(np.sum(rn[:, None] <= thresholds[None, :])) - int(np.sum(ro[:, None] <= thresholds[None, :]))
    q = thresholds.shape[0]
    return -float(dcount) / (q * npairs) + w_ave * dave


def anneal_epoch_numpy(L, G, S, npairs, obj, thresholds, w_ave, T, cols, ra, rb, logu,
                       f, best_f, best_L):
    accepted = 0
    for m in range(cols.shape[0]):
        c, a, b = int(cols[m]), int(ra[m]), int(rb[m])
        if a == b:
            continue
        delta = _anneal_delta_numpy(L, G, S, npairs, obj, thresholds, w_ave, c, a, b)
        if delta <= 0.0 or logu[m] < -delta / T:
            diff = L[b, c] - L[a, c]
            upd = diff * (L[a] - L[b])
            upd[c] = 0
            G[c] += upd
            G[:, c] = G[c]
            L[a, c], L[b, c] = L[b, c], L[a, c]
            f += delta
            accepted += 1
            if f < best_f - 1e-15:
                best_f = f
                best_L[:, :] = L
    return f, best_f, accepted


anneal_epoch_numba = compile_kernel(anneal_epoch_loops)
anneal_epoch = pick(anneal_epoch_numba, anneal_epoch_numpy)


def anneal_probe_deltas(L, G, S, npairs, obj, thresholds, w_ave, cols, ra, rb):
    """Objective changes of a batch of candidate swaps (used to set T0)."""
    out = np.zeros(cols.shape[0])
    for m in range(cols.shape[0]):
        if ra[m] != rb[m]:
            out[m] = _anneal_delta_numpy(L, G, S, npairs, obj, thresholds, w_ave,
                                         int(cols[m]), int(ra[m]), int(rb[m]))
    return out


# -- E(s^2) columnwise pair-exchange descent -------------------------------------


def es2_pass_loops(Z, Sm):
    """One pass of best-improvement sign exchanges over all columns.

    ``Z`` is an ``n x p`` +/-1 int array and ``Sm = Z.T @ Z``.  For each column
    the exchange of one +1 entry with one -1 entry that most reduces
    ``sum_j (z_c . z_j)^2`` is applied when it is a strict improvement.  Returns
    the number of exchanges made; ``Z`` and ``Sm`` are updated in place.
    """
    n, p = Z.shape
    made = 0
    for c in range(p):
        best = 0
        ba = -1
        bb = -1
        for a in range(n):
            if Z[a, c] != 1:
                continue
            for b in range(n):
                if Z[b, c] != -1:
                    continue
                delta = 0
                for j in range(p):
                    if j == c:
                        continue
                    d = 2 * (Z[b, j] - Z[a, j])
                    delta += 2 * Sm[c, j] * d + d * d
                if delta < best:
                    best = delta
                    ba = a
                    bb = b
        if ba >= 0:
            for j in range(p):
                if j == c:
                    continue
                d = 2 * (Z[bb, j] - Z[ba, j])
                Sm[c, j] += d
                Sm[j, c] = Sm[c, j]
            Z[ba, c] = -1
            Z[bb, c] = 1
            made += 1
    return made


def es2_pass_numpy(Z, Sm):
    n, p = Z.shape
    made = 0
    for c in range(p):
        plus = np.flatnonzero(Z[:, c] == 1)
        minus = np.flatnonzero(Z[:, c] == -1)
        if plus.size == 0 or minus.size == 0:
            continue
        s = Sm[c].copy()
        s[c] = 0
        u = Z @ s
        P = Z[plus] @ Z[minus].T
        delta = 4 * (u[minus][None, :] - u[plus][:, None]) + 8 * (p - 1) - 8 * (P + 1)
        k = int(np.argmin(delta))
        if delta.flat[k] < 0:
            a = plus[k // minus.size]
            b = minus[k % minus.size]
            d = 2 * (Z[b] - Z[a])
            d[c] = 0
            Sm[c] += d
            Sm[:, c] = Sm[c]
            Z[a, c] = -1
            Z[b, c] = 1
            made += 1
    return made


es2_pass_numba = compile_kernel(es2_pass_loops)
es2_pass = pick(es2_pass_numba, es2_pass_numpy)


def log_uniforms(rng, size):
    """``log(U)`` for ``U ~ Uniform(0, 1]``; shared by both annealing backends."""
    return np.log1p(-rng.random(size))


__all__ = [
    "gram", "lasso_path", "anneal_epoch", "es2_pass", "anneal_probe_deltas",
    "OBJ_RHO_AVE", "OBJ_RHO_MAX", "OBJ_WEIGHTED_DELTA", "log_uniforms",
]
