"""Time the numba and numpy implementations of each hot kernel.

Both implementations are imported side by side (the env flag only chooses the
default), run on identical inputs, checked for agreement and timed with
``timeit``.  The first numba call is excluded from timing (compilation).

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import json
import timeit

import numpy as np

from nolhd import kernels
from nolhd.constructors.anneal import _objective, _start
from nolhd.lasso import lambda_grid, lambda_max
from nolhd.recipes import load_fixture


def _gram_case():
    X = load_fixture("nolhd_64x192.csv")
    Xc = np.ascontiguousarray(X - X.mean(axis=0))
    return {
        "numba": lambda: kernels.gram_numba(Xc),
        "numpy": lambda: kernels.gram_numpy(Xc),
    }


def _lasso_case():
    X = np.ascontiguousarray(load_fixture("nolhd_64x192.csv"))
    rng = np.random.default_rng(0)
    beta = np.zeros(192)
    beta[:20] = np.linspace(0.05, 3.0, 20)
    y = X @ beta + 8 * rng.standard_normal(64)
    lm = lambda_max(X, y)
    grid = lambda_grid(lm)
    args = (X, y, grid, np.zeros(192), 1e-7 * lm, 100_000, 0.999, 1e-5)
    return {
        "numba": lambda: kernels.lasso_path_numba(*args),
        "numpy": lambda: kernels.lasso_path_numpy(*args),
    }


def _anneal_case():
    n, p, moves = 8, 24, 2400
    rng = np.random.default_rng(1)
    L0 = np.ascontiguousarray(_start(n, p, rng))
    G0 = L0.T @ L0
    S = int(G0[0, 0])
    npairs = p * (p - 1) // 2
    thr = np.array([0.1, 0.05, 0.01, 0.005])
    f0 = _objective(G0, S, npairs, kernels.OBJ_RHO_AVE, thr, 1.0)
    cols, ra, rb = rng.integers(0, p, moves), rng.integers(0, n, moves), rng.integers(0, n, moves)
    logu = kernels.log_uniforms(rng, moves)

    def run(fn):
        L, G, best = L0.copy(), G0.copy(), L0.copy()
        fn(L, G, S, npairs, kernels.OBJ_RHO_AVE, thr, 1.0, 1e-3, cols, ra, rb, logu, f0, f0, best)
        return L

    return {"numba": lambda: run(kernels.anneal_epoch_numba),
            "numpy": lambda: run(kernels.anneal_epoch_numpy)}


def _es2_case():
    rng = np.random.default_rng(2)
    col = np.repeat([1, -1], 32)
    Z0 = np.column_stack([rng.permutation(col) for _ in range(192)]).astype(np.int64)

    def run(fn):
        Z = Z0.copy()
        fn(Z, Z.T @ Z)
        return Z

    return {"numba": lambda: run(kernels.es2_pass_numba),
            "numpy": lambda: run(kernels.es2_pass_numpy)}


CASES = {
    "gram 64x192": _gram_case,
    "lasso path 64x192, 100 penalties": _lasso_case,
    "anneal epoch 8x24, 2400 moves": _anneal_case,
    "E(s^2) pass 64x192": _es2_case,
}


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return bool(np.allclose(a, b, rtol=1e-9, atol=1e-9))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="print results as JSON")
    args = ap.parse_args()
    rows = []
    for name, make in CASES.items():
        fns = make()
        out = {k: fn() for k, fn in fns.items()}  # warm-up (compiles numba)
        timing = {}
        for k, fn in fns.items():
            number = 1
            while min(timeit.repeat(fn, number=number, repeat=1)) < 0.2 and number < 10_000:
                number *= 4
            timing[k] = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
        rows.append({"kernel": name, "numba_s": timing["numba"], "numpy_s": timing["numpy"],
                     "speedup": timing["numpy"] / timing["numba"],
                     "agree": _same(out["numba"], out["numpy"])})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'kernel':36s} {'numba':>11s} {'numpy':>11s} {'speedup':>8s}  agree")
    for r in rows:
        print(f"{r['kernel']:36s} {r['numba_s'] * 1e3:9.3f}ms {r['numpy_s'] * 1e3:9.3f}ms "
              f"{r['speedup']:7.1f}x  {r['agree']}")


if __name__ == "__main__":
    main()
