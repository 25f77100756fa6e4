"""The numba and numpy kernels must compute the same thing.

In-process tests call both implementations directly; the subprocess tests
check that the environment flag switches the whole library over and leaves
every seeded result unchanged.
"""

import json
import os
import subprocess
import sys
import textwrap

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nolhd import _accel, kernels
from nolhd.constructors.anneal import _objective, _start

numba_only = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")

WORKLOAD = textwrap.dedent("""
    import json
    import numpy as np
    import nolhd
    from nolhd.constructors import AnnealConfig, anneal_nolhd, es2_supersaturated
    from nolhd.criteria import compute_criteria
    from nolhd.lasso import cross_validate, lambda_grid, lambda_max, lasso_path
    from nolhd.recipes import load_fixture
    from nolhd.lasso import TrueModel
    from nolhd.simulate import DesignMethodSpec, SimScenario, run_experiment

    X = load_fixture("nolhd_64x192.csv")
    rng = np.random.default_rng(0)
    y = X[:, :20] @ np.linspace(0.05, 3, 20) + 8 * rng.standard_normal(64)
    betas, iters, _ = lasso_path(X, y, lambda_grid(lambda_max(X, y), 30), tol=1e-7 * lambda_max(X, y))
    cv = cross_validate(X, y, rng=1, tol=1e-7 * lambda_max(X, y))
    methods = (DesignMethodSpec("RLHD", "rlhd", refresh="per-rep"),
               DesignMethodSpec("FD", "fd-ssd"))
    scn = SimScenario("toy", 20, 24, TrueModel(np.r_[3.0, -2.0, 1.5, np.zeros(21)], 1.0), 3,
                      methods, master_seed=5)
    out = {
        "backend": nolhd.BACKEND,
        "criteria": compute_criteria(X).to_dict(),
        "anneal": anneal_nolhd(7, 12, AnnealConfig(cooling=0.8), rng=3).values.tolist(),
        "ssd": es2_supersaturated(20, 30, 4).values.tolist(),
        "betas": betas.tolist(),
        "iters": iters.tolist(),
        "cv_lambda": cv.lambda_,
        "gamma": run_experiment(scn, workers=1).gamma,
    }
    print(json.dumps(out))
""")


def _run(disable: bool) -> dict:
    env = dict(os.environ)
    env.pop(_accel.DISABLE_ENV, None)
    if disable:
        env[_accel.DISABLE_ENV] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True,
                          text=True, check=True)
    return json.loads(proc.stdout)


@pytest.fixture(scope="module")
def both_backends():
    return _run(False), _run(True)


class TestEnvironmentFlag:
    @numba_only
    def test_flag_selects_backend(self, both_backends):
        fast, slow = both_backends
        assert fast["backend"] == "numba" and slow["backend"] == "numpy"

    def test_discrete_results_identical(self, both_backends):
        fast, slow = both_backends
        assert fast["anneal"] == slow["anneal"]
        assert fast["ssd"] == slow["ssd"]
        assert fast["gamma"] == slow["gamma"]
        assert fast["criteria"]["delta"] == slow["criteria"]["delta"]

    def test_continuous_results_agree(self, both_backends):
        fast, slow = both_backends
        assert np.allclose(fast["betas"], slow["betas"], rtol=0, atol=1e-8)
        assert fast["cv_lambda"] == slow["cv_lambda"]
        assert fast["criteria"]["rho_ave"] == pytest.approx(slow["criteria"]["rho_ave"], abs=1e-14)

    @pytest.mark.parametrize("value,disabled", [("1", True), ("true", True), ("ON", True),
                                                ("0", False), ("", False)])
    def test_flag_values(self, monkeypatch, value, disabled):
        monkeypatch.setenv(_accel.DISABLE_ENV, value)
        assert _accel._disabled_by_env() is disabled


@numba_only
class TestKernelPairs:
    @settings(max_examples=20, deadline=None)
    @given(st.integers(2, 30), st.integers(1, 12), st.integers(0, 2**31 - 1))
    def test_gram(self, n, p, seed):
        X = np.random.default_rng(seed).normal(size=(n, p))
        Xc = np.ascontiguousarray(X - X.mean(axis=0))
        assert np.allclose(kernels.gram_numba(Xc), kernels.gram_numpy(Xc), rtol=1e-12, atol=1e-12)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(5, 25), st.integers(2, 40), st.integers(0, 2**31 - 1),
           st.sampled_from([0.0, 0.999]))
    def test_lasso_path(self, n, p, seed, dev_max):
        rng = np.random.default_rng(seed)
        X = np.ascontiguousarray(rng.normal(size=(n, p)))
        y = X[:, 0] * 2 + rng.normal(size=n)
        lm = 2 * np.max(np.abs(X.T @ y))
        grid = np.geomspace(lm, lm * 1e-3, 20)
        args = (X, y, grid, np.zeros(p), 1e-9, 200_000, dev_max, 1e-5)
        b1, i1, c1 = kernels.lasso_path_numba(*args)
        b2, i2, c2 = kernels.lasso_path_numpy(*args)
        assert np.allclose(b1, b2, rtol=0, atol=1e-8)
        assert np.array_equal(c1, c2)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(3, 9), st.integers(2, 10), st.integers(0, 2**31 - 1), st.integers(0, 2))
    def test_anneal_epoch(self, n, p, seed, obj):
        rng = np.random.default_rng(seed)
        L0 = np.ascontiguousarray(_start(n, p, rng))
        G0 = L0.T @ L0
        S = int(G0[0, 0])
        npairs = p * (p - 1) // 2
        thr = np.array([0.1, 0.05, 0.01, 0.005])
        f0 = _objective(G0, S, npairs, obj, thr, 1.0)
        m = 300
        cols, ra, rb = rng.integers(0, p, m), rng.integers(0, n, m), rng.integers(0, n, m)
        logu = kernels.log_uniforms(rng, m)
        results = []
        for fn in (kernels.anneal_epoch_numba, kernels.anneal_epoch_numpy):
            L, G, best = L0.copy(), G0.copy(), L0.copy()
            f, bf, acc = fn(L, G, S, npairs, obj, thr, 1.0, 0.05, cols, ra, rb, logu, f0, f0, best)
            results.append((L, G, best, f, bf, acc))
        (L1, G1, B1, f1, bf1, a1), (L2, G2, B2, f2, bf2, a2) = results
        assert np.array_equal(L1, L2) and np.array_equal(G1, G2) and np.array_equal(B1, B2)
        assert a1 == a2
        assert f1 == pytest.approx(f2, abs=1e-12) and bf1 == pytest.approx(bf2, abs=1e-12)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(4, 20), st.integers(2, 20), st.integers(0, 2**31 - 1))
    def test_es2_pass(self, n, p, seed):
        rng = np.random.default_rng(seed)
        Z0 = np.ascontiguousarray(rng.choice([-1, 1], (n, p)).astype(np.int64))
        Z1, Z2 = Z0.copy(), Z0.copy()
        S1, S2 = Z1.T @ Z1, Z2.T @ Z2
        assert kernels.es2_pass_numba(Z1, S1) == kernels.es2_pass_numpy(Z2, S2)
        assert np.array_equal(Z1, Z2) and np.array_equal(S1, S2)
        assert np.array_equal(S1, Z1.T @ Z1)
