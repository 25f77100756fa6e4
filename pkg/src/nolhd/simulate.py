"""Shared-noise Monte Carlo comparison of design matrices for Lasso screening.

Every replication draws one noise vector and one fold partition and uses them
for all methods, so differences in the false-selection count come from the
design matrices alone.

Seeding: ``SeedSequence(master_seed)`` spawns two children, one for the fixed
designs (one grandchild per method) and one for the replications (one
grandchild per replication).  A replication seed spawns three streams in
order: noise, folds, per-replication designs.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .constructors import es2_supersaturated, iid_uniform_sample, random_latin_hypercube
from .criteria import DEFAULT_T, compute_criteria, upper_offdiag
from .design import DesignMatrix, as_array, read_design_csv
from .exceptions import DomainError
from .lasso import (DEFAULT_MAX_ITER, DEFAULT_TOL, DEV_MAX, DEV_STEP, GRID_RATIO, GRID_SIZE, LassoProblem, TrueModel,
                    cross_validate, false_selections, lambda_grid, lambda_max, make_folds,
                    solve_lasso)
from .recipes import load_fixture

METHOD_TAGS = ("nolhd-lemma1", "nolhd-kron", "fd-ssd", "rlhd", "iid", "file")
DEFAULT_MASTER_SEED = 20110
SHARE_THRESHOLD = 0.1


@dataclass(frozen=True)
class DesignMethodSpec:
    """How one competing design is produced.

    ``refresh`` is ``"fixed"`` (built once before the replications) or
    ``"per-rep"`` (rebuilt in every replication from its own stream).
    NOLHD tags take ``params["fixture"]``, the name of a shipped CSV.
    """

    label: str
    method: str
    params: dict = field(default_factory=dict)
    refresh: str = "fixed"

    def __post_init__(self):
        if self.method not in METHOD_TAGS:
            raise DomainError(f"unknown method tag {self.method!r}; choose from {METHOD_TAGS}")
        if self.refresh not in ("fixed", "per-rep"):
            raise DomainError(f"refresh must be 'fixed' or 'per-rep', got {self.refresh!r}")


@dataclass(frozen=True, eq=False)
class SimScenario:
    name: str
    n: int
    p: int
    truth: TrueModel
    reps: int
    methods: tuple[DesignMethodSpec, ...]
    master_seed: int = DEFAULT_MASTER_SEED
    folds: int = 5
    grid_size: int = GRID_SIZE
    grid_ratio: float = GRID_RATIO
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.truth.beta.shape != (self.p,):
            raise DomainError(f"beta has length {self.truth.beta.size}, expected p = {self.p}")
        if self.reps < 1:
            raise DomainError("reps must be at least 1")
        labels = [m.label for m in self.methods]
        if len(set(labels)) != len(labels):
            raise DomainError(f"duplicate method labels: {labels}")
        object.__setattr__(self, "methods", tuple(self.methods))

    @property
    def design_range(self) -> tuple[float, float]:
        h = (self.n - 1) / 2
        return (-h, h)

    def with_(self, **changes) -> "SimScenario":
        kw = {f: getattr(self, f) for f in self.__dataclass_fields__}
        kw.update(changes)
        return SimScenario(**kw)

    def to_dict(self) -> dict:
        return {"name": self.name, "n": self.n, "p": self.p,
                "beta": self.truth.beta.tolist(), "sigma": self.truth.sigma,
                "reps": self.reps, "master_seed": self.master_seed, "folds": self.folds,
                "grid_size": self.grid_size, "grid_ratio": self.grid_ratio,
                "tol": self.tol, "max_iter": self.max_iter,
                "design_range": list(self.design_range),
                "methods": [asdict(m) for m in self.methods], "notes": list(self.notes)}


def scenario_from_dict(d: dict) -> SimScenario:
    """Inverse of :meth:`SimScenario.to_dict` (``design_range`` is derived)."""
    try:
        methods = tuple(DesignMethodSpec(**m) for m in d["methods"])
        return SimScenario(
            name=d["name"], n=int(d["n"]), p=int(d["p"]),
            truth=TrueModel(np.asarray(d["beta"], dtype=float), float(d["sigma"])),
            reps=int(d["reps"]), methods=methods,
            master_seed=int(d.get("master_seed", DEFAULT_MASTER_SEED)),
            folds=int(d.get("folds", 5)), grid_size=int(d.get("grid_size", GRID_SIZE)),
            grid_ratio=float(d.get("grid_ratio", GRID_RATIO)),
            tol=float(d.get("tol", DEFAULT_TOL)), max_iter=int(d.get("max_iter", DEFAULT_MAX_ITER)),
            notes=tuple(d.get("notes", ())))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"invalid scenario: {exc}") from exc


def _competitors(allow_odd: bool = False) -> list[DesignMethodSpec]:
    return [
        DesignMethodSpec("FD", "fd-ssd", {"allow_odd": allow_odd}),
        DesignMethodSpec("RLHD", "rlhd", refresh="per-rep"),
        DesignMethodSpec("IID", "iid", refresh="per-rep"),
    ]


def builtin_scenario(name: str, master_seed: int = DEFAULT_MASTER_SEED) -> SimScenario:
    """The three screening scenarios: ``ex4`` (50 x 48), ``ex5`` (49 x 96), ``ex6`` (64 x 192)."""
    sigma, reps = 8.0, 50
    if name == "ex4":
        n, p = 50, 48
        nz = np.round(np.arange(0.8, 3.0 + 1e-9, 0.2), 10)
        nolhd = DesignMethodSpec("NOLHD", "nolhd-kron", {"fixture": "nolhd_50x48.csv"})
        extra, notes = _competitors(), ()
    elif name == "ex5":
        n, p = 49, 96
        nz = np.round(np.arange(0.2, 3.0 + 1e-9, 0.2), 10)
        nolhd = DesignMethodSpec("NOLHD", "nolhd-lemma1", {"fixture": "nolhd_49x96.csv"})
        extra = _competitors(allow_odd=True)
        notes = ("two-level design at odd n: columns sum to +/-1 instead of 0",)
    elif name == "ex6":
        n, p = 64, 192
        nz = np.linspace(0.05, 3.0, 20)
        nolhd = DesignMethodSpec("NOLHD", "nolhd-lemma1", {"fixture": "nolhd_64x192.csv"})
        extra = _competitors()
        notes = ("nonzero coefficients: 20 values evenly spaced from 0.05 to 3.0",)
    else:
        raise DomainError(f"unknown scenario {name!r}; choose ex4, ex5 or ex6")
    beta = np.zeros(p)
    beta[:nz.size] = nz
    return SimScenario(name=name, n=n, p=p, truth=TrueModel(beta, sigma), reps=reps,
                       methods=(nolhd, *extra), master_seed=master_seed, notes=notes)


def build_design(spec: DesignMethodSpec, scn: SimScenario, seed) -> DesignMatrix:
    """Construct the ``n x p`` design for one method from ``seed``."""
    n, p, rng_ = scn.n, scn.p, scn.design_range
    rng = np.random.default_rng(seed)
    if spec.method in ("nolhd-lemma1", "nolhd-kron"):
        X = DesignMatrix(load_fixture(spec.params["fixture"]), kind="latin-hypercube")
    elif spec.method == "file":
        X = DesignMatrix(read_design_csv(spec.params["path"]))
    elif spec.method == "fd-ssd":
        X = es2_supersaturated(n, p, rng, allow_odd=bool(spec.params.get("allow_odd", False)))
    elif spec.method == "rlhd":
        X = random_latin_hypercube(n, p, rng_, rng)
    else:
        X = iid_uniform_sample(n, p, rng_, rng)
    if X.shape != (n, p):
        raise DomainError(f"method {spec.label}: design is {X.shape[0]}x{X.shape[1]}, "
                          f"expected {n}x{p}")
    return X


Solver = Callable[[np.ndarray, np.ndarray, np.ndarray, SimScenario], np.ndarray]


def cv_lasso_solver(X, y, folds, scn: SimScenario) -> np.ndarray:
    """Five-fold CV on the default grid, then the full-data fit at the chosen penalty.

    The stopping tolerance is ``scn.tol * lambda_max`` so that designs on
    wide level ranges are solved to the same relative accuracy.
    """
    lmax = lambda_max(X, y)
    grid = lambda_grid(lmax, scn.grid_size, scn.grid_ratio)
    tol = scn.tol * max(lmax, 1.0)
    cv = cross_validate(X, y, scn.folds, grid, folds=folds, tol=tol, max_iter=scn.max_iter)
    fit = solve_lasso(LassoProblem(X, y, cv.lambda_), tol, scn.max_iter)
    return fit.beta_hat


def _rep_streams(seed):
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return ss.spawn(3)


def run_replication(scn: SimScenario, designs: dict[str, Any], rep_seed,
                    solver: Solver = cv_lasso_solver) -> dict[str, int]:
    """False-selection count per method for one shared noise draw and fold split.

    ``designs`` maps method label to an ``n x p`` matrix.
    """
    noise_ss, fold_ss, _ = _rep_streams(rep_seed)
    eps = scn.truth.sigma * np.random.default_rng(noise_ss).standard_normal(scn.n)
    folds = make_folds(scn.n, scn.folds, np.random.default_rng(fold_ss))
    out = {}
    for label, X in designs.items():
        X = as_array(X)
        if X.shape != (scn.n, scn.p):
            raise DomainError(f"method {label}: design is {X.shape}, expected {(scn.n, scn.p)}")
        y = X @ scn.truth.beta + eps
        beta_hat = solver(np.ascontiguousarray(X, dtype=float), y, folds, scn)
        out[label] = false_selections(np.asarray(beta_hat), scn.truth)
    return out


def quartiles(samples) -> dict[str, float]:
    """Linear-interpolation quartiles (numpy's default ``linear`` rule)."""
    q1, med, q3 = np.quantile(np.asarray(samples, dtype=float), [0.25, 0.5, 0.75])
    return {"q1": float(q1), "median": float(med), "q3": float(q3)}


def correlation_profile(X, t=DEFAULT_T, threshold: float = SHARE_THRESHOLD) -> dict:
    """Share of pairwise ``|rho|`` above ``threshold`` plus the ``delta`` vector.

    ``share_above_signed`` counts ``rho > threshold`` only, for comparison
    with one-sided summaries.
    """
    crit = compute_criteria(X, t)
    off = upper_offdiag(crit.rho)
    return {"share_above": float(np.mean(np.abs(off) > threshold)),
            "share_above_signed": float(np.mean(off > threshold)), "threshold": threshold,
            "t": list(crit.t), "delta": crit.delta.tolist(),
            "rho_max": crit.rho_max, "rho_ave": crit.rho_ave}


@dataclass(frozen=True, eq=False)
class SimReport:
    scenario: dict
    gamma: dict[str, list[int]]
    quartiles: dict[str, dict[str, float]]
    rep_seeds: list[dict]
    designs: dict[str, dict]
    solver: dict

    def to_dict(self) -> dict:
        return {"tool_version": __version__, "seed": self.scenario["master_seed"],
                "parameters": self.scenario, "solver": self.solver,
                "designs": self.designs, "gamma": self.gamma, "quartiles": self.quartiles,
                "rep_seeds": self.rep_seeds}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def gamma_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "method", "rep", "gamma"])
        for label, vals in self.gamma.items():
            for i, g in enumerate(vals):
                w.writerow([self.scenario["name"], label, i, g])
        return buf.getvalue()

    def write(self, path: str | os.PathLike) -> None:
        Path(path).write_text(self.to_json() + "\n")


def _design_summary(spec: DesignMethodSpec, X: DesignMatrix | None) -> dict:
    info = {"method": spec.method, "refresh": spec.refresh, "params": spec.params}
    if X is not None:
        prof = correlation_profile(X)
        info.update(kind=X.kind, rho_max=prof["rho_max"], rho_ave=prof["rho_ave"],
                    delta=prof["delta"], share_above_0_1=prof["share_above"])
    return info


def run_experiment(scn: SimScenario, workers: int | None = None,
                   solver: Solver = cv_lasso_solver) -> SimReport:
    """Run all replications and summarise gamma by quartiles.

    Replications run on a thread pool (the numerical kernels release the
    GIL); results are stored by replication index so the report does not
    depend on scheduling.
    """
    root = np.random.SeedSequence(scn.master_seed)
    design_root, rep_root = root.spawn(2)
    design_seeds = design_root.spawn(len(scn.methods))
    fixed = {}
    for spec, ss in zip(scn.methods, design_seeds):
        if spec.refresh == "fixed":
            fixed[spec.label] = build_design(spec, scn, ss)
    rep_seeds = rep_root.spawn(scn.reps)

    def one(i):
        per_rep_ss = _rep_streams(rep_seeds[i])[2].spawn(len(scn.methods))
        designs = {}
        for spec, ss in zip(scn.methods, per_rep_ss):
            designs[spec.label] = (fixed[spec.label] if spec.refresh == "fixed"
                                   else build_design(spec, scn, ss))
        return run_replication(scn, designs, rep_seeds[i], solver)

    workers = workers or min(scn.reps, os.cpu_count() or 1)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, range(scn.reps)))
    else:
        results = [one(i) for i in range(scn.reps)]

    gamma = {s.label: [int(r[s.label]) for r in results] for s in scn.methods}
    return SimReport(
        scenario=scn.to_dict(),
        gamma=gamma,
        quartiles={k: quartiles(v) for k, v in gamma.items()},
        rep_seeds=[{"entropy": int(s.entropy), "spawn_key": list(s.spawn_key)} for s in rep_seeds],
        designs={s.label: _design_summary(s, fixed.get(s.label)) for s in scn.methods},
        solver={"objective": "||y - Xb||^2 + lambda ||b||_1", "folds": scn.folds,
                "grid_size": scn.grid_size, "grid_ratio": scn.grid_ratio,
                "selection": "min mean CV error, ties to larger lambda",
                "fold_lambda": "scaled by n_train / n", "standardize": False,
                "tol": scn.tol, "tol_scale": "lambda_max", "max_iter": scn.max_iter,
                "path_saturation": {"dev_max": DEV_MAX, "dev_step": DEV_STEP}},
    )
