"""Regenerate the shipped NOLHD fixtures and their manifest."""

from __future__ import annotations

import json
from pathlib import Path

from nolhd import __version__
from nolhd.criteria import compute_criteria
from nolhd.design import write_design_csv
from nolhd.recipes import nolhd_49x96, nolhd_50x48, nolhd_64x192

OUT = Path(__file__).resolve().parents[1] / "src" / "nolhd" / "fixtures"

RECIPES = {
    "nolhd_49x96.csv": (nolhd_49x96, {}),
    "nolhd_50x48.csv": (nolhd_50x48, {"seed": 4}),
    "nolhd_64x192.csv": (nolhd_64x192, {"seed": 1}),
}


def main() -> None:
    manifest = {"tool_version": __version__, "designs": {}}
    for name, (fn, kwargs) in RECIPES.items():
        D = fn(**kwargs)
        write_design_csv(D, OUT / name)
        crit = compute_criteria(D)
        manifest["designs"][name] = {
            "recipe": fn.__name__, "parameters": kwargs, "shape": list(D.shape),
            "kind": D.kind, "rho_max": crit.rho_max, "rho_ave": crit.rho_ave,
            "t": list(crit.t), "delta": crit.delta.tolist(),
        }
        print(name, D.shape, round(crit.rho_ave, 4), crit.delta.round(3).tolist())
    (OUT / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
