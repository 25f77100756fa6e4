import json

import numpy as np
import pytest

from nolhd.criteria import compute_criteria
from nolhd.design import is_latin_hypercube
from nolhd.recipes import (affine_row_maps, fixture_path, load_fixture, nolhd_49x96, nolhd_50x48,
                           nolhd_64x192)

RECIPES = {"nolhd_49x96.csv": lambda: nolhd_49x96(),
           "nolhd_50x48.csv": lambda: nolhd_50x48(seed=4),
           "nolhd_64x192.csv": lambda: nolhd_64x192(seed=1)}


@pytest.fixture(scope="module")
def manifest():
    return json.loads(fixture_path("manifest.json").read_text())


class TestShippedDesigns:
    @pytest.mark.parametrize("name", sorted(RECIPES))
    def test_recipe_reproduces_fixture(self, name):
        assert np.array_equal(RECIPES[name]().values, load_fixture(name))

    @pytest.mark.parametrize("name", sorted(RECIPES))
    def test_manifest_matches_fixture(self, name, manifest):
        entry = manifest["designs"][name]
        X = load_fixture(name)
        crit = compute_criteria(X)
        assert list(X.shape) == entry["shape"]
        assert crit.rho_max == pytest.approx(entry["rho_max"], abs=1e-12)
        assert crit.rho_ave == pytest.approx(entry["rho_ave"], abs=1e-12)
        assert crit.delta.tolist() == pytest.approx(entry["delta"], abs=1e-12)

    @pytest.mark.parametrize("name", sorted(RECIPES))
    def test_latin_hypercube(self, name):
        assert is_latin_hypercube(load_fixture(name))

    def test_frozen_values(self, manifest):
        d = manifest["designs"]
        assert round(d["nolhd_49x96.csv"]["rho_ave"], 4) == 0.1034
        assert round(d["nolhd_49x96.csv"]["rho_max"], 4) == 0.9643
        assert d["nolhd_50x48.csv"]["delta"][1] >= 0.80
        assert d["nolhd_64x192.csv"]["delta"][0] >= 0.88

    def test_meta(self):
        meta = nolhd_50x48(seed=4).meta
        assert meta["recipe"] == "nolhd_50x48" and meta["seed"] == 4
        assert sorted(meta["row_map"]) == list(range(25))


class TestAffineRowMaps:
    def test_count_and_permutations(self):
        maps = np.array(list(affine_row_maps(5)))
        # |AGL(2, 5)| = 25 * (25 - 1) * (25 - 5)
        assert maps.shape == (12_000, 25)
        assert np.all(np.sort(maps, axis=1) == np.arange(25))
        assert len({m.tobytes() for m in maps}) == 12_000

    def test_small_field(self):
        maps = list(affine_row_maps(2))
        assert len(maps) == 4 * 3 * 2
