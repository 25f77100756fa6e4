import json
import subprocess
import sys

import numpy as np
import pytest

from nolhd import __version__
from nolhd.cli import main
from nolhd.design import read_design_csv, write_design_csv
from nolhd.recipes import fixture_path


@pytest.fixture
def example1_path():
    return str(fixture_path("example1_B_7x12.csv"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCriteria:
    def test_example(self, capsys, example1_path):
        code, out, _ = run(capsys, "criteria", "--input", example1_path)
        d = json.loads(out)
        assert code == 0
        assert round(d["rho_ave"], 4) == 0.3038
        assert np.round(d["delta"], 3).tolist() == [0.5, 0.364, 0.136, 0.136]
        assert d["tool_version"] == __version__ and "seed" in d and d["parameters"]["input"]

    def test_custom_thresholds(self, capsys, example1_path):
        code, out, _ = run(capsys, "criteria", "--input", example1_path, "--t", "0.5,0.2")
        assert code == 0 and json.loads(out)["t"] == [0.5, 0.2]

    def test_bad_thresholds(self, capsys, example1_path):
        code, _, err = run(capsys, "criteria", "--input", example1_path, "--t", "0.1,0.5")
        assert code == 2 and err.count("\n") == 1

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "criteria", "--input", str(tmp_path / "none.csv"))
        assert code == 2 and "cannot read" in err


class TestCheck:
    def test_non_lh(self, capsys, tmp_path):
        write_design_csv([[0.0], [1.0]], tmp_path / "x.csv")
        code, out, _ = run(capsys, "check", "--input", str(tmp_path / "x.csv"))
        d = json.loads(out)
        assert code == 0 and d["latin_hypercube"] is False and d["reason"]

    def test_lh(self, capsys, example1_path):
        code, out, _ = run(capsys, "check", "--input", example1_path)
        assert code == 0 and json.loads(out)["latin_hypercube"] is True

    def test_garbage_file(self, capsys, tmp_path):
        (tmp_path / "g.csv").write_text("a,b\n")
        code, out, _ = run(capsys, "check", "--input", str(tmp_path / "g.csv"))
        assert code == 0 and json.loads(out)["latin_hypercube"] is False

    def test_oa(self, capsys, tmp_path):
        write_design_csv([[1, 1], [1, 2], [2, 1], [2, 2]], tmp_path / "oa.csv")
        code, out, _ = run(capsys, "check", "--input", str(tmp_path / "oa.csv"), "--oa", "--s", "2")
        assert code == 0 and json.loads(out)["orthogonal_array"] is True


class TestConstruct:
    @pytest.mark.invariant
    def test_round_trip(self, capsys, tmp_path):
        out = tmp_path / "d.csv"
        meta = tmp_path / "m.json"
        code, _, _ = run(capsys, "construct", "--method", "lemma1", "--s", "5", "--p", "3",
                         "--seed", "3", "--out", str(out), "--meta", str(meta))
        assert code == 0
        info = json.loads(meta.read_text())
        assert info["seed"] == 3 and info["parameters"]["method"] == "lemma1"
        assert info["design"]["shape"] == [25, 18]
        code, txt, _ = run(capsys, "criteria", "--input", str(out))
        assert json.loads(txt)["rho_ave"] == info["design"]["rho_ave"]
        code, txt, _ = run(capsys, "check", "--input", str(out))
        assert json.loads(txt)["latin_hypercube"] is True

    @pytest.mark.invariant
    def test_rlhd_exact_round_trip(self, capsys, tmp_path):
        out = tmp_path / "r.csv"
        run(capsys, "construct", "--method", "rlhd", "--n", "9", "--p", "4", "--seed", "1",
            "--out", str(out))
        from nolhd.constructors import random_latin_hypercube
        expected = random_latin_hypercube(9, 4, (-4, 4), np.random.default_rng(1)).values
        assert np.array_equal(read_design_csv(out), expected)

    def test_stdout(self, capsys):
        code, out, err = run(capsys, "construct", "--method", "anneal", "--n", "5", "--p", "2")
        assert code == 0 and len(out.splitlines()) == 5 and err == ""

    @pytest.mark.invariant
    def test_reproducible(self, capsys):
        a = run(capsys, "construct", "--method", "ssd", "--n", "8", "--p", "10", "--seed", "4")[1]
        b = run(capsys, "construct", "--method", "ssd", "--n", "8", "--p", "10", "--seed", "4")[1]
        assert a == b

    def test_odd_two_level(self, capsys):
        code, _, err = run(capsys, "construct", "--method", "ssd", "--n", "49", "--p", "96")
        assert code == 2 and "even" in err

    def test_missing_flags(self, capsys):
        code, _, err = run(capsys, "construct", "--method", "rlhd", "--n", "5")
        assert code == 2 and "--p" in err

    def test_kron_from_files(self, capsys, tmp_path):
        import kron_cases
        A, C, B, D, r = kron_cases.kron_case(0, 8, 2)
        paths = {}
        for name, M in {"A1": A[0], "A2": A[1], "C1": C[0], "C2": C[1], "B": B, "D": D}.items():
            paths[name] = str(tmp_path / f"{name}.csv")
            write_design_csv(M, paths[name])
        code, out, err = run(capsys, "construct", "--method", "kron",
                             "--A", f"{paths['A1']},{paths['A2']}", "--C", f"{paths['C1']},{paths['C2']}",
                             "--B", paths["B"], "--D", paths["D"])
        assert code == 0 and "latin_hypercube=True" in err
        assert len(out.splitlines()) == 32


class TestLasso:
    @pytest.fixture
    def data(self, tmp_path):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(30, 6))
        y = X @ np.array([2.0, 0, 0, -1.0, 0, 0]) + 0.1 * rng.normal(size=30)
        write_design_csv(X, tmp_path / "X.csv")
        write_design_csv(y, tmp_path / "y.csv")
        return str(tmp_path / "X.csv"), str(tmp_path / "y.csv")

    def test_fixed_lambda(self, capsys, data):
        code, out, _ = run(capsys, "lasso", "--X", data[0], "--y", data[1], "--lambda", "1.0")
        d = json.loads(out)
        assert code == 0 and d["fit"]["lambda"] == 1.0 and d["seed"] is None

    def test_cv(self, capsys, data):
        code, out, _ = run(capsys, "lasso", "--X", data[0], "--y", data[1], "--cv", "--seed", "3")
        d = json.loads(out)
        assert code == 0 and d["seed"] == 3
        assert set(d["fit"]["active_set"]) >= {0, 3}
        assert len(d["cv"]["grid"]) == 100

    def test_one_se_rule(self, capsys, data):
        lams = []
        for rule in ("min", "1se"):
            code, out, _ = run(capsys, "lasso", "--X", data[0], "--y", data[1], "--rule", rule)
            d = json.loads(out)
            assert code == 0 and d["parameters"]["rule"] == rule
            lams.append(d["fit"]["lambda"])
        assert lams[1] >= lams[0]

    def test_exclusive_flags(self, capsys, data):
        code, _, _ = run(capsys, "lasso", "--X", data[0], "--y", data[1], "--cv", "--lambda", "1")
        assert code == 2


class TestSimulate:
    @pytest.mark.invariant
    def test_byte_identical(self, tmp_path, capsys):
        outs = []
        for k in range(2):
            path = tmp_path / f"r{k}.json"
            code, _, err = run(capsys, "simulate", "--scenario", "ex4", "--reps", "2", "--seed", "1",
                               "--out", str(path), "--gamma-csv", str(tmp_path / f"g{k}.csv"))
            assert code == 0 and "NOLHD" in err
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        assert (tmp_path / "g0.csv").read_bytes() == (tmp_path / "g1.csv").read_bytes()
        d = json.loads(outs[0])
        assert d["seed"] == 1 and d["parameters"]["reps"] == 2

    def test_scenario_file(self, tmp_path, capsys):
        from nolhd.simulate import builtin_scenario
        spec = builtin_scenario("ex4").with_(reps=1).to_dict()
        (tmp_path / "s.json").write_text(json.dumps(spec))
        code, out, _ = run(capsys, "simulate", "--scenario", str(tmp_path / "s.json"))
        assert code == 0 and len(json.loads(out)["gamma"]["FD"]) == 1

    def test_bad_scenario(self, tmp_path, capsys):
        (tmp_path / "s.json").write_text("{not json")
        assert run(capsys, "simulate", "--scenario", str(tmp_path / "s.json"))[0] == 2
        assert run(capsys, "simulate", "--scenario", str(tmp_path / "none.json"))[0] == 2


class TestDispatch:
    def test_unknown_subcommand(self, capsys):
        code, _, err = run(capsys, "frobnicate")
        assert code == 2 and err.startswith("nolhd: error:")

    def test_no_subcommand(self, capsys):
        assert run(capsys)[0] == 2

    def test_console_entry(self, example1_path):
        proc = subprocess.run([sys.executable, "-m", "nolhd.cli", "criteria", "--input", example1_path],
                              capture_output=True, text=True, check=False)
        assert proc.returncode == 0 and json.loads(proc.stdout)["p"] == 12

    def test_help_lists_flags(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--help"])
        assert exc.value.code == 0
        assert "--gamma-csv" in capsys.readouterr().out
