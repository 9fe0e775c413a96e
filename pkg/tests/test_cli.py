import json
from pathlib import Path

import pytest

from supercalc import bv, suites
from supercalc.cartan import SuperForm
from supercalc.cli import main
from supercalc.coefficients import Coefficient
from supercalc.suites import SUITES, RunConfig, run_suite

FIX = Path(__file__).parent / "fixtures"

GOLDEN = [
    (["verify", "f-chain", "--n", "1", "--cases", "3", "--seed", "0"], "verify_f_chain_n1.json"),
    (["verify", "delta-squared", "--n", "2", "--cases", "100", "--seed", "7"],
     "verify_delta_squared_n2_seed7.json"),
    (["moduli", "p1", "--degrees", "1,1"], "moduli_p1_1_1.json"),
    (["moduli", "torus", "--m", "3"], "moduli_torus_3.json"),
    (["hodge", "--m", "2", "--K", "1"], "hodge_m2_K1.json"),
]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,name", GOLDEN)
def test_golden_output(argv, name, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (FIX / name).read_text()


def test_golden_values(capsys):
    _, out, _ = run(["moduli", "torus", "--m", "3"], capsys)
    assert json.loads(out)["mclean"] == 3 and json.loads(out)["extended"] == 8
    _, out, _ = run(["moduli", "p1", "--degrees", "1,1"], capsys)
    assert (json.loads(out)["even"], json.loads(out)["odd"]) == (4, 3)
    _, out, _ = run(["hodge", "--m", "1", "--K", "2", "--no-bridge"], capsys)
    assert json.loads(out)["betti"] == [1, 1]
    _, out, _ = run(["verify", "delta-squared", "--n", "2", "--cases", "100", "--seed", "7"], capsys)
    assert json.loads(out)["passed"] == 100


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_is_deterministic_and_green(name, capsys):
    argv = ["verify", name, "--n", "2", "--m", "1", "--cases", "4", "--seed", "3"]
    code1, out1, _ = run(argv, capsys)
    code2, out2, _ = run(argv, capsys)
    assert code1 == code2 == 0
    assert out1 == out2


def test_seed_from_environment(capsys, monkeypatch):
    argv = ["verify", "delta-squared", "--n", "1", "--cases", "5"]
    monkeypatch.setenv("SUPERCALC_SEED", "12")
    _, env_out, _ = run(argv, capsys)
    _, flag_out, _ = run(argv + ["--seed", "12"], capsys)
    assert env_out == flag_out and json.loads(env_out)["config"]["seed"] == 12
    monkeypatch.delenv("SUPERCALC_SEED")
    _, default_out, _ = run(argv, capsys)
    assert json.loads(default_out)["config"]["seed"] == 0


def test_out_file_and_table(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(["moduli", "p1", "--degrees", "1,1", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert target.read_text() == (FIX / "moduli_p1_1_1.json").read_text()
    _, table, _ = run(["moduli", "p1", "--degrees", "1,1", "--format", "table"], capsys)
    assert any(line.split() == ["even", "4"] for line in table.splitlines())


@pytest.mark.parametrize("argv", [
    ["verify", "no-such-suite"],
    ["moduli", "torus", "--m", "9"],
    ["moduli", "torus"],
    ["moduli", "p1"],
    ["hodge", "--m", "0"],
    ["verify", "delta-squared", "--n", "7"],
    ["verify", "delta-squared", "--cases", "0"],
])
def test_errors_exit_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and out == "" and err.startswith("supercalc: error:")


def test_unknown_suite_lists_suites(capsys):
    _, _, err = run(["verify", "nope"], capsys)
    assert all(name in err for name in SUITES)


def _flipped(monkeypatch):
    real = bv.check_F_chain
    monkeypatch.setattr(suites, "check_F_chain", lambda w, a: real(w, a, sign=1))
    return real


def test_failing_suite_exits_1(monkeypatch, capsys):
    _flipped(monkeypatch)
    code, out, _ = run(["verify", "f-chain", "--n", "2", "--cases", "10"], capsys)
    assert code == 1 and not json.loads(out)["ok"]


def test_counterexamples_round_trip(monkeypatch):
    real = _flipped(monkeypatch)
    rep = run_suite("f-chain", RunConfig(n=2, cases=10, seed=1))
    assert rep.failures
    for f in json.loads(rep.dumps())["failures"]:
        w = SuperForm.from_json(f["w"])
        alpha = Coefficient.from_json(f["alpha"])
        assert not real(w, alpha, sign=1)
        assert real(w, alpha)
