import json

import pytest

from epswigner.cli import dumps, main

FAST = """
solver = "characteristics"
[characteristics]
n = 24
"""


def _run(tmp_path, text, *extra, name="out"):
    cfg = tmp_path / "s.toml"
    cfg.write_text(text)
    out = tmp_path / name
    return main(["run", str(cfg), "--out", str(out), *extra]), out


def test_selftest_report(tmp_path):
    code, out = _run(tmp_path, "", "--experiment", "algebra-selftest", "--seed", "11")
    assert code == 0
    report = json.loads((out / "algebra-selftest.json").read_text())
    assert report["passed"] and report["seed"] == 11 and report["unitary_sign"] == 1
    assert all("max_deviation" in c for c in report["checks"])


def test_compare_gauges_outputs(tmp_path):
    code, out = _run(tmp_path, FAST)
    assert code == 0
    report = json.loads((out / "compare-gauges.json").read_text())
    assert report["gauge_gap"]["characteristics"] < 1e-6
    run = report["runs"][0]
    for key in ("gauge", "sigma_re", "sigma_im", "magnitude", "phase", "residual",
                "reference_re", "reference_im", "window"):
        assert key in run
    header = (out / "compare-gauges_characteristics_A.csv").read_text().splitlines()[0]
    assert header == "t,mean_q,mean_p,mean_qdot,E_of_t"


def test_json_is_deterministic(tmp_path):
    _, a = _run(tmp_path, FAST, name="a")
    _, b = _run(tmp_path, FAST, name="b")
    assert (a / "compare-gauges.json").read_bytes() == (b / "compare-gauges.json").read_bytes()


def test_tolerance_failure_exit_code(tmp_path):
    code, out = _run(tmp_path, FAST + "[tolerances]\ndrude = 1e-30\n")
    assert code == 2
    assert json.loads((out / "compare-gauges.json").read_text())["passed"] is False


def test_config_error_exit_code(tmp_path, capsys):
    code, _ = _run(tmp_path, "bogus = 1")
    assert code == 1
    assert "unknown key 'bogus'" in capsys.readouterr().err


def test_solver_error_exit_code(tmp_path, capsys):
    # phi-gauge canonical momentum outgrows any grid over this horizon
    code, _ = _run(tmp_path, 'gauge = "phi"\nsolver = "grid"\n[time]\nhorizon = 80.0\n[drive]\nomega = 0.5\n')
    assert code == 1
    assert "phi-gauge grid spacing" in capsys.readouterr().err


def test_dump_hamiltonian(capsys):
    assert main(["dump-hamiltonian", "--gauge", "phi", "--t", "0.0"]) == 0
    terms = json.loads(capsys.readouterr().out)
    assert terms == sorted(terms)
    monos = [m for m, _ in terms]
    assert monos == [[0, 0, 0, 1], [0, 1, 1, 0]]
    assert terms[1][1] == [1.0, 0.0]


def test_dumps_uses_17_digits():
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps({"a": [1, 2.5], "b": None, "c": True}) == '{\n  "a": [1, 2.5],\n  "b": null,\n  "c": true\n}'
    with pytest.raises(TypeError):
        dumps(object())
