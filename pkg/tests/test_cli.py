import csv
import io
import json

import pytest

from riskspectrum.cli import main, parse_grid, parse_sweep
from riskspectrum.errors import InputError


@pytest.fixture
def x13(tmp_path):
    path = tmp_path / "x13.json"
    path.write_text(json.dumps({"type": "discrete", "values": [-1, 3], "probs": ["3/4", "1/4"]}))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pbound_text(capsys, x13):
    code, out, _ = run(capsys, "pbound", "--dist", x13, "--x", "1", "--alpha", "2")
    assert code == 0
    assert out.splitlines()[0].split() == ["value", "0.75"]


def test_qbound_json_has_decomposition(capsys, x13):
    code, out, _ = run(capsys, "qbound", "--dist", x13, "--p", "0.5", "--alpha", "1",
                       "--format", "json")
    assert code == 0
    row = json.loads(out)[0]
    assert row["value"] == pytest.approx(1.0, abs=1e-9)
    assert row["q0"] == -1.0
    assert row["q0"] + row["excess"] == pytest.approx(row["value"], abs=1e-9)
    assert row["dual_residual"] < 1e-7


def test_qbound_inf_alpha(capsys, x13):
    code, out, _ = run(capsys, "qbound", "--dist", x13, "--p", "0.5", "--alpha", "inf",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)[0]["alpha"] == "inf"


def test_spectrum_csv_deterministic(capsys, x13, monkeypatch):
    argv = ("spectrum", "--dist", x13, "--sweep", "alpha:0.25:4:9:log", "--p", "0.4")
    monkeypatch.setenv("RISK_SPECTRUM_THREADS", "1")
    _, serial, _ = run(capsys, *argv)
    monkeypatch.setenv("RISK_SPECTRUM_THREADS", "4")
    code, parallel, _ = run(capsys, *argv)
    assert code == 0 and serial == parallel
    rows = list(csv.DictReader(io.StringIO(parallel)))
    assert len(rows) == 9
    values = [float(r["value"]) for r in rows]
    assert values == sorted(values)


def test_spectrum_x_grid(capsys, x13, tmp_path):
    out_path = tmp_path / "rows.json"
    code, _, _ = run(capsys, "spectrum", "--dist", x13, "--grid", "x=0,1,2", "--alpha", "1",
                     "--format", "json", "--out", str(out_path))
    assert code == 0
    rows = json.loads(out_path.read_text())
    assert [r["x"] for r in rows] == [0, 1, 2]
    assert all(0 <= r["value"] <= 1 for r in rows)


def test_inequality(capsys, tmp_path):
    path = tmp_path / "coin.json"
    path.write_text(json.dumps({"type": "discrete", "values": [0, 2], "probs": [0.5, 0.5]}))
    code, out, _ = run(capsys, "inequality", "--dist", str(path), "--p", "0.75",
                       "--format", "json")
    assert code == 0
    row = json.loads(out)[0]
    assert row["lorenz"] == pytest.approx(0.5)
    assert row["mean_risk"] == pytest.approx(1.5)


def test_check_reports_each_axiom(capsys):
    code, out, _ = run(capsys, "check", "--risk", "q0", "--p", "0.05", "--cases", "30")
    assert code == 0
    report = {r["axiom"]: r for r in json.loads(out)}
    assert set(report) == {"translation_invariance", "positive_homogeneity", "monotonicity",
                           "subadditivity"}
    assert report["translation_invariance"]["pass"]


def test_exit_codes(capsys, x13, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "pbound", "--dist", str(bad), "--x", "0", "--alpha", "1")[0] == 3
    assert run(capsys, "pbound", "--dist", x13, "--x", "0", "--alpha", "-1")[0] == 3
    assert run(capsys, "qbound", "--dist", x13, "--p", "1.5", "--alpha", "1")[0] == 4
    assert run(capsys, "qbound", "--dist", x13, "--p", "0.5", "--alpha", "0.5",
               "--tol", "1e-300")[0] == 2
    code, _, err = run(capsys, "spectrum", "--dist", x13, "--alpha", "1")
    assert code == 3 and "exactly one" in err


def test_sweep_parsing():
    assert parse_sweep("p:0.1:0.3:3") == ("p", pytest.approx([0.1, 0.2, 0.3]))
    var, grid = parse_sweep("alpha:1:100:3:log")
    assert var == "alpha" and grid == pytest.approx([1, 10, 100])
    assert parse_grid("alpha=0.5,inf")[1][-1] == float("inf")
    with pytest.raises(InputError):
        parse_sweep("q:0:1:3")
    with pytest.raises(InputError):
        parse_sweep("p:0:1")
