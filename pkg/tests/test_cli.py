import json
import math

import pytest

from gibbslab import models
from gibbslab.cli import main
from gibbslab.jsonio import dump_json


def run(args):
    return main(args)


def test_examples_lists_builtins(capsys):
    assert run(["examples"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"bernoulli", "ising", "golden-mean"}


def test_analyze_bernoulli(tmp_path, capsys):
    out = tmp_path / "r"
    assert run(["analyze", "--builtin", "bernoulli", "--out", str(out)]) == 0
    capsys.readouterr()
    doc = json.loads((out / "analyze.json").read_text())
    assert doc["eigendata"]["pressure"] == pytest.approx(0.0, abs=1e-12)
    assert doc["eigendata"]["nu"] == pytest.approx([0.7, 0.3], abs=1e-12)
    assert doc["gibbs_scan"]["pass"] is True
    assert set(doc["eigendata"]) == {
        "lambda", "pressure", "h", "nu", "min_h", "gap_ratio",
        "ess_radius_bound", "residual_h", "residual_nu",
    }
    assert (out / "cone_trace.csv").read_text().splitlines()[0] == (
        "step,theta,factor,in_cone_flag"
    )


def test_analyze_values_match_reported_precision(tmp_path, capsys):
    out = tmp_path / "r"
    assert run(["analyze", "--builtin", "ising", "--beta", "1", "--out", str(out)]) == 0
    capsys.readouterr()
    doc = json.loads((out / "analyze.json").read_text())
    assert doc["eigendata"]["pressure"] == pytest.approx(1.1270, abs=1e-3)
    assert doc["eigendata"]["gap_ratio"] == pytest.approx(0.7616, abs=1e-3)
    assert run(["analyze", "--builtin", "golden-mean", "--out", str(out)]) == 0
    capsys.readouterr()
    doc = json.loads((out / "analyze.json").read_text())
    assert doc["eigendata"]["pressure"] == pytest.approx(0.4812, abs=5e-4)


def test_exit_codes(tmp_path, capsys, monkeypatch):
    assert run(["analyze", "--builtin", "no-such-model"]) == 1
    capsys.readouterr()
    assert run(["analyze", "--builtin", "bernoulli", "--model", "x.json"]) == 1
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    bad.write_text("{\"alphabet\": 2}")
    assert run(["analyze", "--model", str(bad)]) == 1
    capsys.readouterr()
    import gibbslab.transfer as transfer_mod
    monkeypatch.setattr(transfer_mod, "MAX_ITER", 5)
    assert run(["analyze", "--builtin", "golden-mean", "--tol", "1e-15"]) == 2
    capsys.readouterr()


def test_model_round_trip(tmp_path, capsys):
    model = models.builtin("ising", beta=1.0, field=0.25)
    doc = models.to_document(model)
    path = tmp_path / "ising.json"
    path.write_text(dump_json(doc))
    reparsed = models.from_json(path.read_text(), name="ising.json")
    assert dump_json(models.to_document(reparsed)) == path.read_text()
    out = tmp_path / "r"
    assert run(["analyze", "--model", str(path), "--out", str(out)]) == 0
    capsys.readouterr()
    report = json.loads((out / "analyze.json").read_text())
    assert report["model_input"] == json.loads(dump_json(doc))


def test_outputs_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run([
            "sample", "--builtin", "golden-mean", "--n", "200", "--trials", "2",
            "--seed", "42", "--summary-n", "32", "--summary-trials", "500",
            "--out", str(out),
        ]) == 0
        capsys.readouterr()
        assert run(["analyze", "--builtin", "ising", "--out", str(out)]) == 0
        capsys.readouterr()
    for name in ("samples.txt", "sample_summary.json", "analyze.json", "cone_trace.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_verify_builtins_pass(tmp_path, capsys):
    for name in ("bernoulli", "ising", "golden-mean"):
        out = tmp_path / name
        assert run(["verify", "--builtin", name, "--out", str(out)]) == 0
        capsys.readouterr()
        doc = json.loads((out / "verify.json").read_text())
        assert doc["pass"] is True
        assert [c["pass"] for c in doc["checks"]] == [True] * 5


def test_verify_injections_fail_intended_check(tmp_path, capsys):
    out = tmp_path / "i1"
    assert run(["verify", "--builtin", "bernoulli", "--inject", "fair-chain",
                "--out", str(out)]) == 0
    capsys.readouterr()
    doc = json.loads((out / "verify.json").read_text())
    flags = {c["name"]: c["pass"] for c in doc["checks"]}
    assert flags["variational_defect"] is False
    assert all(v for k, v in flags.items() if k != "variational_defect")
    defect = [c["metric"] for c in doc["checks"] if c["name"] == "variational_defect"][0]
    assert defect == pytest.approx(0.0871766935723889, abs=1e-12)

    out = tmp_path / "i2"
    assert run(["verify", "--builtin", "bernoulli", "--inject", "perturbed-nu",
                "--out", str(out)]) == 0
    capsys.readouterr()
    doc = json.loads((out / "verify.json").read_text())
    flags = {c["name"]: c["pass"] for c in doc["checks"]}
    assert flags["eigen_residuals"] is False
    assert all(v for k, v in flags.items() if k != "eigen_residuals")


def test_pressure_curve_golden_closed_form(tmp_path, capsys):
    out = tmp_path / "c"
    assert run(["pressure-curve", "--builtin", "golden-mean",
                "--grid=-3:3:0.25", "--out", str(out)]) == 0
    capsys.readouterr()
    lines = (out / "pressure_curve.csv").read_text().splitlines()
    assert lines[0] == "s,pressure,lambda_cgf,lambda_prime"
    assert len(lines) == 1 + 25
    worst = 0.0
    for line in lines[1:]:
        s, pressure, _, _ = (float(x) for x in line.split(","))
        closed = math.log((math.exp(s) + math.sqrt(math.exp(2 * s) + 4.0)) / 2.0)
        worst = max(worst, abs(pressure - closed))
    assert worst <= 1e-9


def test_empty_grid_gives_header_only(tmp_path, capsys):
    out = tmp_path / "e"
    assert run(["pressure-curve", "--builtin", "bernoulli",
                "--grid", "1:0:1", "--out", str(out)]) == 0
    capsys.readouterr()
    assert (out / "pressure_curve.csv").read_text() == "s,pressure,lambda_cgf,lambda_prime\n"


def test_rate_curve_records_out_of_range(tmp_path, capsys):
    out = tmp_path / "rc"
    assert run(["rate-curve", "--builtin", "bernoulli",
                "--grid=-0.8:0.4:0.2", "--out", str(out)]) == 0
    capsys.readouterr()
    lines = (out / "rate_curve.csv").read_text().splitlines()
    assert any("out-of-range" in line for line in lines[1:])
    mid = [l for l in lines if l.startswith("0,")][0]
    assert float(mid.split(",")[1]) == 0.0


def test_clt_and_ldp_commands(tmp_path, capsys):
    out = tmp_path / "clt"
    assert run(["clt", "--builtin", "ising", "--n", "64", "--out", str(out)]) == 0
    capsys.readouterr()
    doc = json.loads((out / "clt.json").read_text())
    assert doc["xi2"] == pytest.approx(math.e**2, abs=1e-9)
    assert doc["diagnostics"][0]["n"] == 64
    dist_lines = (out / "distribution_n64.csv").read_text().splitlines()
    assert len(dist_lines) == 1 + 65

    out = tmp_path / "ldp"
    assert run(["ldp", "--builtin", "bernoulli", "--n", "100", "--a-level", "0.2",
                "--b-level", "0.4", "--out", str(out)]) == 0
    capsys.readouterr()
    lines = (out / "ldp.csv").read_text().splitlines()
    assert lines[0].startswith("n,probability,empirical_rate")
    assert len(lines) == 2


def test_format_csv_variants(tmp_path, capsys):
    out = tmp_path / "fmt"
    assert run(["verify", "--builtin", "bernoulli", "--format", "csv",
                "--out", str(out)]) == 0
    capsys.readouterr()
    import csv as csv_mod
    with open(out / "verify.csv") as fh:
        rows = list(csv_mod.reader(fh))
    assert rows[0] == ["check", "metric", "tolerance", "pass"]
    assert len(rows) == 6
    assert all(r[3] == "true" for r in rows[1:])
    assert run(["clt", "--builtin", "ising", "--n", "64", "--format", "csv",
                "--out", str(out)]) == 0
    capsys.readouterr()
    lines = (out / "clt.csv").read_text().splitlines()
    assert lines[0] == "n,ks,be_constant,lle_max_error"
    assert len(lines) == 2
