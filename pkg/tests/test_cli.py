from __future__ import annotations

import json
from importlib import resources

import pytest

from jacobispec.cli import main


@pytest.fixture()
def op_file(tmp_path):
    path = tmp_path / "b2i.json"
    path.write_text('{"entries": [{"j": 1, "b_re": 0.0, "b_im": 2.0}]}\n')
    return path


@pytest.fixture()
def step_file(tmp_path):
    path = tmp_path / "step.json"
    path.write_text('{"step": {"n": 3, "h_re": 0.5}}\n')
    return path


def test_jost_csv(op_file, tmp_path, capsys):
    out = tmp_path / "jost.csv"
    assert main(["jost", "--op", str(op_file), "--z", "0.3,0.2", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "k,re,im,bound"
    k, re, im, bound = lines[1].split(",")
    assert k == "0"
    assert complex(float(re), float(im)) == pytest.approx(1.0 - 2j * (0.3 + 0.2j))
    assert float(bound) == 0.0


def test_jost_volterra_bound_column(op_file, tmp_path):
    out = tmp_path / "jost.csv"
    assert main(["jost", "--op", str(op_file), "--z", "0.3,0.2",
                 "--method", "volterra", "--tol", "1e-10", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    assert all(float(r.split(",")[3]) >= 0.0 for r in rows)


def test_spectrum_json_and_schema(op_file, tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    out = tmp_path / "report.json"
    assert main(["spectrum", "--op", str(op_file), "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    schema = json.loads(
        resources.files("jacobispec").joinpath("schemas/spectrum_report.schema.json").read_text()
    )
    jsonschema.validate(report, schema)
    assert len(report["zeros"]) == 1
    assert report["zeros"][0]["lambda"]["im"] == pytest.approx(1.5, abs=1e-9)


def test_free_spectrum_empty(tmp_path):
    op = tmp_path / "free.json"
    op.write_text('{"entries": []}\n')
    out = tmp_path / "report.json"
    assert main(["spectrum", "--op", str(op), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["zeros"] == []


def test_byte_identical_reruns(op_file, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        assert main(["spectrum", "--op", str(op_file), "--seed", "3", "--out", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()

    csv1, csv2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (csv1, csv2):
        assert main(["steppot", "--n", "40", "--alpha", "0.5", "--a", "0.1",
                     "--out", str(out), "--summary", str(tmp_path / "s.json")]) == 0
    assert csv1.read_bytes() == csv2.read_bytes()


def test_lt_sum_and_enclosure(op_file, step_file, tmp_path):
    out = tmp_path / "lt.json"
    assert main(["lt-sum", "--op", str(op_file), "--eps", "0.5", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["lt_sum"] == pytest.approx(0.9487, abs=2e-4)
    out2 = tmp_path / "enc.json"
    assert main(["enclosure", "--op", str(step_file), "--out", str(out2)]) == 0
    enc = json.loads(out2.read_text())
    assert enc["cassini"] is True and enc["bs_schroedinger"] is True


def test_steppot_all_roots_and_summary(tmp_path):
    out = tmp_path / "roots.csv"
    summary = tmp_path / "summary.json"
    assert main(["steppot", "--n", "5", "--h", "1.0", "--all-roots",
                 "--out", str(out), "--summary", str(summary)]) == 0
    header = out.read_text().splitlines()[0].split(",")
    assert header == ["k", "zeta_re", "zeta_im", "z_re", "z_im",
                      "lambda_re", "lambda_im", "admissible", "residual_pn", "residual_char"]
    data = json.loads(summary.read_text())
    assert data["admissible"] == 5


def test_steppot_threads_deterministic(tmp_path):
    outs = []
    for name, threads in (("t1.csv", "1"), ("t4.csv", "4")):
        out = tmp_path / name
        assert main(["--threads", threads, "steppot", "--n", "200", "--alpha", "0.5",
                     "--a", "0.1", "--out", str(out), "--summary", str(tmp_path / "s.json")]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_sharpness_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sharpness-sweep", "--alpha", "0.5", "--n-list", "64,256",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,sum,sum_over_log_n,admissible"
    sums = [float(line.split(",")[1]) for line in lines[1:]]
    assert sums[1] > sums[0]


def test_oracle_scan(op_file, tmp_path):
    out = tmp_path / "oracle.csv"
    assert main(["oracle", "--op", str(op_file), "--n-trunc", "60",
                 "--scan", "-2.5,2.5,0.05,2.0", "0.05", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "re,im"
    assert len(lines) == 2
    assert float(lines[1].split(",")[1]) == pytest.approx(1.5, abs=1e-7)


def test_plots_written(op_file, tmp_path):
    figdir = tmp_path / "figs"
    assert main(["spectrum", "--op", str(op_file), "--out", str(tmp_path / "r.json"),
                 "--plots", str(figdir)]) == 0
    assert (figdir / "spectrum.png").exists()
    assert main(["steppot", "--n", "5", "--h", "1.0", "--all-roots",
                 "--out", str(tmp_path / "roots.csv"), "--summary", str(tmp_path / "s.json"),
                 "--plots", str(figdir)]) == 0
    assert (figdir / "step_roots.png").exists()
    assert main(["sharpness-sweep", "--alpha", "0.5", "--n-list", "64,128",
                 "--out", str(tmp_path / "sw.csv"), "--plots", str(figdir)]) == 0
    assert (figdir / "sharpness.png").exists()


def test_invalid_inputs_exit_2(tmp_path, capsys):
    assert main(["spectrum", "--op", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"entries": [{"j": 0}]}')
    assert main(["spectrum", "--op", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "error:" in err
    trunc = tmp_path / "trunc.json"
    trunc.write_text('{"entries": [')
    assert main(["jost", "--op", str(trunc), "--z", "0.5,0.0"]) == 2
    assert main(["steppot", "--n", "4", "--alpha", "0.5", "--a", "0.3"]) == 2


def test_strict_elevates_warnings(op_file, tmp_path):
    # the rank-one zero sits on the imaginary axis, which forces a jitter
    rc = main(["--strict", "spectrum", "--op", str(op_file), "--out", str(tmp_path / "r.json")])
    assert rc == 3
    rc = main(["spectrum", "--op", str(op_file), "--out", str(tmp_path / "r.json")])
    assert rc == 0
