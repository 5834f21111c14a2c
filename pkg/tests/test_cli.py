"""Command-line interface: file contracts, config precedence, exit codes."""

import json
import os
import re
import subprocess
import sys

import numpy as np
import pytest

from faberzeros.cli import main

FLOAT_RE = re.compile(r"^-?\d\.\d{12}e[+-]\d{2,3}$")


def run(args):
    return main(args)


def read_rows(path):
    lines = path.read_text().strip().splitlines()
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


# ---------------------------------------------------------------- zeros

def test_zeros_csv_contract(tmp_path):
    out = tmp_path / "z"
    assert run(["zeros", "--R", "2.1", "--theta", "0.0", "--n", "30",
                "--out", str(out)]) == 0
    header, rows = read_rows(out / "zeros_n30.csv")
    assert header == ["n", "index", "re", "im", "residual", "class"]
    assert len(rows) == 30
    for i, row in enumerate(rows):
        assert row[0] == "30"
        assert int(row[1]) == i
        for cell in row[2:5]:
            assert FLOAT_RE.match(cell), cell
        assert row[5] in ("segment", "loop", "other")
        assert float(row[4]) < 1e-7


def test_zeros_json_format(tmp_path):
    out = tmp_path / "zj"
    assert run(["zeros", "--R", "1.26", "--n", "8", "--out", str(out),
                "--format", "csv,json"]) == 0
    doc = json.loads((out / "zeros_n8.json").read_text())
    assert doc["n"] == 8
    assert doc["method"] in ("simultaneous", "seeded")
    assert len(doc["zeros"]) == 8
    assert (out / "zeros_n8.csv").exists()


def test_zeros_multiple_degrees(tmp_path):
    out = tmp_path / "zm"
    assert run(["zeros", "--R", "1.26", "--n", "5,9", "--out", str(out)]) == 0
    assert (out / "zeros_n5.csv").exists()
    assert (out / "zeros_n9.csv").exists()


# ---------------------------------------------------------------- predict

def test_predict_outputs(tmp_path):
    out = tmp_path / "p"
    assert run(["predict", "--R", "2.1", "--theta", "0.0", "--out", str(out)]) == 0
    doc = json.loads((out / "predicted.json").read_text())
    assert doc["case"] == "supercritical"
    assert doc["masses"]["segment"] == pytest.approx(0.3003965754379143, abs=1e-11)
    assert doc["masses"]["loop"] == pytest.approx(0.6996034245620857, abs=1e-11)
    assert doc["capacity"] == pytest.approx(1.05)
    assert doc["i_b"]["re"] == pytest.approx(-0.45454545454545453, abs=1e-11)
    header, rows = read_rows(out / "curves.csv")
    assert header == ["component", "param", "re", "im"]
    comps = {r[0] for r in rows}
    assert {"boundary", "arc", "circle_cb", "segment", "loop",
            "loop_minus", "corner_ib"} <= comps


def test_predict_subcritical_has_no_loop(tmp_path):
    out = tmp_path / "ps"
    assert run(["predict", "--R", "1.26", "--out", str(out)]) == 0
    doc = json.loads((out / "predicted.json").read_text())
    assert doc["case"] == "subcritical"
    assert doc["masses"]["segment"] == 1.0
    _, rows = read_rows(out / "curves.csv")
    assert not any(r[0] == "loop" for r in rows)


# ---------------------------------------------------------------- verify

def test_verify_passes_and_reports(tmp_path, capsys):
    out = tmp_path / "v"
    code = run(["verify", "--R", "1.26", "--theta", "0.0", "--n", "20",
                "--out", str(out)])
    text = capsys.readouterr().out
    assert code == 0
    assert "VERIFY PASS" in text
    doc = json.loads((out / "verify_report.json").read_text())
    assert doc["pass"] is True
    gates = doc["runs"][0]["gates"]
    assert all(gates.values())
    assert doc["runs"][0]["quad_max_residual"] < 1e-6


def test_verify_tol_override_can_fail(tmp_path, capsys):
    out = tmp_path / "vf"
    code = run(["verify", "--R", "1.26", "--n", "20", "--out", str(out),
                "--tol-quad", "1e-20"])
    assert code == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_zeros_in_roundtrip(tmp_path, capsys):
    zdir = tmp_path / "zz"
    run(["zeros", "--R", "2.1", "--theta", "0.0", "--n", "40", "--out", str(zdir)])
    code = run(["verify", "--R", "2.1", "--theta", "0.0", "--n", "40",
                "--zeros-in", str(zdir / "zeros_n40.csv"), "--out",
                str(tmp_path / "vz")])
    capsys.readouterr()
    assert code == 0


# ---------------------------------------------------------------- plot

def test_plot_svg_sane(tmp_path):
    out = tmp_path / "svg"
    assert run(["plot", "--R", "2.1", "--theta", "0.0", "--n", "40",
                "--out", str(out)]) == 0
    svg = (out / "plot_n40.svg").read_text()
    assert svg.startswith("<svg ")
    assert svg.rstrip().endswith("</svg>")
    # regression: the unbounded complement-loop arm must not blow up the frame
    m = re.search(r'viewBox="([-\d. ]+)"', svg)
    assert m, "viewBox missing"
    vals = [float(v) for v in m.group(1).split()]
    assert all(abs(v) < 100 for v in vals), vals
    assert svg.count("<circle") >= 40


def test_plot_reruns_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(["plot", "--paper-figure", "3", "--n", "25", "--out", str(a)])
    run(["plot", "--paper-figure", "3", "--n", "25", "--out", str(b)])
    assert (a / "plot_n25.svg").read_bytes() == (b / "plot_n25.svg").read_bytes()


# ---------------------------------------------------------------- config

def test_paper_figure_presets(tmp_path):
    out = tmp_path / "fig"
    assert run(["predict", "--paper-figure", "2", "--out", str(out)]) == 0
    doc = json.loads((out / "predicted.json").read_text())
    assert doc["rcos"] == pytest.approx(2.1)
    out2 = tmp_path / "fig3"
    assert run(["predict", "--paper-figure", "3", "--out", str(out2)]) == 0
    doc = json.loads((out2 / "predicted.json").read_text())
    assert doc["case"] == "supercritical"
    assert doc["masses"]["segment"] == pytest.approx(0.38807134452611586, abs=1e-9)


def test_config_file_and_cli_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("R = 1.26\ntheta = 0.0\nn = 6\n# comment line\nout = %s\n"
                   % (tmp_path / "cfgout"))
    assert run(["zeros", "--config", str(cfg)]) == 0
    assert (tmp_path / "cfgout" / "zeros_n6.csv").exists()
    # CLI flag beats the file
    assert run(["zeros", "--config", str(cfg), "--n", "7",
                "--out", str(tmp_path / "cli")]) == 0
    assert (tmp_path / "cli" / "zeros_n7.csv").exists()
    assert not (tmp_path / "cli" / "zeros_n6.csv").exists()


# ---------------------------------------------------------------- failures

@pytest.mark.parametrize("args", [
    ["zeros", "--R", "0.5", "--n", "5"],
    ["zeros", "--R", "1.26", "--n", "0"],
    ["zeros", "--R", "1.26", "--n", "501"],
    ["zeros", "--R", "1.26"],                      # no degrees given
    ["zeros", "--n", "5"],                         # no R and no preset
    ["zeros", "--R", "2.0", "--theta", "1.6", "--n", "5"],
    ["verify", "--R", "1.26", "--n", "5", "--zeros-in", "/nonexistent.csv"],
])
def test_parameter_failures_exit_2(args, tmp_path, capsys):
    code = run(args + ["--out", str(tmp_path / "x")])
    capsys.readouterr()
    assert code == 2


# ---------------------------------------------------------------- threads

def test_thread_count_does_not_change_bytes(tmp_path):
    env = dict(os.environ)
    outs = {}
    for threads in ("1", "4"):
        env["FABER_THREADS"] = threads
        out = tmp_path / ("t" + threads)
        r = subprocess.run(
            [sys.executable, "-m", "faberzeros", "zeros", "--R", "2.1",
             "--theta", "0.2", "--n", "20,35", "--out", str(out)],
            env=env, capture_output=True, text=True)
        assert r.returncode == 0, r.stderr
        outs[threads] = [(out / f"zeros_n{n}.csv").read_bytes() for n in (20, 35)]
    assert outs["1"] == outs["4"]
