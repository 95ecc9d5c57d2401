import csv
import io
import json
import shutil
from pathlib import Path

import numpy as np
import pytest

from whichpath.cli import main
from whichpath.config import ConfigError, grid_from_dict, scenario_from_dict
from whichpath.sweep import COLUMNS, Axis, ConfigurationError, GridSpec, run_sweep, sweep_to_csv
from conftest import DOCS, GOLDEN


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_ok(capsys):
    code, out, _ = _run(["classify", str(DOCS / "em_sample.toml")], capsys)
    assert code == 0
    assert json.loads(out)["outcome"] == "AliceRecoheres_NoWhichPath"


@pytest.mark.parametrize("name", ["gr_charged", "em_not_far"])
def test_classify_invalid_exits_2(name, capsys):
    code, _, err = _run(["classify", str(GOLDEN / "invalid" / f"{name}.toml")], capsys)
    assert code == 2
    assert "failed validation" in err


def test_classify_malformed_and_missing_exit_1(capsys, tmp_path):
    assert _run(["classify", str(GOLDEN / "invalid" / "malformed.toml")], capsys)[0] == 1
    assert _run(["classify", str(tmp_path / "nope.toml")], capsys)[0] == 1
    (tmp_path / "x.toml").write_text('field = "em"\nbogus = 1\n')
    assert _run(["classify", str(tmp_path / "x.toml")], capsys)[0] == 1


def test_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_single_point_grid(tmp_path, capsys):
    cfg = tmp_path / "one.toml"
    cfg.write_text('field = "em"\nq_A = 2.0\nq_B = 1.0\nd = 0.01\nD = 1.0\nT_A = 0.5\nT_B = 0.5\n')
    out = tmp_path / "one.csv"
    assert _run(["sweep", str(cfg), "-o", str(out)], capsys)[0] == 0
    raw = out.read_bytes()
    assert raw.count(b"\r\n") == 2
    rows = list(csv.DictReader(io.StringIO(raw.decode())))
    assert len(rows) == 1
    assert rows[0]["outcome"] == "AliceRecoheres_NoWhichPath"
    assert float(rows[0]["recoherence_N"]) == pytest.approx(0.0016)


def test_sweep_columns_and_outcomes(tmp_path, capsys):
    known = {json.loads(p.read_text())["outcome"] for p in GOLDEN.glob("*/*.expected.json")}
    grid = GridSpec("gr", (Axis("Q_A", 1e-6, 1.0, 7), Axis("T_A", 1e-3, 2.0, 9)), {"d": 0.01, "D": 1.0, "T_B": 2.0})
    text = sweep_to_csv(grid)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == COLUMNS
    assert len(rows) == 63
    assert {r["outcome"] for r in rows} <= known
    assert [int(r["index"]) for r in rows] == list(range(63))


def test_mirror_sweep_has_extra_columns():
    grid = GridSpec("em", (Axis("R_M", 0.1, 2.0, 4),),
                    {"d": 0.01, "D": 1.0, "T_A": 0.5, "T_B": 0.9, "q_A": 1e4, "q_B": 1.0, "mirror_timing": "always"})
    text = sweep_to_csv(grid)
    header = text.splitlines()[0].split(",")
    assert header[-3:] == ["mirror_timing", "R_M[l_P]", "T_M[t_P]"]
    outs = [r["outcome"] for r in csv.DictReader(io.StringIO(text))]
    assert outs[0] == "AliceRecoheres_BobShielded"
    assert outs[-1] == "AliceDecoheres_BobCulprit"


def test_chunking_does_not_change_results():
    grid, _ = grid_from_dict({"field": "em", "d": 0.001, "D": 1.0, "T_B": 0.5, "q_B": 1.0,
                              "axes": {"D_A": {"min": 1e-4, "max": 1.0, "points": 13},
                                       "T_A": {"min": 1e-3, "max": 0.9, "points": 11}}})
    a = run_sweep(grid, chunk_size=7)
    b = run_sweep(grid, chunk_size=4096)
    for key in a:
        np.testing.assert_array_equal(a[key], b[key])


def test_bad_axes_rejected():
    with pytest.raises(ConfigurationError):
        Axis("T_A", 1.0, 0.5, 10)
    with pytest.raises(ConfigurationError):
        Axis("T_A", 0.0, 0.5, 10, "log")
    with pytest.raises(ConfigurationError):
        Axis("T_A", 0.1, 0.5, 1)
    with pytest.raises(ConfigurationError):
        Axis("colour", 0.1, 0.5, 3)
    with pytest.raises(ConfigurationError):
        GridSpec("em", (Axis("Q_A", 0.1, 0.5, 3),))


def test_sweep_cli_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text('field = "em"\nd = 0.01\nD = 1.0\nT_B = 0.5\n[axes.T_A]\nmin = 1.0\nmax = 0.1\npoints = 3\n')
    assert _run(["sweep", str(cfg), "-o", str(tmp_path / "o.csv")], capsys)[0] == 1
    cfg.write_text('field = "gr"\nq_A = 1.0\nd = 0.01\nD = 1.0\nT_B = 0.5\n[axes.T_A]\nmin = 0.1\nmax = 0.5\npoints = 3\n')
    assert _run(["sweep", str(cfg), "-o", str(tmp_path / "o.csv")], capsys)[0] == 2


def test_theorems_cli(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, text, _ = _run(["theorems", "--field", "gr", "--trials", "2000", "--csv", str(out)], capsys)
    assert code == 0
    report = json.loads(text)
    assert report["passed"]
    assert [t["multipole_order"] for t in report["theorems"]] == [2, 3, 4, 5, 6]
    assert len(out.read_text().strip().splitlines()) == 6
    assert _run(["theorems", "--trials", "0"], capsys)[0] == 1


def test_theorems_cli_drop(capsys):
    code, text, _ = _run(["theorems", "--field", "em", "--drop", "quantized-radiation"], capsys)
    assert code == 0
    assert json.loads(text)["counterfactuals"][0]["found"]


def test_signaling_cli(capsys):
    code, text, _ = _run(["signaling", "--field", "gr", "--margins", "1", "4"], capsys)
    assert code == 0
    assert len(text.strip().splitlines()) == 3


def test_config_units_and_errors():
    s = scenario_from_dict({"field": "gr", "m_A": "1@m_P", "d": "1@l_P", "D": "1000@l_P", "T_A": "1@t_P", "T_B": "1@t_P"})
    assert s.m_A == pytest.approx(1.0) and s.D == pytest.approx(1000.0)
    with pytest.raises(ConfigError):
        scenario_from_dict({"field": "em", "d": 0.01})
    with pytest.raises(ConfigError):
        scenario_from_dict({"d": 0.01})


@pytest.mark.skipif(shutil.which("whichpath") is None, reason="console script not installed")
def test_console_script(tmp_path):
    import subprocess
    r = subprocess.run(["whichpath", "classify", str(DOCS / "gr_sample.toml")], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["outcome"] == "AliceRecoheres_NoWhichPath"
