import json
import math
import subprocess
import sys

import numpy as np
import pytest

from parabolic_weingarten import cli, emit


def test_trace_csv_endpoints(capsys):
    assert cli.run(["trace", "--K", "1", "--format", "csv"]) == 0
    data = emit.read_csv(capsys.readouterr().out)
    assert data[0, 0] == pytest.approx(-0.881374, abs=1e-6)
    assert data[-1, 0] == pytest.approx(0.881374, abs=1e-6)


def test_trace_json_file(tmp_path):
    out = tmp_path / "c.json"
    assert cli.run(["trace", "--m", "2", "--n", "0", "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["right_end"]["kind"] == "MaxArcLength"


def test_classify_concave(capsys):
    assert cli.run(["classify", "--m", "-2", "--n", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["report"]["quantitative"]["contact_angle"] == pytest.approx(1.230959, abs=1e-6)
    assert doc["verification"]["passed"] is True


def test_abc_equals_mn(capsys):
    cli.run(["trace", "--m", "-2", "--n", "1", "--theta0", "0"])
    a = capsys.readouterr().out
    cli.run(["trace", "--a", "2", "--b", "4", "--c", "2"])
    b = capsys.readouterr().out
    assert a == b


@pytest.mark.parametrize("argv", [
    ["trace"],
    ["trace", "--K", "1", "--m", "2"],
    ["trace", "--m", "2"],
    ["trace", "--K", "abc"],
    ["trace", "--K", "nan"],
    ["trace", "--K", "1", "--format", "xml"],
    ["classify", "--a", "1", "--b", "-1", "--c", "0"],     # umbilic
    ["trace", "--m", "-1", "--n", "3"],                     # constant mean curvature
    ["trace", "--a", "0", "--b", "0", "--c", "1"],          # degenerate
    ["trace", "--a", "0", "--b", "1", "--c", "0.5"],        # constant k2
    ["mesh", "--K", "1", "--t-width", "-1", "--cols", "3", "--out", "x.obj"],
    ["nonsense"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert cli.run(argv) == 2
    assert "error" in capsys.readouterr().err


def test_scientific_notation(capsys):
    assert cli.run(["classify", "--K", "-2.5e-1"]) == 0
    assert json.loads(capsys.readouterr().out)["report"]["regime"] == "KNegShallow"


def test_constant_principal_classify(capsys):
    assert cli.run(["classify", "--a", "0", "--b", "1", "--c", "0.5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["report"]["regime"] == "ConstantPC" and doc["verification"] is None


def test_config_file(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "opts.txt"
    cfg.write_text("# shorter run\ns_max = 2.5\nmax_step = 1e-3\n")
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    assert cli.run(["trace", "--K", "0"]) == 0
    data = emit.read_csv(capsys.readouterr().out)
    assert data[-1, 0] == pytest.approx(2.5)
    assert np.max(np.diff(data[:, 0])) <= 1e-3 + 1e-12


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "opts.txt"
    cfg.write_text("s_max = 2\nspeed = 3\n")
    assert cli.run(["trace", "--K", "0", "--config", str(cfg)]) == 2
    assert "unknown key" in capsys.readouterr().err


def test_config_parser():
    assert cli.parse_config("z_floor = 1e-7\nmethod = rk4\nstop_at_symmetry = none\n") == \
        {"z_floor": 1e-7, "method": "rk4", "stop_at_symmetry": None}
    with pytest.raises(cli.UsageError):
        cli.parse_config("s_max 3")


def test_figures(tmp_path, capsys):
    assert cli.run(["figures", "--out-dir", str(tmp_path)]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == [f"fig{i}.svg" for i in range(1, 7)]
    assert "pi/2" in (tmp_path / "fig6.svg").read_text()


def test_mesh(tmp_path, capsys):
    out = tmp_path / "m.obj"
    assert cli.run(["mesh", "--K", "1", "--t-width", "0.5", "--cols", "3", "--rows", "20",
                    "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert sum(l.startswith("v ") for l in lines) == 60
    assert sum(l.startswith("f ") for l in lines) == 38


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "parabolic_weingarten", "classify", "--K", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["verification"]["passed"] is True
