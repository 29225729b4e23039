import subprocess
import sys

import pytest

from swlab.cli import main


@pytest.fixture
def out_root(tmp_path, monkeypatch):
    monkeypatch.setenv("SWLAB_OUTPUT_ROOT", str(tmp_path))
    return tmp_path


def test_list_presets(capsys):
    assert main(["list-presets"]) == 0
    assert "dambreak-parabolic-naive" in capsys.readouterr().out


def test_run_preset(out_root, capsys):
    assert main(["run", "stationary-parabolic", "--end-time", "0.1"]) == 0
    assert (out_root / "stationary-parabolic" / "summary.json").exists()
    assert "10 layers" in capsys.readouterr().out


def test_run_ini_with_output(tmp_path, capsys):
    ini = tmp_path / "s.ini"
    ini.write_text("[scenario]\nname = tiny\nL = 10.0\nT = 0.05\n\n"
                   "[bottom]\nkind = flat\n\n[initial]\nkind = dam\neta_left = 2.0\neta_right = 1.0\n")
    out = tmp_path / "o"
    assert main(["run", str(ini), "-o", str(out), "--snapshot-every", "1"]) == 0
    assert len(list(out.glob("fields_*.csv"))) == 6


@pytest.mark.parametrize("argv", [
    ["run", "missing-preset"],
    ["run", "stationary-parabolic", "--end-time", "0.015"],
    ["verify", "--samples", "0"],
    ["frobnicate"],
    [],
])
def test_invalid_input(argv, out_root):
    assert main(argv) == 2


def test_solver_failure_exit_code(tmp_path):
    ini = tmp_path / "f.ini"
    ini.write_text("[scenario]\nname = f\nL = 10.0\nT = 0.05\neps = 1e-300\nmax_iter = 2\n\n"
                   "[bottom]\nkind = flat\n\n[initial]\nkind = dam\neta_left = 2.0\neta_right = 1.0\n")
    assert main(["run", str(ini), "-o", str(tmp_path / "o")]) == 3
    assert (tmp_path / "o" / "summary.json").exists()


def test_verify_exit_codes(capsys):
    assert main(["verify", "--samples", "100", "--seed", "1"]) == 0
    assert "all identity suites passed" in capsys.readouterr().out
    assert main(["verify", "--samples", "100", "--inject-b22", "0.49"]) == 4
    assert "FAIL" in capsys.readouterr().out


def test_compare(out_root, capsys):
    rc = main(["compare", "dambreak-parabolic", "dambreak-parabolic-naive", "--end-time", "0.1"])
    assert rc == 0
    assert (out_root / "compare_dambreak-parabolic_vs_dambreak-parabolic-naive" / "compare.csv").exists()
    assert main(["compare", "dambreak-parabolic", "stationary-parabolic"]) == 2


def test_module_entry_point(out_root):
    p = subprocess.run([sys.executable, "-m", "swlab", "list-presets"], capture_output=True, text=True)
    assert p.returncode == 0 and "lagrangian-dambreak" in p.stdout
