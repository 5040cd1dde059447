import json

import pytest

from oldroyd_fv.io import read_diagnostics
from oldroyd_fv.main import EXIT_PASS, EXIT_USAGE, main
from oldroyd_fv.scenarios import PRESETS

SHORT_RUN = """\
scenario = uniform_damping
[scenario]
n_steps = 10
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(SHORT_RUN, encoding="utf-8")
    return str(path)


def test_list_prints_every_preset(capsys):
    assert main(["list"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert sum(f"• {name}" in out for name in PRESETS) == 6


def test_usage_errors(capsys, tmp_path):
    assert main([]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["run", str(tmp_path / "missing.ini")]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "cannot read config" in err and "usage:" in err


def test_help_is_not_an_error(capsys):
    assert main(["--help"]) == EXIT_PASS
    assert "verify" in capsys.readouterr().out


def test_verify_unknown_preset(capsys):
    assert main(["verify", "lid_driven_cavity"]) == EXIT_USAGE
    assert "unknown scenario" in capsys.readouterr().err


def test_verify_uniform_damping(capsys, tmp_path):
    out_dir = tmp_path / "verify"
    assert main(["verify", "uniform_damping", "--out", str(out_dir)]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "energy_residual" in out and "PASS" in out
    verdict = json.loads((out_dir / "verdict.json").read_text(encoding="utf-8"))
    assert verdict["passed"] is True


def test_run_writes_outputs(config_file, tmp_path):
    out_dir = tmp_path / "run"
    code = main(["run", config_file, "--out", str(out_dir), "--snapshot-every", "5"])
    assert code == EXIT_PASS
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == ["diagnostics.csv", "snapshot_000000.txt", "snapshot_000005.txt",
                     "snapshot_000010.txt", "snapshot_final.txt", "verdict.json"]
    assert len(read_diagnostics(out_dir / "diagnostics.csv")) == 11


def test_until_replaces_step_count(config_file, tmp_path):
    out_dir = tmp_path / "until"
    assert main(["run", config_file, "--out", str(out_dir), "--until", "0.005"]) == EXIT_PASS
    rows = read_diagnostics(out_dir / "diagnostics.csv")
    assert len(rows) == 6
    assert rows[-1]["time"] == pytest.approx(0.005)


def test_output_dir_from_environment(config_file, tmp_path, monkeypatch):
    target = tmp_path / "from_env"
    monkeypatch.setenv("OLDROYD_OUT_DIR", str(target))
    assert main(["run", config_file]) == EXIT_PASS
    assert (target / "verdict.json").exists()


def test_invalid_config_is_usage_error(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text("scenario = uniform_damping\n[model]\ngamma = 2.5\n", encoding="utf-8")
    assert main(["run", str(path)]) == EXIT_USAGE
    assert "gamma" in capsys.readouterr().err
