"""Command line interface: subcommands, config files, CSV emission."""

import csv
import io

import pytest

from srkflow.cli import main, read_config


def test_tableau_subcommand_stdout(capsys):
    assert main(["tableau"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("scheme,form,stages,kind,order")
    assert "ARS(3,4,3)" in out


def test_stability_subcommand_subset(capsys):
    assert main(["stability", "--scheme", "ars121"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 2
    assert float(rows[1][2]) == pytest.approx(2.0, abs=2e-3)


def test_cfl_subcommand_csv(tmp_path, capsys):
    assert main(["cfl", "--scheme", "ars232", "--out", str(tmp_path)]) == 0
    with open(tmp_path / "cfl.csv", newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["scheme", "kind", "cfl_max", "pressure_solves",
                       "cfl_per_solve"]
    assert float(rows[1][2]) == pytest.approx(1.73, abs=1e-2)


def test_run_subcommand(tmp_path, capsys):
    assert main(["run", "--case", "manufactured", "--scheme", "ars232",
                 "--dt", "0.05", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "e_u=" in out
    hist = (tmp_path / "history.csv").read_text().splitlines()
    assert hist[0] == "t,K,R0_norm,Xi_norm"
    assert len(hist) == 4  # header + initial + 2 steps


def test_converge_subcommand(capsys):
    assert main(["converge", "--case", "manufactured", "--scheme", "ars232",
                 "--dt", "0.1", "--levels", "3"]) == 0
    out = capsys.readouterr().out
    assert "e_u slope:" in out
    slope = float([ln for ln in out.splitlines()
                   if ln.startswith("e_u slope")][0].split(":")[1])
    assert slope > 1.5


def test_config_file_with_cli_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("case = manufactured\nscheme = ars232\n"
                   "dt = 0.05  # comment\nrsigma = 0\n")
    assert main(["run", "--config", str(cfg), "--dt", "0.025"]) == 0
    out = capsys.readouterr().out
    assert "tau=0.025" in out      # flag overrides file
    assert "r_sigma=0" in out      # file supplies the rest


def test_read_config_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("just words\n")
    with pytest.raises(ValueError, match="key = value"):
        read_config(str(bad))


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("banana = 3\n")
    with pytest.raises(ValueError, match="unknown config key"):
        main(["run", "--config", str(cfg)])


def test_missing_required_option():
    with pytest.raises(SystemExit):
        main(["run", "--scheme", "ars232"])
