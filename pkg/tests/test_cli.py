import csv
import subprocess
import sys

from lppsim.cli import main
from lppsim.config import EXPERIMENTS


def test_describe(capsys):
    assert main(["describe"]) == 0
    out = capsys.readouterr().out
    for name in EXPERIMENTS:
        assert name in out


def test_verify_comparison(tmp_path, capsys):
    code = main(["verify", "comparison", "--n", "100", "--samples", "1000", "--master-seed", "1",
                 "--output-dir", str(tmp_path), "-q"])
    out = capsys.readouterr().out
    assert code == 0
    assert "violations: 0" in out


def test_simulate_local_csv(tmp_path):
    code = main(["simulate", "local", "--n", "1000", "--gamma", "0.4", "--s", "1", "--samples", "20",
                 "--output-dir", str(tmp_path), "-q"])
    assert code in (0, 1)  # 20 samples is too few for the gates to mean much
    with open(tmp_path / "local_fluct.csv") as fh:
        reader = csv.DictReader(fh)
        assert {"sample_id", "u", "value"} <= set(reader.fieldnames)
        rows = list(reader)
    assert len(rows) == 20 * 11
    assert {r["n"] for r in rows} == {"1000"}


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("experiment = oracle_suite\nsamples = 1\nmaster_seed = 4\n")
    assert main(["oracle", "--config", str(cfg), "--samples", "5", "--output-dir", str(tmp_path), "-q"]) == 0
    rows = list(csv.DictReader(open(tmp_path / "oracle_suite.csv")))
    assert {r["sample_id"] for r in rows} == {str(i) for i in range(5)}


def test_gate_failure_exit_1(tmp_path):
    assert main(["verify", "exit-tail", "--samples", "0", "--output-dir", str(tmp_path), "-q"]) == 1


def test_bad_value_exit_2(tmp_path, capsys):
    assert main(["simulate", "local", "--gamma", "0.7", "--output-dir", str(tmp_path), "-q"]) == 2
    assert "gamma" in capsys.readouterr().err


def test_mismatched_config_exit_2(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("experiment = airy_path\n")
    assert main(["oracle", "--config", str(cfg), "-q"]) == 2


def test_unknown_flag_exit_2():
    r = subprocess.run([sys.executable, "-m", "lppsim", "verify", "comparison", "--bogus", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 2
    assert "usage" in r.stderr
