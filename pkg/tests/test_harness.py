import csv
import io
import json

import pytest

from lppsim.config import ConfigError, load_config, make_config
from lppsim.harness import CSV_COLUMNS, csv_text, run_experiment


def write(tmp_path, text, name="exp.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_minimal_config_defaults(tmp_path):
    cfg = load_config(write(tmp_path, "experiment = airy_path\nn = 500\nsamples = 100\nmaster_seed = 7\n"))
    assert cfg.grid == (-1.0, 1.0, 9)
    assert cfg.threads == 0  # all cores
    assert cfg.window_factor == 10.0 and cfg.max_doublings == 6
    echo = cfg.echo()
    assert echo["n"] == [500] and echo["master_seed"] == 7


def test_local_fluct_default_grids():
    assert make_config({"experiment": "local_fluct"}).grid == (0.0, 1.0, 11)
    assert make_config({"experiment": "local_fluct", "two_sided": "true"}).grid == (-1.0, 1.0, 21)
    assert make_config({"experiment": "airy_local"}).epsilon == (0.05, 0.1, 0.2)


@pytest.mark.parametrize("mapping, key", [
    ({"experiment": "local_fluct", "gamma": "0.7"}, "gamma"),
    ({"experiment": "verify_event", "event_kind": "sec3", "beta": "0.2"}, "beta"),
    ({"experiment": "verify_event", "event_kind": "sec4", "gamma_prime": "0.3"}, "gamma_prime"),
    ({"experiment": "verify_event", "event_kind": "sec5", "beta": "0.5"}, "beta"),
    ({"experiment": "verify_event", "delta": "1.5"}, "delta"),
    ({"experiment": "airy_path", "grid": "-1, 1, 1"}, "grid"),
    ({"experiment": "airy_path", "colour": "red"}, "colour"),
    ({"experiment": "airy_path", "samples": "ten"}, "samples"),
    ({"experiment": "nope"}, "experiment"),
    ({"experiment": "verify_comparison", "lam": "0.8, -1"}, "lam"),
])
def test_config_rejections_name_the_key(mapping, key):
    with pytest.raises(ConfigError, match=key):
        make_config(mapping)


def test_config_comments_and_lists(tmp_path):
    cfg = load_config(write(tmp_path, "# audit\nexperiment = verify_comparison\nlam = 0.8, 1.25  # both\n"))
    assert cfg.lam == (0.8, 1.25)


def test_zero_samples_no_data(tmp_path):
    cfg = make_config({"experiment": "verify_exit_tail", "samples": 0, "output_dir": str(tmp_path)})
    s = run_experiment(cfg)
    assert not s.passed
    assert [g.status for g in s.gates] == ["no data"]
    assert open(s.csv_path).read().strip() == ",".join(CSV_COLUMNS)


def test_rerun_byte_identical(tmp_path):
    base = {"experiment": "verify_comparison", "n": 40, "samples": 12, "master_seed": 3}
    a = run_experiment(make_config({**base, "output_dir": str(tmp_path / "a")}))
    b = run_experiment(make_config({**base, "output_dir": str(tmp_path / "b")}))
    assert open(a.csv_path, "rb").read() == open(b.csv_path, "rb").read()
    ja, jb = json.load(open(a.json_path)), json.load(open(b.json_path))
    for doc in (ja, jb):
        doc.pop("meta")
        doc["config"].pop("output_dir")
    assert ja == jb


@pytest.mark.parametrize("experiment, extra", [
    ("airy_path", {"n": 60}),
    ("verify_symmetry", {"n": 30}),
    ("verify_event", {"n": 60, "delta": "0.5, 0.25"}),
    ("verify_equilibrium", {"n": 10, "central_length": 20}),
    ("lattice_local", {"n": 50}),
    ("oracle_suite", {}),
])
def test_thread_count_invariance(experiment, extra):
    cfg = make_config({"experiment": experiment, "samples": 16, "master_seed": 11, **extra})
    one = run_experiment(cfg, threads=1, write=False)
    many = run_experiment(cfg, threads=8, write=False)
    assert csv_text(one.rows) == csv_text(many.rows)
    assert one.payload() == many.payload()
    assert many.meta["threads"] == 8


def test_env_thread_override(monkeypatch):
    monkeypatch.setenv("LPPSIM_THREADS", "3")
    cfg = make_config({"experiment": "oracle_suite", "samples": 2, "threads": 5})
    assert run_experiment(cfg, write=False).meta["threads"] == 3
    # an explicit argument still wins
    assert run_experiment(cfg, threads=2, write=False).meta["threads"] == 2
    monkeypatch.delenv("LPPSIM_THREADS")
    assert run_experiment(cfg, write=False).meta["threads"] == 5


def test_csv_schema_and_precision(tmp_path):
    cfg = make_config({"experiment": "local_fluct", "n": 80, "samples": 3, "output_dir": str(tmp_path)})
    s = run_experiment(cfg)
    rows = list(csv.DictReader(open(s.csv_path)))
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert {r["kind"] for r in rows} == {"delta"}
    assert len(rows) == 3 * 11
    # lossless round trip
    for (_, _, _, u, v, _), r in zip(s.rows, rows):
        assert float(r["u"]) == u and float(r["value"]) == v
    doc = json.load(open(s.json_path))
    assert set(doc) == {"config", "gates", "summaries", "seeds", "meta"}
    assert set(doc["gates"][0]) >= {"name", "passed", "statistic", "threshold"}
    assert doc["config"]["experiment"] == "local_fluct"


def test_flagged_samples_fail_the_run():
    # no room to grow a far too small window: almost every sample is flagged
    cfg = make_config({"experiment": "verify_exit_tail", "n": 50, "samples": 10,
                       "window_factor": 1e-3, "max_doublings": 0})
    s = run_experiment(cfg, write=False)
    g = s.gate("flagged_fraction")
    assert not g.passed and s.summaries["flagged_samples"] > 0


def test_csv_text_format():
    text = csv_text([("e", 5, 0, 0.1, 1 / 3, "k")])
    row = next(csv.reader(io.StringIO(text.splitlines()[1])))
    assert row == ["e", "5", "0", "0.10000000000000001", "0.33333333333333331", "k"]
