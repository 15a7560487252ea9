"""Run an experiment: parallel sampling, deterministic aggregation, output files.

Samples are distributed over a thread pool (the compiled kernels release the
GIL).  Results are collected by sample index, so every numeric output is the
same for any number of threads.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import platform
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import ExperimentConfig, resolve_threads
from .experiments import CATALOG, Gate

__all__ = ["RunSummary", "run_experiment", "csv_text", "CSV_COLUMNS"]

log = logging.getLogger("lppsim")

CSV_COLUMNS = ("experiment", "n", "sample_id", "u", "value", "kind")


def _version() -> str:
    try:
        from importlib.metadata import version

        return version("lppsim")
    except Exception:  # not installed
        return "unknown"


@dataclass
class RunSummary:
    config: dict
    gates: list
    summaries: dict
    seeds: dict
    meta: dict = field(default_factory=dict)
    rows: list = field(default_factory=list, repr=False)
    csv_path: str | None = None
    json_path: str | None = None

    @property
    def passed(self) -> bool:
        return bool(self.gates) and all(g.passed for g in self.gates)

    def gate(self, name: str) -> Gate:
        for g in self.gates:
            if g.name == name:
                return g
        raise KeyError(name)

    def payload(self) -> dict:
        """Everything except ``meta``: identical across reruns and thread counts."""
        return {"config": self.config, "gates": [g.as_dict() for g in self.gates],
                "summaries": _clean(self.summaries), "seeds": self.seeds}

    def to_json(self) -> str:
        doc = self.payload()
        doc["meta"] = self.meta
        return json.dumps(doc, indent=2, sort_keys=True)


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for exp, n, sid, u, value, kind in rows:
        w.writerow([exp, n, sid, _fmt(u), _fmt(value), kind])
    return buf.getvalue()


def run_experiment(cfg: ExperimentConfig, threads: int | None = None, write: bool = True,
                   progress: bool = False) -> RunSummary:
    """Execute ``cfg`` and (with ``write``) save ``<experiment>.csv`` and
    ``<experiment>.json`` under ``cfg.output_dir``.

    ``threads`` overrides the configured worker count.
    """
    exp = CATALOG[cfg.experiment]
    nthreads = resolve_threads(cfg.threads, threads)
    start = time.perf_counter()
    tasks = [(n, i) for n in cfg.n for i in range(cfg.samples)]
    done = [0]

    def work(task):
        n, i = task
        r = exp.sample(cfg, n, i)
        done[0] += 1
        if progress and done[0] % max(1, len(tasks) // 20) == 0:
            log.info("%s: %d/%d samples", cfg.experiment, done[0], len(tasks))
        return r

    if nthreads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            results = list(pool.map(work, tasks))
    else:
        results = [work(t) for t in tasks]

    by_n = {n: [] for n in cfg.n}
    rows = []
    for (n, i), r in zip(tasks, results):
        by_n[n].append(r)
        rows += [(cfg.experiment, n, i, u, v, k) for u, v, k in r.rows]

    if cfg.samples == 0:
        gates = [Gate("data", False, math.nan, "samples > 0", status="no data")]
        summaries = {"status": "no data"}
    else:
        gates, summaries = exp.evaluate(cfg, by_n)
        flagged = sum(r.flagged for r in results)
        summaries["flagged_samples"] = int(flagged)

    seeds = {
        "master_seed": cfg.master_seed,
        "stream_indices": [0, cfg.samples - 1] if cfg.samples else [],
        "experiment_code": exp.code,
        "derivation": "SeedSequence(entropy=master_seed, spawn_key=(sample_id, substream, lane, block)) -> Philox",
        "lanes": "(code * 1e6 + n) * 16 + k",
    }
    meta = {
        "wall_clock_seconds": time.perf_counter() - start,
        "threads": nthreads,
        "version": _version(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    summary = RunSummary(cfg.echo(), gates, summaries, seeds, meta, rows)
    if write:
        os.makedirs(cfg.output_dir, exist_ok=True)
        summary.csv_path = os.path.join(cfg.output_dir, f"{cfg.experiment}.csv")
        summary.json_path = os.path.join(cfg.output_dir, f"{cfg.experiment}.json")
        with open(summary.csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text(rows))
        with open(summary.json_path, "w", encoding="utf-8") as fh:
            fh.write(summary.to_json())
    return summary
