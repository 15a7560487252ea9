"""Command-line entry point.

    lppsim describe
    lppsim simulate {airy,local,airy-local,lattice-airy,lattice-local} [options]
    lppsim verify {comparison,equilibrium,exit-tail,symmetry,event,sinks} [options]
    lppsim oracle [options]

Flags override values read with ``--config``.  Exit status is 0 when every
gate passes, 1 when a gate fails and 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, load_config, make_config, parse_config_text
from .experiments import CATALOG
from .harness import run_experiment

SIMULATE = {
    "airy": "airy_path",
    "local": "local_fluct",
    "airy-local": "airy_local",
    "lattice-airy": "lattice_airy",
    "lattice-local": "lattice_local",
}
VERIFY = {
    "comparison": "verify_comparison",
    "equilibrium": "verify_equilibrium",
    "exit-tail": "verify_exit_tail",
    "symmetry": "verify_symmetry",
    "event": "verify_event",
    "sinks": "verify_sinks",
}

# flag name -> config key
_FLAGS = [
    ("--n", "n", "problem size; comma separated for a sweep"),
    ("--samples", "samples", None),
    ("--master-seed", "master_seed", None),
    ("--grid", "grid", "a,b,m"),
    ("--gate-u", "gate_u", "u values that get gates"),
    ("--u-break", "u_break", None),
    ("--gamma", "gamma", None),
    ("--gamma-prime", "gamma_prime", None),
    ("--s", "s", None),
    ("--lam", "lam", "intensities, comma separated"),
    ("--delta", "delta", None),
    ("--beta", "beta", None),
    ("--epsilon", "epsilon", None),
    ("--event-kind", "event_kind", "sec3, sec4 or sec5"),
    ("--r", "r", "exit tail levels"),
    ("--modulus-delta", "modulus_delta", None),
    ("--modulus-threshold", "modulus_threshold", None),
    ("--central-length", "central_length", None),
    ("--window-factor", "window_factor", None),
    ("--max-doublings", "max_doublings", None),
    ("--output-dir", "output_dir", None),
]


def _add_run_options(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value configuration file")
    for flag, dest, helptext in _FLAGS:
        p.add_argument(flag, dest=dest, default=None, help=helptext)
    p.add_argument("--two-sided", dest="two_sided", action="store_const", const="true", default=None)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: LPPSIM_THREADS or all cores)")
    p.add_argument("-q", "--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lppsim", description="Last-passage percolation Monte Carlo harness")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("describe", help="list experiments")
    sim = sub.add_parser("simulate", help="rescaled path experiments")
    sim.add_argument("name", choices=sorted(SIMULATE))
    _add_run_options(sim)
    ver = sub.add_parser("verify", help="lemma and property audits")
    ver.add_argument("name", choices=sorted(VERIFY))
    _add_run_options(ver)
    orc = sub.add_parser("oracle", help="exhaustive small-instance equivalence checks")
    _add_run_options(orc)
    return parser


def _describe(out):
    width = max(len(k) for k in CATALOG)
    for name, exp in CATALOG.items():
        print(f"{name:<{width}}  {'[' + exp.group + ']':<10}  {exp.description}", file=out)


def _print_summary(summary, out):
    print(f"experiment: {summary.config['experiment']}", file=out)
    s = summary.summaries
    if "violations" in s:
        print(f"violations: {s['violations']}", file=out)
    if "flagged_samples" in s:
        print(f"flagged samples: {s['flagged_samples']}", file=out)
    for g in summary.gates:
        stat = "nan" if g.statistic is None else f"{g.statistic:.6g}"
        print(f"  [{g.status.upper():>7}] {g.name}: {stat} ({g.threshold})", file=out)
    if summary.csv_path:
        print(f"csv: {summary.csv_path}", file=out)
        print(f"json: {summary.json_path}", file=out)
    print("all gates passed" if summary.passed else "gate failure", file=out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "describe":
        _describe(sys.stdout)
        return 0
    if args.command == "simulate":
        experiment = SIMULATE[args.name]
    elif args.command == "verify":
        experiment = VERIFY[args.name]
    else:
        experiment = "oracle_suite"
    try:
        mapping = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                mapping = parse_config_text(fh.read())
            if mapping.get("experiment", experiment) != experiment:
                raise ConfigError(f"experiment: config file names {mapping['experiment']!r}, "
                                  f"command asks for {experiment!r}")
        mapping["experiment"] = experiment
        for _, dest, _ in _FLAGS:
            v = getattr(args, dest)
            if v is not None:
                mapping[dest] = v
        if args.two_sided is not None:
            mapping["two_sided"] = args.two_sided
        cfg = make_config(mapping)
    except (ConfigError, OSError) as exc:
        print(f"lppsim: error: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        logging.basicConfig(level=logging.INFO, format="%(message)s")
    summary = run_experiment(cfg, threads=args.threads, progress=not args.quiet)
    _print_summary(summary, sys.stdout)
    return 0 if summary.passed else 1


__all__ = ["main", "build_parser", "load_config"]

if __name__ == "__main__":
    sys.exit(main())
