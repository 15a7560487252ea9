"""Experiment configuration: a flat ``key = value`` text format.

Blank lines and lines starting with ``#`` are ignored.  Lists are comma
separated (``lam = 0.8, 1.25``); the grid is ``grid = a, b, m`` with ``m``
points.  Every field not given takes the experiment's default, and the
materialized config is echoed into each run summary.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, fields
from typing import Optional

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "EXPERIMENTS",
    "PATH_EXPERIMENTS",
    "load_config",
    "make_config",
    "parse_config_text",
    "resolve_threads",
]

EXPERIMENTS = (
    "airy_path",
    "local_fluct",
    "airy_local",
    "lattice_airy",
    "lattice_local",
    "verify_comparison",
    "verify_equilibrium",
    "verify_exit_tail",
    "verify_symmetry",
    "verify_event",
    "verify_sinks",
    "oracle_suite",
)

PATH_EXPERIMENTS = ("airy_path", "local_fluct", "lattice_airy", "lattice_local", "verify_comparison")

THREADS_ENV = "LPPSIM_THREADS"


class ConfigError(ValueError):
    """Bad key or value; the message names the key."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n: tuple = ()
    samples: int = 100
    master_seed: int = 0
    grid: Optional[tuple] = None
    gate_u: Optional[tuple] = None
    u_break: Optional[float] = None
    gamma: float = 0.4
    gamma_prime: float = 0.5
    s: float = 1.0
    lam: Optional[tuple] = None
    delta: tuple = (0.5,)
    beta: Optional[float] = None
    epsilon: Optional[tuple] = None
    event_kind: str = "sec3"
    r: tuple = (1.0, 1.5, 2.0)
    modulus_delta: tuple = (0.05, 0.1)
    modulus_threshold: float = 0.5
    central_length: float = 100.0
    two_sided: bool = False
    window_factor: float = 10.0
    max_doublings: int = 6
    threads: int = 0
    output_dir: str = "results"

    def echo(self) -> dict:
        d = dataclasses.asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    def grid_points(self):
        import numpy as np

        a, b, m = self.grid
        return np.linspace(a, b, int(m))


# per-experiment defaults, applied before validation
_DEFAULTS = {
    "airy_path": dict(n=(500,), grid=(-1.0, 1.0, 9)),
    "local_fluct": dict(n=(1000,), grid=(0.0, 1.0, 11)),
    "airy_local": dict(n=(1000,), epsilon=(0.05, 0.1, 0.2)),
    "lattice_airy": dict(n=(500,), grid=(-1.0, 1.0, 9)),
    "lattice_local": dict(n=(1000,), grid=(0.0, 1.0, 11)),
    "verify_comparison": dict(n=(100,), lam=(0.8, 1.25), grid=(-1.0, 1.0, 5)),
    "verify_equilibrium": dict(n=(50,), lam=(0.5, 1.0, 2.0)),
    "verify_exit_tail": dict(n=(500,), lam=(1.0,)),
    "verify_symmetry": dict(n=(200,), lam=(1.25,)),
    "verify_event": dict(n=(500,)),
    "verify_sinks": dict(n=(50,), lam=(0.5, 1.0, 2.0)),
    "oracle_suite": dict(n=(12,)),
}

_BETA_DEFAULT = {"sec3": 0.5, "sec4": 0.5, "sec5": 0.25}

_TUPLE_FLOAT = {"lam", "delta", "epsilon", "r", "modulus_delta", "gate_u"}


def _to_bool(key, v):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {v!r}")


def _split(v):
    if isinstance(v, (list, tuple)):
        return list(v)
    return [p.strip() for p in str(v).split(",") if p.strip()]


def _convert(key: str, value):
    try:
        if key in ("experiment", "event_kind", "output_dir"):
            return str(value).strip()
        if key == "n":
            return tuple(int(float(p)) for p in _split(value))
        if key in ("samples", "master_seed", "max_doublings", "threads"):
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        if key == "grid":
            parts = _split(value)
            if len(parts) != 3:
                raise ValueError
            a, b, m = float(parts[0]), float(parts[1]), float(parts[2])
            if m != int(m):
                raise ValueError
            return (a, b, int(m))
        if key in _TUPLE_FLOAT:
            return tuple(float(p) for p in _split(value))
        if key == "two_sided":
            return _to_bool(key, value)
        return float(value)
    except ConfigError:
        raise
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot parse {value!r}") from None


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def make_config(mapping: dict) -> ExperimentConfig:
    """Validate a raw mapping and fill every default."""
    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    for key, value in mapping.items():
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"unknown key {key!r}")
        if value is None:
            continue
        values[key] = _convert(key, value)
    exp = values.get("experiment")
    if exp is None:
        raise ConfigError("experiment: required")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"experiment: unknown experiment {exp!r}")
    for key, default in _DEFAULTS[exp].items():
        values.setdefault(key, default)
    if exp == "local_fluct" and values.get("two_sided") and "grid" not in mapping:
        values["grid"] = (-1.0, 1.0, 21)
    if exp == "lattice_local" and values.get("two_sided") and "grid" not in mapping:
        values["grid"] = (-1.0, 1.0, 21)
    if exp == "verify_event" and values.get("beta") is None:
        values["beta"] = _BETA_DEFAULT.get(values.get("event_kind", "sec3"), 0.5)
    if exp == "verify_event" and values.get("epsilon") is None:
        values["epsilon"] = (0.1,)
    cfg = ExperimentConfig(**values)
    _validate(cfg)
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return make_config(parse_config_text(fh.read()))


def _open01(key, v):
    if not 0 < v < 1:
        raise ConfigError(f"{key}: {v} must lie in (0, 1)")


def _validate(c: ExperimentConfig):
    exp = c.experiment
    if not c.n or any(v < 1 for v in c.n):
        raise ConfigError("n: every value must be a positive integer")
    if c.samples < 0:
        raise ConfigError("samples: must be non-negative")
    if not 0 <= c.master_seed < 2**64:
        raise ConfigError("master_seed: must be a 64-bit unsigned integer")
    if c.threads < 0:
        raise ConfigError("threads: must be non-negative (0 means all cores)")
    if c.max_doublings < 0:
        raise ConfigError("max_doublings: must be non-negative")
    if not c.window_factor > 0:
        raise ConfigError("window_factor: must be positive")
    if c.lam is not None and any(v <= 0 for v in c.lam):
        raise ConfigError("lam: intensities must be positive")
    if not c.s > 0:
        raise ConfigError("s: must be positive")
    if exp in PATH_EXPERIMENTS:
        a, b, m = c.grid
        if m < 2:
            raise ConfigError("grid: path experiments need at least 2 points")
        if not a < b:
            raise ConfigError("grid: need a < b")
    if exp in ("airy_path", "verify_comparison"):
        a = c.grid[0]
        for n in c.n:
            if n + 2 * a * n ** (2 / 3) <= 0:
                raise ConfigError(f"grid: target n + 2u n^(2/3) not positive at n={n}, u={a}")
    if exp == "lattice_airy":
        a = c.grid[0]
        for n in c.n:
            if n + round(2 ** (5 / 3) * a * n ** (2 / 3)) <= 0:
                raise ConfigError(f"grid: snapped target column not positive at n={n}, u={a}")
    if exp in ("local_fluct", "lattice_local"):
        if not 0 < c.gamma < 2 / 3:
            raise ConfigError(f"gamma: {c.gamma} must lie in (0, 2/3)")
        a = c.grid[0]
        for n in c.n:
            if c.s * n + a * n ** c.gamma <= 0:
                raise ConfigError(f"grid: target s n + u n^gamma not positive at n={n}, u={a}")
        if 0.0 not in set(c.grid_points().tolist()):
            raise ConfigError("grid: must contain u = 0")
    if exp in ("local_fluct", "lattice_local"):
        pts = set(c.grid_points().tolist())
        for u in c.gate_u or ():
            if not any(abs(u - p) <= 1e-9 for p in pts):
                raise ConfigError(f"gate_u: {u} is not a grid point")
        if c.u_break is not None and not any(abs(c.u_break - p) <= 1e-9 for p in pts):
            raise ConfigError(f"u_break: {c.u_break} is not a grid point")
    if exp == "airy_local":
        for e in c.epsilon:
            _open01("epsilon", e)
    if exp == "verify_exit_tail":
        if len(c.r) < 3 or any(v <= 0 for v in c.r) or list(c.r) != sorted(c.r):
            raise ConfigError("r: need at least 3 increasing positive values")
    if exp == "airy_path":
        if any(v <= 0 for v in c.modulus_delta):
            raise ConfigError("modulus_delta: must be positive")
    if exp == "verify_equilibrium" and not c.central_length > 0:
        raise ConfigError("central_length: must be positive")
    if exp == "verify_event":
        kind = c.event_kind
        if kind not in ("sec3", "sec4", "sec5"):
            raise ConfigError(f"event_kind: {kind!r} is not one of sec3, sec4, sec5")
        if kind == "sec3":
            if not 1 / 3 < c.beta < 1:
                raise ConfigError(f"beta: {c.beta} must lie in (1/3, 1) for sec3")
            for d in c.delta:
                _open01("delta", d)
        elif kind == "sec4":
            if not 0 < c.gamma < 2 / 3:
                raise ConfigError(f"gamma: {c.gamma} must lie in (0, 2/3)")
            if not c.gamma < c.gamma_prime < 2 / 3:
                raise ConfigError(f"gamma_prime: {c.gamma_prime} must lie in (gamma, 2/3)")
        else:
            if not 0 < c.beta < 1 / 2:
                raise ConfigError(f"beta: {c.beta} must lie in (0, 1/2) for sec5")
            for e in c.epsilon:
                _open01("epsilon", e)
        from .equilibrium import lambda_pm
        from .rng import ParameterError

        for p in event_params(c):
            try:
                lambda_pm(p)
            except ParameterError as exc:
                raise ConfigError(f"n: {exc}") from None


def event_params(c: ExperimentConfig):
    """One ScalingParams per (n, swept parameter) combination."""
    from .equilibrium import ScalingParams

    out = []
    for n in c.n:
        if c.event_kind == "sec3":
            out += [ScalingParams("sec3", n, beta=c.beta, delta=d) for d in c.delta]
        elif c.event_kind == "sec4":
            out.append(ScalingParams("sec4", n, gamma=c.gamma, gamma_prime=c.gamma_prime))
        else:
            out += [ScalingParams("sec5", n, beta=c.beta, epsilon=e) for e in c.epsilon]
    return out


def resolve_threads(cfg_threads: int, override: int | None = None) -> int:
    """Worker count: ``override`` (a command-line flag) wins, then
    ``LPPSIM_THREADS``, then the config value, then all cores."""
    if override:
        return int(override)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            v = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV}: cannot parse {env!r}") from None
        if v > 0:
            return v
    if cfg_threads > 0:
        return cfg_threads
    return os.cpu_count() or 1
