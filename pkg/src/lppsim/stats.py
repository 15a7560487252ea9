"""Estimators and tests used by the verification experiments.

KS p-values use the asymptotic Kolmogorov distribution (every experiment has
at least a few hundred observations).  Acceptance gates use alpha = 0.001.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "ALPHA",
    "SampleSummary",
    "TestResult",
    "summarize",
    "ecdf",
    "ks_one_sample",
    "ks_two_sample",
    "normal_cdf",
    "exp_cdf",
    "tail_exponent_fit",
    "increment_independence",
    "two_proportion",
]

ALPHA = 1e-3


@dataclass(frozen=True)
class SampleSummary:
    count: int
    mean: float
    variance: float
    std_error_of_mean: float
    min: float
    max: float


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # not a pytest class

    statistic: float
    p_value: float
    sample_sizes: tuple
    test_name: str

    def passed(self, alpha: float = ALPHA) -> bool:
        return self.p_value >= alpha


def summarize(sample) -> SampleSummary:
    a = np.asarray(sample, dtype=np.float64)
    if a.size == 0:
        raise ValueError("empty sample")
    var = float(a.var(ddof=1)) if a.size > 1 else 0.0
    return SampleSummary(int(a.size), float(a.mean()), var, math.sqrt(var / a.size),
                         float(a.min()), float(a.max()))


def ecdf(sample):
    """Right-continuous empirical distribution function of ``sample``."""
    a = np.sort(np.asarray(sample, dtype=np.float64))
    if a.size == 0:
        raise ValueError("empty sample")

    def F(x):
        r = np.searchsorted(a, x, side="right") / a.size
        return float(r) if np.ndim(x) == 0 else r

    return F


def _kolmogorov_sf(y: float) -> float:
    # P(sup |B_bridge| > y); scipy evaluates the alternating series
    return float(min(1.0, max(0.0, special.kolmogorov(y))))


def ks_one_sample(sample, cdf) -> TestResult:
    a = np.sort(np.asarray(sample, dtype=np.float64))
    n = a.size
    if n == 0:
        raise ValueError("empty sample")
    F = np.clip(np.asarray(cdf(a), dtype=np.float64), 0.0, 1.0)
    i = np.arange(1, n + 1)
    d = float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))
    return TestResult(d, _kolmogorov_sf(math.sqrt(n) * d), (n,), "ks_one_sample")


def ks_two_sample(a, b) -> TestResult:
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    z = np.concatenate([a, b])
    fa = np.searchsorted(a, z, side="right") / a.size
    fb = np.searchsorted(b, z, side="right") / b.size
    d = float(np.max(np.abs(fa - fb)))
    en = math.sqrt(a.size * b.size / (a.size + b.size))
    return TestResult(d, _kolmogorov_sf(en * d), (a.size, b.size), "ks_two_sample")


def normal_cdf(x, mean: float = 0.0, sd: float = 1.0):
    """Gaussian distribution function through ``erfc`` (double precision)."""
    if not sd > 0:
        raise ValueError("sd must be positive")
    z = (np.asarray(x, dtype=np.float64) - mean) / (sd * math.sqrt(2.0))
    r = 0.5 * special.erfc(-z)
    return float(r) if np.ndim(x) == 0 else r


def exp_cdf(rate: float):
    def F(x):
        return -np.expm1(-rate * np.maximum(np.asarray(x, dtype=np.float64), 0.0))
    return F


def tail_exponent_fit(r_values, probabilities) -> tuple[float, float]:
    """Least-squares line through ``(log r, log p)``; returns (slope, intercept)."""
    r = np.asarray(r_values, dtype=np.float64)
    p = np.asarray(probabilities, dtype=np.float64)
    keep = p > 0
    if not keep.all():
        warnings.warn(f"dropping {int((~keep).sum())} zero-probability points", RuntimeWarning)
    r, p = r[keep], p[keep]
    if r.size < 3:
        raise ValueError("need at least 3 positive probabilities")
    slope, intercept = np.polyfit(np.log(r), np.log(p), 1)
    return float(slope), float(intercept)


def increment_independence(paths, u_break: float, u_max: float | None = None) -> TestResult:
    """Correlation of the increments on [0, u_break] and [u_break, u_max].

    The p-value uses the Fisher transform ``atanh(r) sqrt(n - 3)`` against a
    standard normal.
    """
    paths = list(paths)
    if len(paths) < 4:
        raise ValueError("need at least 4 paths")
    grid = paths[0].u_grid
    if u_max is None:
        u_max = float(grid[-1])
    first = np.array([p.at(u_break) - p.at(0.0) for p in paths])
    second = np.array([p.at(u_max) - p.at(u_break) for p in paths])
    if first.std() == 0 or second.std() == 0:
        raise ValueError("degenerate increment variance")
    r = float(np.corrcoef(first, second)[0, 1])
    n = len(paths)
    if abs(r) >= 1.0:
        return TestResult(r, 0.0, (n,), "increment_independence")
    z = math.atanh(r) * math.sqrt(n - 3)
    p = 2.0 * (1.0 - normal_cdf(abs(z)))
    return TestResult(r, float(p), (n,), "increment_independence")


def two_proportion(k1: int, n1: int, k2: int, n2: int) -> tuple[float, float]:
    """Difference of proportions and its standard error (unpooled)."""
    if n1 == 0 or n2 == 0:
        raise ValueError("empty group")
    p1, p2 = k1 / n1, k2 / n2
    se = math.sqrt(p1 * (1 - p1) / n1 + p2 * (1 - p2) / n2)
    return p1 - p2, se
