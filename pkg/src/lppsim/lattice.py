"""Directed last passage on Z^2 with i.i.d. Exp(1) weights.

Coordinates follow the ``[x]_t`` convention: ``weights[t, x]``.  A path from
``[x]_t`` to ``[y]_u`` takes unit steps right or up; its first cell is a
neighbour of the start, so the start weight is excluded and the end weight
included.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .lpp import CoverageError
from .rng import SeedSpec, Substream, derive_stream

__all__ = [
    "LatticeField",
    "sample_exp_field",
    "lattice_last_passage",
    "lattice_row_profile",
    "lattice_oracle",
]


@dataclass(frozen=True, eq=False)
class LatticeField:
    weights: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or min(w.shape) < 1:
            raise ValueError("weights must be a non-empty 2-d array")
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "weights", w)

    @property
    def rows(self) -> int:
        return self.weights.shape[0]

    @property
    def cols(self) -> int:
        return self.weights.shape[1]


def sample_exp_field(rows: int, cols: int, seed: SeedSpec) -> LatticeField:
    """Exp(1) weights by inversion, ``-log(U)`` with ``U`` in (0, 1]."""
    if rows < 1 or cols < 1:
        raise ValueError("dimensions must be at least 1")
    rng = derive_stream(seed.with_substream(Substream.LATTICE))
    u = 1.0 - rng.random((rows, cols))  # (0, 1]
    return LatticeField(-np.log(u))


def _check(field: LatticeField, start, end):
    (x0, t0), (x1, t1) = start, end
    if not (0 <= x0 <= x1 < field.cols and 0 <= t0 <= t1 < field.rows):
        raise CoverageError(f"{start} -> {end} not inside a {field.rows}x{field.cols} field")
    if (x0, t0) == (x1, t1):
        raise ValueError("start and end coincide: no admissible path")


def lattice_last_passage(field: LatticeField, start, end) -> float:
    """Maximal path weight from ``start = (x, t)`` to ``end = (y, u)``."""
    (x0, t0), (x1, t1) = map(lambda p: (int(p[0]), int(p[1])), (start, end))
    _check(field, (x0, t0), (x1, t1))
    return float(_kernels.lattice_dp_row(field.weights, x0, t0, x1, t1)[-1])


def lattice_row_profile(field: LatticeField, n: int, x_range) -> np.ndarray:
    """``L^l([0]_0, [x]_n)`` for every integer x in ``x_range = (lo, hi)``, inclusive."""
    lo, hi = int(x_range[0]), int(x_range[1])
    if lo < 0 or hi >= field.cols or not 0 <= n < field.rows or lo > hi:
        raise CoverageError(f"row {n}, columns {lo}..{hi} not inside the field")
    row = _kernels.lattice_dp_row(field.weights, 0, 0, hi, n)
    if n == 0 and lo == 0:
        row = row.copy()
        row[0] = np.nan  # no path from the origin to itself
    return row[lo:hi + 1]


def lattice_oracle(field: LatticeField, start, end) -> float:
    """Maximum over an explicit enumeration of all up-right paths."""
    (x0, t0), (x1, t1) = map(lambda p: (int(p[0]), int(p[1])), (start, end))
    _check(field, (x0, t0), (x1, t1))
    w = field.weights

    @lru_cache(maxsize=None)
    def paths(x, t):
        # all path sums from (x, t) to the end, excluding (x, t) itself
        if (x, t) == (x1, t1):
            return (0.0,)
        out = []
        if x < x1:
            out.extend(w[t, x + 1] + s for s in paths(x + 1, t))
        if t < t1:
            out.extend(w[t + 1, x] + s for s in paths(x, t + 1))
        return tuple(out)

    return max(paths(x0, t0))
