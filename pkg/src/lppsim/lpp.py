"""Exact last-passage computations on planar point sets.

All rectangles are half-open, ``(p.x, q.x] x (p.t, q.t]``: points on the low
edges never count.  Values are longest strictly increasing chains, computed
by patience sorting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .rng import PlanarPoint, PointSet, Rect

__all__ = [
    "CoverageError",
    "StepFunction",
    "Geodesic",
    "last_passage",
    "lis_oracle",
    "passage_profile",
    "suffix_profile",
    "geodesic",
]

ORACLE_MAX_POINTS = 20


class CoverageError(ValueError):
    """The query rectangle is not inside the sampled region."""


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Right-continuous integer step function.

    ``values[i]`` holds on ``[breakpoints[i], breakpoints[i+1])`` and
    ``initial_value`` to the left of the first breakpoint.  ``domain`` is the
    closed interval on which the function is defined.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    initial_value: int
    orientation: str  # "nondecreasing" (in x) or "nonincreasing" (in z)
    domain: tuple[float, float]

    def __call__(self, z):
        z_arr = np.asarray(z, dtype=np.float64)
        lo, hi = self.domain
        if np.any(z_arr < lo) or np.any(z_arr > hi):
            raise CoverageError(f"argument outside domain [{lo}, {hi}]")
        idx = np.searchsorted(self.breakpoints, z_arr, side="right") - 1
        vals = np.where(idx >= 0, self.values[np.maximum(idx, 0)] if self.values.size else 0,
                        self.initial_value)
        if np.ndim(z) == 0:
            return int(vals)
        return vals.astype(np.int64)

    def pieces(self):
        """Yield ``(start, end, value)`` for each constant piece on the domain."""
        lo, hi = self.domain
        starts = np.concatenate([[lo], self.breakpoints])
        vals = np.concatenate([[self.initial_value], self.values]).astype(np.int64)
        ends = np.concatenate([self.breakpoints, [hi]])
        for a, b, v in zip(starts, ends, vals):
            if b > a or (a == b == hi):
                yield float(a), float(b), int(v)


@dataclass(frozen=True)
class Geodesic:
    path: tuple[PlanarPoint, ...]
    p: PlanarPoint
    q: PlanarPoint

    def __len__(self):
        return len(self.path)


def _as_point(p) -> PlanarPoint:
    return p if isinstance(p, PlanarPoint) else PlanarPoint(float(p[0]), float(p[1]))


def _check_cover(points: PointSet, rect: Rect):
    if not points.region.contains_rect(rect):
        raise CoverageError(f"{rect} is not covered by sampled region {points.region}")


def _select(points: PointSet, x0, x1, t0, t1):
    """Coordinates of the points in (x0, x1] x (t0, t1], in x order."""
    lo = np.searchsorted(points.x, x0, side="right")
    hi = np.searchsorted(points.x, x1, side="right")
    x = points.x[lo:hi]
    t = points.t[lo:hi]
    keep = (t > t0) & (t <= t1)
    return x[keep], t[keep]


def _rect(p: PlanarPoint, q: PlanarPoint) -> Rect:
    if p.x > q.x or p.t > q.t:
        raise ValueError(f"{p} is not below-left of {q}")
    return Rect(p.x, q.x, p.t, q.t)


def last_passage(points: PointSet, p, q) -> int:
    """Longest increasing chain of points in the rectangle spanned by ``p`` and ``q``."""
    p, q = _as_point(p), _as_point(q)
    rect = _rect(p, q)
    _check_cover(points, rect)
    _, t = _select(points, p.x, q.x, p.t, q.t)
    return int(_kernels.lis_length(t))


def lis_oracle(points: PointSet, p, q) -> int:
    """Exhaustive search over all subsets; for testing only (at most 20 points)."""
    p, q = _as_point(p), _as_point(q)
    rect = _rect(p, q)
    _check_cover(points, rect)
    x, t = _select(points, p.x, q.x, p.t, q.t)
    m = len(x)
    if m > ORACLE_MAX_POINTS:
        raise ValueError(f"oracle refuses {m} points (limit {ORACLE_MAX_POINTS})")
    pts = list(zip(x.tolist(), t.tolist()))
    for k in range(m, 0, -1):
        for combo in itertools.combinations(pts, k):
            if all(a[0] < b[0] and a[1] < b[1] for a, b in zip(combo, combo[1:])):
                return k
    return 0


def _compress(bp, vals):
    """Keep only breakpoints where the value changes."""
    if bp.size == 0:
        return bp, vals
    prev = np.concatenate([[np.iinfo(np.int64).min], vals[:-1]])
    change = vals != prev
    return bp[change], vals[change]


def passage_profile(points: PointSet, z0: float, t: float, x_max: float) -> StepFunction:
    """``x -> L([z0]_0, [x]_t)`` for ``z0 <= x <= x_max`` from one sweep."""
    _check_cover(points, Rect(z0, x_max, 0.0, t))
    x, tt = _select(points, z0, x_max, 0.0, t)
    counts = _kernels.prefix_lis(tt)
    bp, vals = _compress(x, counts)
    if vals.size and vals[0] == 0:
        bp, vals = bp[1:], vals[1:]
    return StepFunction(bp, vals, 0, "nondecreasing", (float(z0), float(x_max)))


def suffix_profile(points: PointSet, target, z_min: float) -> StepFunction:
    """``z -> L([z]_0, target)`` for ``z_min <= z <= target.x`` from one reverse sweep."""
    target = _as_point(target)
    _check_cover(points, Rect(z_min, target.x, 0.0, target.t))
    x, tt = _select(points, z_min, target.x, 0.0, target.t)
    # reading right to left, an increasing chain has decreasing t
    rev = _kernels.prefix_lis(-tt[::-1])[::-1]
    # value on [x_j, x_{j+1}) is the chain count of points strictly right of x_j
    initial = int(rev[0]) if rev.size else 0
    after = np.concatenate([rev[1:], [0]]).astype(np.int64)
    bp, vals = _compress(x, after)
    if vals.size and vals[0] == initial:
        bp, vals = bp[1:], vals[1:]
    return StepFunction(bp, vals, initial, "nonincreasing", (float(z_min), float(target.x)))


def geodesic(points: PointSet, p, q) -> Geodesic:
    """One maximal increasing chain between ``p`` and ``q``.

    Patience piles with back pointers: each point links to the top of the
    previous pile when it is placed, and the chain is read back from the top
    of the last pile.  This fixes one canonical maximiser; only its length
    and the split identity at its points are relied upon.
    """
    p, q = _as_point(p), _as_point(q)
    rect = _rect(p, q)
    _check_cover(points, rect)
    x, t = _select(points, p.x, q.x, p.t, q.t)
    idx = _kernels.lis_with_path(t)
    path = tuple(PlanarPoint(float(x[i]), float(t[i])) for i in idx)
    return Geodesic(path, p, q)
