"""Stationary (equilibrium) last passage and exit points.

The stationary process adds Poisson(lambda) sources on the x-axis to the bulk
points.  With ``nu`` the signed source count measured from the origin,

    L_lam[x]_t = sup_{z <= x} nu(z) + L([z]_0, [x]_t),

and the exit points are the supremum and infimum of the set of ``z`` where
the sup is attained.  The sup is taken over a finite window ``[w_left, x]``;
if the attaining set reaches ``w_left`` the caller grows the window (see
:class:`CoupledSample`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .lpp import CoverageError, _as_point, _select, passage_profile, suffix_profile
from .rng import (
    BoundaryProcess,
    ParameterError,
    PlanarPoint,
    PointSet,
    Rect,
    SeedSpec,
    Substream,
    extend_left,
    sample_axis,
    sample_ppp,
)

__all__ = [
    "BoundaryProcess",
    "WindowError",
    "ExitPoints",
    "ParticleConfig",
    "ScalingParams",
    "AuditReport",
    "CoupledSample",
    "nu_eval",
    "lambda_pm",
    "l_lambda",
    "l_lambda_by_enumeration",
    "exit_points",
    "exit_signs",
    "event_E",
    "event_locations",
    "comparison_audit",
    "evolve",
    "default_w_left",
]


class WindowError(ValueError):
    """Query outside the boundary window, or the window is too small."""


@dataclass(frozen=True)
class ExitPoints:
    z_right: float
    z_left: float
    max_value: int
    left_edge_indeterminate: bool


@dataclass(frozen=True, eq=False)
class ParticleConfig:
    positions: np.ndarray
    window: tuple[float, float]
    time_stamp: float = 0.0

    def count(self, a: float, b: float) -> int:
        """Number of particles in (a, b]."""
        p = self.positions
        return int(np.searchsorted(p, b, side="right") - np.searchsorted(p, a, side="right"))


@dataclass(frozen=True)
class ScalingParams:
    """Parameters of the comparison events.

    ``kind`` selects the family: ``sec3`` (tightness, uses ``beta`` and
    ``delta``), ``sec4`` (sub-critical local fluctuations, ``gamma`` and
    ``gamma_prime``) or ``sec5`` (local Airy, ``beta`` and ``epsilon``).
    """

    kind: str
    n: int
    beta: float = 0.5
    delta: float = 0.5
    gamma: float = 0.4
    gamma_prime: float = 0.5
    epsilon: float = 0.1
    s: float = 1.0

    def __post_init__(self):
        k = self.kind
        if self.n < 1:
            raise ParameterError("n must be at least 1")
        if k == "sec3":
            if not 1 / 3 < self.beta < 1:
                raise ParameterError("beta must lie in (1/3, 1) for sec3")
            if not 0 < self.delta < 1:
                raise ParameterError("delta must lie in (0, 1)")
        elif k == "sec4":
            if not 0 < self.gamma < 2 / 3:
                raise ParameterError("gamma must lie in (0, 2/3)")
            if not self.gamma < self.gamma_prime < 2 / 3:
                raise ParameterError("gamma_prime must lie in (gamma, 2/3)")
        elif k == "sec5":
            if not 0 < self.beta < 1 / 2:
                raise ParameterError("beta must lie in (0, 1/2) for sec5")
            if not 0 < self.epsilon < 1:
                raise ParameterError("epsilon must lie in (0, 1)")
        else:
            raise ParameterError(f"unknown kind {k!r}")

    @classmethod
    def unchecked(cls, kind: str, n: int, **kw) -> ScalingParams:
        """Build without the domain checks (formula evaluation at the closed
        ends of the parameter ranges, e.g. ``delta = 1``)."""
        obj = object.__new__(cls)
        values = {f: getattr(cls, f) for f in ("beta", "delta", "gamma", "gamma_prime", "epsilon", "s")}
        values.update(kw, kind=kind, n=n)
        for k, v in values.items():
            object.__setattr__(obj, k, v)
        return obj


@dataclass
class AuditReport:
    checked_pairs: int = 0
    violations: int = 0
    upper_checked: int = 0
    lower_checked: int = 0
    details: list = field(default_factory=list)

    def merge(self, other: AuditReport) -> AuditReport:
        return AuditReport(
            self.checked_pairs + other.checked_pairs,
            self.violations + other.violations,
            self.upper_checked + other.upper_checked,
            self.lower_checked + other.lower_checked,
            self.details + other.details,
        )


def nu_eval(boundary: BoundaryProcess, z):
    """Signed source count: #(0, z] for z > 0 and -#(z, 0] for z <= 0."""
    z_arr = np.asarray(z, dtype=np.float64)
    if np.any(z_arr < boundary.w_left) or np.any(z_arr > boundary.w_right):
        raise WindowError(f"z outside window ({boundary.w_left}, {boundary.w_right}]")
    loc = boundary.locations
    out = np.searchsorted(loc, z_arr, side="right") - np.searchsorted(loc, 0.0, side="right")
    return int(out) if np.ndim(z) == 0 else out.astype(np.int64)


def lambda_pm(params: ScalingParams) -> tuple[float, float]:
    n = params.n
    if params.kind == "sec3":
        d = params.delta ** -params.beta / n ** (1 / 3)
    elif params.kind == "sec4":
        d = 1.0 / n ** (params.gamma_prime / 2)
    else:
        d = params.epsilon ** -params.beta / n ** (1 / 3)
    if 1.0 - d <= 0:
        raise ParameterError(f"lambda_minus = {1 - d:.4g} <= 0; n too small for these parameters")
    return 1.0 + d, 1.0 - d


def event_locations(params: ScalingParams) -> tuple[float, float]:
    """x-coordinates of the two targets (both at time n) of the event."""
    n = params.n
    if params.kind == "sec3":
        second = n + 2 * n ** (2 / 3)
    elif params.kind == "sec4":
        second = n + n ** params.gamma
    else:
        second = n + n ** (2 / 3)
    return float(n), float(second)


def default_w_left(x: float, t: float, lam: float, factor: float = 10.0) -> float:
    """Initial left window edge for a target ``[x]_t``.

    The exit point concentrates around ``x - t / lam**2`` with spread of
    order ``t**(2/3)``; at ``lam = 1`` and ``x = t = n`` this is
    ``-factor * n**(2/3)``.
    """
    return min(0.0, x - t / lam**2) - factor * t ** (2 / 3)


def _check_inputs(points: PointSet, boundary: BoundaryProcess, target: PlanarPoint):
    w = boundary.w_left
    if target.x > boundary.w_right or target.x < w:
        raise WindowError(f"target x={target.x} outside boundary window")
    if not points.region.contains_rect(Rect(w, target.x, 0.0, target.t)):
        raise CoverageError(f"bulk region {points.region} does not cover ({w}, {target.x}] x (0, {target.t}]")


def exit_points(points: PointSet, boundary: BoundaryProcess, target) -> ExitPoints:
    """Maximum of ``nu(z) + L([z]_0, target)`` over the window and its attaining set.

    Both terms are right-continuous step functions, so the objective is
    constant on ``[c_i, c_{i+1})`` between consecutive breakpoints ``c``.
    ``z_right`` is the right end of the last attaining piece (``target.x``
    for the final piece) and ``z_left`` the left end of the first one.
    """
    target = _as_point(target)
    _check_inputs(points, boundary, target)
    w, x = boundary.w_left, target.x
    prof = suffix_profile(points, target, w)
    loc = boundary.locations
    src = loc[(loc > w) & (loc <= x)]
    cand = np.unique(np.concatenate([[w], prof.breakpoints, src]))
    f = nu_eval(boundary, cand) + prof(cand)
    best = int(f.max())
    hit = np.flatnonzero(f == best)
    first, last = hit[0], hit[-1]
    z_left = float(cand[first])
    z_right = float(cand[last + 1]) if last + 1 < cand.size else float(x)
    return ExitPoints(z_right, z_left, best, bool(first == 0))


def l_lambda(points: PointSet, boundary: BoundaryProcess, target, strict: bool = False) -> int:
    """Stationary last-passage value at ``target``.

    With ``strict`` a :class:`WindowError` is raised when the maximiser set
    reaches the left edge of the window.
    """
    ep = exit_points(points, boundary, target)
    if strict and ep.left_edge_indeterminate:
        raise WindowError("maximiser touches the left edge of the window")
    return ep.max_value


def l_lambda_by_enumeration(points: PointSet, boundary: BoundaryProcess, target) -> int:
    """Reference value: evaluate ``nu(z) + L([z]_0, target)`` directly at every
    candidate ``z`` (window edge, every source, every bulk abscissa)."""
    from .lpp import last_passage

    target = _as_point(target)
    _check_inputs(points, boundary, target)
    w, x = boundary.w_left, target.x
    bx, _ = _select(points, w, x, 0.0, target.t)
    loc = boundary.locations
    cand = np.unique(np.concatenate([[w], bx, loc[(loc > w) & (loc <= x)]]))
    return max(nu_eval(boundary, float(z)) + last_passage(points, (float(z), 0.0), target)
               for z in cand)


def _chain_counts(points, boundary, lo, hi_src, x_max, t):
    """Prefix chain counts of sources in (lo, hi_src) followed by bulk in (lo, x_max].

    Sources get distinct negative heights increasing in x so that they chain
    with each other and sit below every bulk point.
    """
    loc = boundary.locations
    src = loc[(loc > lo) & (loc < hi_src)]
    bx, bt = _select(points, lo, x_max, 0.0, t)
    xs = np.concatenate([src, bx])
    hs = np.concatenate([np.arange(src.size, dtype=np.float64) - src.size - 1.0, bt])
    order = np.argsort(xs, kind="stable")
    xs, hs = xs[order], hs[order]
    return xs, _kernels.prefix_lis(hs)


def _count_at(xs, counts, x):
    i = np.searchsorted(xs, x, side="right")
    return np.where(i > 0, counts[np.maximum(i - 1, 0)] if counts.size else 0, 0)


def exit_signs(points: PointSet, boundary: BoundaryProcess, t: float, xs) -> dict:
    """Signs of both exit points at every ``[x]_t`` from three sweeps.

    ``A(x)`` is the best value over ``z < 0`` and ``B(x)`` over ``z >= 0``.
    Then ``z_left >= 0`` iff ``A < B`` and ``z_right <= 0`` iff ``A > B``.
    Independent of :func:`exit_points`, which evaluates each target on its
    own.
    """
    xs = np.asarray(xs, dtype=np.float64)
    x_max = float(xs.max())
    _check_inputs(points, boundary, PlanarPoint(x_max, t))
    if xs.min() < 0:
        raise WindowError("targets must be at x >= 0")
    w = boundary.w_left
    nu_w = nu_eval(boundary, w)
    ax, ac = _chain_counts(points, boundary, w, 0.0, x_max, t)
    bx_, bc = _chain_counts(points, boundary, 0.0, np.inf, x_max, t)
    wx, wt = _select(points, w, x_max, 0.0, t)
    wc = _kernels.prefix_lis(wt)
    a = nu_w + _count_at(ax, ac, xs)
    b = _count_at(bx_, bc, xs)
    best = np.maximum(a, b)
    touch = (nu_w + _count_at(wx, wc, xs)) == best
    return {
        "value": best.astype(np.int64),
        "z_left_nonneg": a < b,
        "z_right_nonpos": a > b,
        "left_edge_indeterminate": touch,
    }


def event_E(points: PointSet, boundaries, params: ScalingParams) -> bool:
    """Comparison event: ``z_left >= 0`` at ``[n]_n`` under lambda+ and
    ``z_right <= 0`` at the second location under lambda-."""
    b_plus, b_minus = boundaries
    x1, x2 = event_locations(params)
    t = float(params.n)
    left = exit_points(points, b_plus, (x1, t)).z_left
    right = exit_points(points, b_minus, (x2, t)).z_right
    return bool(left >= 0 and right <= 0)


def comparison_audit(points: PointSet, boundary: BoundaryProcess, t: float, x_grid,
                     exits=None, plain=None) -> AuditReport:
    """Check the local comparison inequalities on every grid pair ``x < y``.

    If ``z_left(x) >= 0``:  ``L[y] - L[x] <= L_lam[y] - L_lam[x]``.
    If ``z_right(y) <= 0``: ``L[y] - L[x] >= L_lam[y] - L_lam[x]``.
    A failed inequality is counted, never raised.  ``exits`` and ``plain``
    may carry precomputed exit points and plain passage values per grid
    point.
    """
    xg = np.asarray(x_grid, dtype=np.float64)
    if xg.size and (xg[0] < 0 or np.any(np.diff(xg) < 0)):
        raise ValueError("grid must be sorted and non-negative")
    if exits is None:
        exits = [exit_points(points, boundary, (float(x), t)) for x in xg]
    if plain is None:
        prof = passage_profile(points, 0.0, t, float(xg[-1])) if xg.size else None
        plain = [prof(float(x)) for x in xg]
    rep = AuditReport()
    for i in range(xg.size):
        for j in range(i + 1, xg.size):
            d_plain = plain[j] - plain[i]
            d_stat = exits[j].max_value - exits[i].max_value
            rep.checked_pairs += 1
            if exits[i].z_left >= 0:
                rep.upper_checked += 1
                if d_plain > d_stat:
                    rep.violations += 1
                    rep.details.append(("upper", float(xg[i]), float(xg[j]), d_plain, d_stat))
            if exits[j].z_right <= 0:
                rep.lower_checked += 1
                if d_plain < d_stat:
                    rep.violations += 1
                    rep.details.append(("lower", float(xg[i]), float(xg[j]), d_plain, d_stat))
    return rep


def evolve(initial: ParticleConfig, bulk: PointSet, t_end: float) -> ParticleConfig:
    """Hammersley dynamics from ``initial.time_stamp`` to ``t_end``.

    Bulk points are processed in time order: at ``(x, s)`` the nearest
    particle to the right of ``x`` moves to ``x``, or a particle is created
    at ``x`` when there is none in the window.
    """
    w_left, w_right = initial.window
    x, t = bulk.x, bulk.t
    keep = (t > initial.time_stamp) & (t <= t_end) & (x > w_left) & (x <= w_right)
    x, t = x[keep], t[keep]
    order = np.argsort(t, kind="stable")
    pos = np.ascontiguousarray(np.sort(initial.positions), dtype=np.float64)
    out = _kernels.hammersley_evolve(pos, np.ascontiguousarray(x[order]),
                                     np.ascontiguousarray(t[order]), float(w_right))
    return ParticleConfig(out, initial.window, float(t_end))


class CoupledSample:
    """One bulk realisation shared by plain and stationary last passage.

    Holds the bulk on ``(w, x_max] x (0, t]`` and one source process per
    intensity, each on its own lane of the sample's streams.  Exit queries
    double the distance of the left edge from the origin (restriction
    consistent, never resampling) until the attaining set stays clear of it,
    at most ``max_doublings`` times.
    """

    def __init__(self, master_seed: int, index: int, t: float, x_max: float, lams,
                 w_lefts=None, window_factor: float = 10.0, lane: int = 0,
                 max_doublings: int = 6):
        self.t = float(t)
        self.x_max = float(x_max)
        self.lams = [float(v) for v in lams]
        self.max_doublings = max_doublings
        if w_lefts is None:
            w_lefts = [default_w_left(self.x_max, self.t, lam, window_factor) for lam in self.lams]
        w_lefts = [min(float(w), -1e-9) for w in w_lefts]
        self.seed = SeedSpec(master_seed, index, Substream.BULK, lane)
        self.bulk = sample_ppp(Rect(min(w_lefts), self.x_max, 0.0, self.t), 1.0, self.seed)
        self.boundaries = {}
        for k, (lam, w) in enumerate(zip(self.lams, w_lefts)):
            bseed = SeedSpec(master_seed, index, Substream.BOUNDARY, lane * 64 + k)
            self.boundaries[lam] = sample_axis((w, self.x_max), lam, bseed)
        self.doublings = {lam: 0 for lam in self.lams}
        self._plain = None

    def _grow(self, lam: float):
        b = self.boundaries[lam]
        new_w = 2.0 * b.w_left
        if new_w < self.bulk.region.x0:
            self.bulk = extend_left(self.bulk, new_w)
        self.boundaries[lam] = extend_left(b, new_w)
        self.doublings[lam] += 1

    def exits(self, lam: float, xs, t: float | None = None):
        """Exit points at ``[x]_t`` for each x; returns ``(list, flagged)``.

        ``flagged`` is True if the window still touched the maximiser set
        after the allowed doublings.
        """
        t = self.t if t is None else float(t)
        while True:
            b = self.boundaries[lam]
            res = [exit_points(self.bulk, b, (float(x), t)) for x in xs]
            if not any(r.left_edge_indeterminate for r in res):
                return res, False
            if self.doublings[lam] >= self.max_doublings:
                return res, True
            self._grow(lam)

    def signs(self, lam: float, xs, t: float | None = None):
        t = self.t if t is None else float(t)
        while True:
            out = exit_signs(self.bulk, self.boundaries[lam], t, xs)
            if not out["left_edge_indeterminate"].any():
                return out, False
            if self.doublings[lam] >= self.max_doublings:
                return out, True
            self._grow(lam)

    def plain_profile(self):
        if self._plain is None:
            self._plain = passage_profile(self.bulk, 0.0, self.t, self.x_max)
        return self._plain
