"""Reproducible sampling of planar and axis Poisson processes.

Every random object is addressed by a :class:`SeedSpec`.  A seed spec is turned
into a Philox (counter-based) bit generator keyed through
:class:`numpy.random.SeedSequence`, so samples can be drawn in any order, on
any number of threads, and replayed bit for bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "Substream",
    "SeedSpec",
    "Rect",
    "PlanarPoint",
    "PointSet",
    "BoundaryProcess",
    "ParameterError",
    "derive_stream",
    "sample_ppp",
    "sample_axis",
    "extend_left",
]

# Expected number of points per block when sampling a left extension.
_BLOCK_POINTS = 4096.0


class ParameterError(ValueError):
    """Invalid sampling parameters."""


class Substream(enum.IntEnum):
    BULK = 1
    BOUNDARY = 2
    BULK_EXTENSION = 3
    BOUNDARY_EXTENSION = 4
    LATTICE = 5


@dataclass(frozen=True)
class SeedSpec:
    """Address of one random stream.

    ``lane`` separates several objects of the same kind inside one sample
    (for example the two boundary processes of a coupled pair).
    """

    master_seed: int
    stream_index: int
    substream: Substream = Substream.BULK
    lane: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_index", "lane"):
            v = getattr(self, name)
            if not 0 <= int(v) < 2**64:
                raise ParameterError(f"{name} must be a 64-bit unsigned integer, got {v}")

    def with_substream(self, substream: Substream) -> SeedSpec:
        return replace(self, substream=Substream(substream))


def derive_stream(seed: SeedSpec, block: int = 0) -> np.random.Generator:
    """Generator for ``seed`` (and an optional extension block number).

    The words ``(stream_index, substream, lane, block)`` form the spawn key
    of a SeedSequence with entropy ``master_seed``; its 128-bit output keys a
    Philox4x64 generator whose counter starts at zero.
    """
    ss = np.random.SeedSequence(
        entropy=int(seed.master_seed),
        spawn_key=(int(seed.stream_index), int(seed.substream), int(seed.lane), int(block)),
    )
    key = ss.generate_state(2, dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class Rect:
    """Half-open rectangle ``(x0, x1] x (s, t]``."""

    x0: float
    x1: float
    s: float
    t: float

    def __post_init__(self):
        if not (self.x0 <= self.x1 and self.s <= self.t):
            raise ParameterError(f"invalid rectangle {self}")

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.t - self.s)

    def contains_rect(self, other: Rect) -> bool:
        return (self.x0 <= other.x0 and other.x1 <= self.x1
                and self.s <= other.s and other.t <= self.t)


@dataclass(frozen=True)
class PlanarPoint:
    x: float
    t: float

    def __iter__(self):
        yield self.x
        yield self.t


@dataclass(frozen=True, eq=False)
class PointSet:
    """Poisson points sorted by x (coordinates are a.s. distinct).

    ``anchor`` is the left edge of the originally sampled region; left
    extensions are laid out in fixed blocks measured from it, which makes
    repeated extensions agree with a single larger one.
    """

    x: np.ndarray
    t: np.ndarray
    region: Rect
    intensity: float
    seed: SeedSpec | None = None
    anchor: float = field(default=math.nan)

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64)
        t = np.ascontiguousarray(self.t, dtype=np.float64)
        if x.shape != t.shape or x.ndim != 1:
            raise ValueError("x and t must be 1-d arrays of equal length")
        if x.size:
            if np.any(np.diff(x) < 0):
                order = np.lexsort((t, x))
                x, t = x[order], t[order]
            r = self.region
            if x[0] <= r.x0 or x[-1] > r.x1 or t.min() <= r.s or t.max() > r.t:
                raise ValueError("points outside region")
            if np.any(np.diff(x) == 0) or np.unique(t).size != t.size:
                raise ValueError("points share a coordinate")
        x.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", t)
        if math.isnan(self.anchor):
            object.__setattr__(self, "anchor", float(self.region.x0))

    @classmethod
    def _trusted(cls, x, t, region, intensity, seed=None, anchor=None):
        # sampler output: already sorted, inside region and tie-free
        obj = object.__new__(cls)
        x.flags.writeable = False
        t.flags.writeable = False
        for k, v in (("x", x), ("t", t), ("region", region), ("intensity", intensity),
                     ("seed", seed), ("anchor", float(region.x0 if anchor is None else anchor))):
            object.__setattr__(obj, k, v)
        return obj

    def __len__(self):
        return self.x.size

    @property
    def points(self) -> list[PlanarPoint]:
        return [PlanarPoint(float(a), float(b)) for a, b in zip(self.x, self.t)]

    @classmethod
    def from_points(cls, pts, region: Rect, intensity: float = 1.0) -> PointSet:
        arr = np.asarray(list(pts), dtype=np.float64).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1], region, intensity)

    def restrict(self, rect: Rect) -> PointSet:
        lo = np.searchsorted(self.x, rect.x0, side="right")
        hi = np.searchsorted(self.x, rect.x1, side="right")
        x, t = self.x[lo:hi], self.t[lo:hi]
        keep = (t > rect.s) & (t <= rect.t)
        return PointSet(x[keep], t[keep], rect, self.intensity)


@dataclass(frozen=True, eq=False)
class BoundaryProcess:
    """Poisson(lambda) points on the window ``(w_left, w_right]`` of the x-axis."""

    lam: float
    w_left: float
    w_right: float
    locations: np.ndarray
    seed: SeedSpec | None = None
    anchor: float = field(default=math.nan)

    def __post_init__(self):
        if not self.lam > 0:
            raise ParameterError("boundary intensity must be positive")
        if not (self.w_left <= 0.0 <= self.w_right):
            raise ParameterError(f"window ({self.w_left}, {self.w_right}] must contain the origin")
        loc = np.sort(np.ascontiguousarray(self.locations, dtype=np.float64))
        if loc.size and (loc[0] <= self.w_left or loc[-1] > self.w_right):
            raise ValueError("boundary location outside window")
        loc.flags.writeable = False
        object.__setattr__(self, "locations", loc)
        if math.isnan(self.anchor):
            object.__setattr__(self, "anchor", float(self.w_left))

    def __len__(self):
        return self.locations.size

    @property
    def window(self) -> tuple[float, float]:
        return (self.w_left, self.w_right)


def _sorted_uniform(rng: np.random.Generator, n: int, a: float, b: float) -> np.ndarray:
    # uniform order statistics from normalised exponential spacings, O(n)
    e = rng.standard_exponential(n + 1)
    cs = np.cumsum(e)
    return a + (b - a) * (cs[:n] / cs[n])


def _distinct_sorted_uniform(rng, n, a, b):
    """Sorted uniforms on (a, b] with no repeated value.

    A repeat (only possible through rounding) is redrawn from the same stream.
    """
    u = _sorted_uniform(rng, n, a, b)
    while n > 1 and not (u[0] > a and np.all(np.diff(u) > 0)):
        bad = np.zeros(n, dtype=bool)
        bad[1:] = np.diff(u) <= 0
        bad |= u <= a
        # b - (b - a) * U lies in (a, b]
        u[bad] = b - (b - a) * rng.random(int(bad.sum()))
        u.sort()
    return u


def _sample_rect(rng: np.random.Generator, region: Rect, intensity: float):
    mean = intensity * region.area
    n = int(rng.poisson(mean)) if mean > 0 else 0
    if n == 0:
        return np.empty(0), np.empty(0)
    x = _distinct_sorted_uniform(rng, n, region.x0, region.x1)
    # t - h U lies in (s, t]
    t = region.t - (region.t - region.s) * rng.random(n)
    if n > 1 and np.any(np.diff(np.sort(t)) == 0):
        t = _untie_new(rng, t, np.empty(0), region.s, region.t)
    return x, t


def sample_ppp(region: Rect, intensity: float, seed: SeedSpec) -> PointSet:
    """Homogeneous Poisson process of the given intensity on ``region``."""
    if intensity < 0:
        raise ParameterError("intensity must be non-negative")
    x, t = _sample_rect(derive_stream(seed), region, intensity)
    return PointSet._trusted(x, t, region, intensity if intensity > 0 else 1.0, seed)


def sample_axis(window: tuple[float, float], lam: float, seed: SeedSpec) -> BoundaryProcess:
    """Poisson(``lam``) locations on the axis window ``(w_left, w_right]``.

    The window has to contain the origin because the signed counting function
    is measured from it.  ``(0, 0]`` is accepted and gives an empty process.
    """
    w_left, w_right = map(float, window)
    if not lam > 0:
        raise ParameterError("lambda must be positive")
    if not (w_left <= 0.0 <= w_right):
        raise ParameterError(f"window ({w_left}, {w_right}] does not straddle the origin")
    rng = derive_stream(seed)
    mean = lam * (w_right - w_left)
    n = int(rng.poisson(mean)) if mean > 0 else 0
    loc = _distinct_sorted_uniform(rng, n, w_left, w_right) if n else np.empty(0)
    return BoundaryProcess(lam, w_left, w_right, loc, seed)


def _untie_new(rng, t_new, t_old, lo, hi):
    """Redraw entries of ``t_new`` that collide with ``t_old`` or each other."""
    t_new = t_new.copy()
    k = t_old.size
    while True:
        both = np.concatenate([t_old, t_new])
        order = np.argsort(both, kind="stable")
        dup = np.zeros(both.size, dtype=bool)
        dup[order[1:]] = np.diff(both[order]) == 0
        dup = dup[k:]
        if not dup.any():
            return t_new
        t_new[dup] = hi - (hi - lo) * rng.random(int(dup.sum()))


def _block_width(rate_per_length: float) -> float:
    return max(1.0, _BLOCK_POINTS / rate_per_length)


def _blocks_covering(anchor: float, width: float, new_left: float) -> range:
    # block k covers (anchor - (k+1) width, anchor - k width]
    nblocks = int(math.ceil((anchor - new_left) / width))
    return range(max(nblocks, 0))


def extend_left(existing, new_w_left: float, seed: SeedSpec | None = None):
    """Grow a PointSet or BoundaryProcess to the left.

    Only the fresh strip is sampled; existing points are kept as they are.
    The strip left of the object's anchor is cut into fixed blocks, each with
    its own stream, so extending in several steps or in one step gives the
    same points.  ``seed`` defaults to the object's own seed with the
    matching extension substream.
    """
    if isinstance(existing, PointSet):
        return _extend_pointset(existing, float(new_w_left), seed)
    if isinstance(existing, BoundaryProcess):
        return _extend_boundary(existing, float(new_w_left), seed)
    raise TypeError(f"cannot extend {type(existing).__name__}")


def _extension_seed(obj, seed, substream):
    if seed is None:
        if obj.seed is None:
            raise ParameterError("no seed available for the extension")
        seed = obj.seed
    return seed.with_substream(substream)


def _extend_pointset(ps: PointSet, new_left: float, seed) -> PointSet:
    r = ps.region
    if not new_left < r.x0:
        raise ParameterError(f"new left edge {new_left} must be below {r.x0}")
    seed = _extension_seed(ps, seed, Substream.BULK_EXTENSION)
    height = r.t - r.s
    width = _block_width(ps.intensity * height) if height > 0 else 1.0
    xs, ts = [], []
    for k in _blocks_covering(ps.anchor, width, new_left):
        hi = ps.anchor - k * width
        lo = hi - width
        if lo >= r.x0:
            continue
        bx, bt = _sample_rect(derive_stream(seed, block=k + 1), Rect(lo, hi, r.s, r.t), ps.intensity)
        keep = (bx > new_left) & (bx <= r.x0)
        xs.append(bx[keep])
        ts.append(bt[keep])
    region = Rect(new_left, r.x1, r.s, r.t)
    # block 0 is nearest the anchor, so reverse to keep x ascending
    x_new = np.concatenate(xs[::-1]) if xs else np.empty(0)
    t_new = np.concatenate(ts[::-1]) if ts else np.empty(0)
    if t_new.size:
        # blocks are sampled independently, so cross-block ties are possible
        t_new = _untie_new(derive_stream(seed, block=0), t_new, ps.t, r.s, r.t)
    x, t = np.concatenate([x_new, ps.x]), np.concatenate([t_new, ps.t])
    return PointSet._trusted(x, t, region, ps.intensity, ps.seed, ps.anchor)


def _extend_boundary(bp: BoundaryProcess, new_left: float, seed) -> BoundaryProcess:
    if not new_left < bp.w_left:
        raise ParameterError(f"new left edge {new_left} must be below {bp.w_left}")
    seed = _extension_seed(bp, seed, Substream.BOUNDARY_EXTENSION)
    width = _block_width(bp.lam)
    parts = []
    for k in _blocks_covering(bp.anchor, width, new_left):
        hi = bp.anchor - k * width
        lo = hi - width
        if lo >= bp.w_left:
            continue
        rng = derive_stream(seed, block=k + 1)
        n = int(rng.poisson(bp.lam * width))
        loc = _distinct_sorted_uniform(rng, n, lo, hi) if n else np.empty(0)
        parts.append(loc[(loc > new_left) & (loc <= bp.w_left)])
    parts.append(bp.locations)
    return BoundaryProcess(bp.lam, new_left, bp.w_right, np.concatenate(parts), bp.seed, bp.anchor)
