"""Rescaled last-passage processes.

Pure arithmetic on passage values.  Every function maps integer (or, for
the lattice, real) passage values to the centred and scaled quantity; the
builders at the bottom apply them over a u-grid and wrap the result in a
:class:`RescaledPath`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DomainError",
    "GridError",
    "RescaledPath",
    "airy_rescale",
    "airy_target",
    "delta_rescale",
    "delta_scales",
    "b_rescale",
    "gamma_rescale",
    "airy_local",
    "lattice_airy_rescale",
    "lattice_airy_target",
    "lattice_delta_rescale",
    "lattice_delta_scales",
    "lattice_delta_target",
    "airy_path",
    "delta_path",
]

KINDS = ("airy", "delta", "b_pm", "gamma_pm", "airy_local", "lattice_airy", "lattice_delta")

C53 = 2.0 ** (5 / 3)
C83 = 2.0 ** (8 / 3)
C43 = 2.0 ** (4 / 3)


class DomainError(ValueError):
    pass


class GridError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RescaledPath:
    kind: str
    u_grid: np.ndarray
    values: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        u = np.asarray(self.u_grid, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if u.shape != v.shape:
            raise ValueError("grid and values differ in length")
        if np.any(np.diff(u) <= 0):
            raise ValueError("u_grid must be strictly increasing")
        object.__setattr__(self, "u_grid", u)
        object.__setattr__(self, "values", v)

    def at(self, u: float) -> float:
        i = _grid_index(self.u_grid, u)
        return float(self.values[i])


def _grid_index(grid, u, rtol=1e-9):
    i = int(np.argmin(np.abs(grid - u)))
    if abs(grid[i] - u) > rtol * max(1.0, abs(u)):
        raise GridError(f"u={u} is not a grid point")
    return i


def airy_target(n: int, u: float) -> float:
    x = n + 2 * u * n ** (2 / 3)
    if x <= 0:
        raise DomainError(f"target n + 2u n^(2/3) = {x} is not positive")
    return x


def airy_rescale(L_val, n: int, u: float) -> float:
    if n < 1:
        raise DomainError("n must be at least 1")
    airy_target(n, u)
    n13 = n ** (1 / 3)
    return (L_val - (2 * n + 2 * u * n ** (2 / 3)) + u * u * n13) / n13


def delta_scales(s: float) -> tuple[float, float]:
    """Drift ``s**-1/2`` and scale ``s**-1/4``."""
    if not s > 0:
        raise DomainError("s must be positive")
    return s ** -0.5, s ** -0.25


def _check_gamma(gamma, s, n, u):
    if not 0 < gamma < 2 / 3:
        raise DomainError("gamma must lie in (0, 2/3)")
    if not s > 0:
        raise DomainError("s must be positive")
    if s * n + u * n ** gamma <= 0:
        raise DomainError("target s n + u n^gamma is not positive")


def delta_rescale(L_target, L_base, n: int, gamma: float, s: float, u: float) -> float:
    _check_gamma(gamma, s, n, u)
    mu, sigma = delta_scales(s)
    return (L_target - L_base - mu * u * n ** gamma) / (sigma * n ** (gamma / 2))


def b_rescale(L_target, L_base, lam: float, n: int, u: float) -> float:
    if n < 1:
        raise DomainError("n must be at least 1")
    return (L_target - L_base - lam * 2 * u * n ** (2 / 3)) / n ** (1 / 3)


def gamma_rescale(L_target, L_base, lam: float, n: int, gamma: float, u: float) -> float:
    if not 0 < gamma < 2 / 3:
        raise DomainError("gamma must lie in (0, 2/3)")
    return (L_target - L_base - lam * u * n ** gamma) / n ** (gamma / 2)


def airy_local(path: RescaledPath, eps: float, u: float) -> float:
    """``eps**-1/2 (A_n(eps u) - A_n(0))``; ``eps * u`` must be on the grid."""
    if path.kind not in ("airy", "lattice_airy"):
        raise ValueError("airy_local needs an airy path")
    if u == 0:
        return 0.0
    return (path.at(eps * u) - path.at(0.0)) / math.sqrt(eps)


def lattice_airy_target(n: int, u: float) -> tuple[int, float]:
    """Integer column ``n + round(2^(5/3) u n^(2/3))`` and the u it represents."""
    shift = round(C53 * u * n ** (2 / 3))
    x = n + shift
    if x <= 0:
        raise DomainError("snapped target column is not positive")
    return x, shift / (C53 * n ** (2 / 3))


def lattice_airy_rescale(L_val, n: int, u: float) -> float:
    _, us = lattice_airy_target(n, u)
    n13 = n ** (1 / 3)
    return (L_val - (4 * n + C83 * us * n ** (2 / 3)) + C43 * us * us * n13) / (C43 * n13)


def lattice_delta_scales(s: float) -> tuple[float, float]:
    if not s > 0:
        raise DomainError("s must be positive")
    m = s ** -0.5 * (1 + s ** 0.5)
    return m, m


def lattice_delta_target(n: int, gamma: float, s: float, u: float) -> tuple[int, int, float]:
    """Base column, target column and the snapped u they represent."""
    _check_gamma(gamma, s, n, u)
    base = round(s * n)
    x = round(s * n + u * n ** gamma)
    return base, x, (x - base) / n ** gamma


def lattice_delta_rescale(L_target, L_base, n: int, gamma: float, s: float, u: float) -> float:
    _, _, us = lattice_delta_target(n, gamma, s, u)
    mu, sigma = lattice_delta_scales(s)
    return (L_target - L_base - mu * us * n ** gamma) / (sigma * n ** (gamma / 2))


def airy_path(profile, n: int, u_grid) -> RescaledPath:
    """``A_n`` on ``u_grid`` from a passage profile ``x -> L[x]_n``."""
    u = np.asarray(u_grid, dtype=np.float64)
    xs = np.array([airy_target(n, v) for v in u])
    vals = np.asarray(profile(xs), dtype=np.float64)
    out = np.array([airy_rescale(L, n, v) for L, v in zip(vals, u)])
    return RescaledPath("airy", u, out, {"n": n})


def delta_path(profile, n: int, gamma: float, s: float, u_grid) -> RescaledPath:
    u = np.asarray(u_grid, dtype=np.float64)
    base = profile(float(s * n))
    xs = np.array([s * n + v * n ** gamma for v in u])
    vals = np.asarray(profile(xs), dtype=np.float64)
    out = np.array([delta_rescale(L, base, n, gamma, s, v) for L, v in zip(vals, u)])
    mu, sigma = delta_scales(s)
    return RescaledPath("delta", u, out, {"n": n, "gamma": gamma, "s": s, "mu": mu, "sigma": sigma})
