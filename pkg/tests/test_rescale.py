import math

import numpy as np
import pytest

from lppsim.rescale import (
    DomainError,
    GridError,
    RescaledPath,
    airy_local,
    airy_path,
    airy_rescale,
    b_rescale,
    delta_path,
    delta_rescale,
    delta_scales,
    gamma_rescale,
    lattice_airy_rescale,
    lattice_airy_target,
    lattice_delta_rescale,
    lattice_delta_scales,
    lattice_delta_target,
)


def test_airy_rescale_examples():
    assert airy_rescale(2000, 1000, 0.0) == 0.0
    assert airy_rescale(22, 8, 1.0) == pytest.approx(0.0, abs=1e-12)
    assert airy_rescale(2000 + 10, 1000, 0.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        airy_rescale(0, 8, -2.0)


def test_rescale_is_affine():
    n = 500
    d = airy_rescale(1001, n, 0.3) - airy_rescale(1000, n, 0.3)
    assert d == pytest.approx(1 / n ** (1 / 3), rel=1e-12)
    d = delta_rescale(51, 40, n, 0.4, 2.0, 0.5) - delta_rescale(50, 40, n, 0.4, 2.0, 0.5)
    assert d == pytest.approx(1 / (2.0 ** -0.25 * n ** 0.2), rel=1e-12)


def test_delta_scales():
    assert delta_rescale(7, 7, 100, 0.4, 1.0, 0.0) == 0.0
    assert delta_scales(1.0) == (1.0, 1.0)
    mu, sigma = delta_scales(4.0)
    assert mu == 0.5 and sigma == pytest.approx(1 / math.sqrt(2))
    with pytest.raises(DomainError):
        delta_rescale(1, 0, 100, 0.7, 1.0, 0.5)
    with pytest.raises(DomainError):
        delta_rescale(1, 0, 100, 0.4, -1.0, 0.5)


def test_b_and_gamma():
    assert b_rescale(5, 5, 1.1, 100, 0.0) == 0.0
    n, u = 125, 0.5
    assert b_rescale(2 * u * n ** (2 / 3), 0, 1.0, n, u) == pytest.approx(0.0, abs=1e-12)
    assert gamma_rescale(3, 3, 0.9, 100, 0.4, 0.0) == 0.0
    assert gamma_rescale(0.5 * 100 ** 0.4, 0, 1.0, 100, 0.4, 0.5) == pytest.approx(0.0, abs=1e-12)


def test_airy_local():
    p = RescaledPath("airy", np.array([0.0, 0.1, 0.2]), np.array([0.1, 0.3, 0.5]))
    assert airy_local(p, 0.1, 0.0) == 0.0
    assert airy_local(p, 0.1, 1.0) == pytest.approx(0.2 / math.sqrt(0.1))
    with pytest.raises(GridError):
        airy_local(p, 0.1, 1.5)


def test_lattice_airy():
    assert lattice_airy_rescale(4000, 1000, 0.0) == 0.0
    assert lattice_airy_rescale(4000 + 2 ** (4 / 3) * 10, 1000, 0.0) == pytest.approx(1.0)
    x, us = lattice_airy_target(1000, 0.5)
    assert x == 1000 + round(2 ** (5 / 3) * 0.5 * 100)
    assert abs(us - 0.5) <= 1 / (2 ** (5 / 3) * 100)
    # centring uses the snapped u
    centre = 4000 + 2 ** (8 / 3) * us * 100
    L = centre - 2 ** (4 / 3) * us * us * 10
    assert lattice_airy_rescale(L, 1000, 0.5) == pytest.approx(0.0, abs=1e-12)


def test_lattice_delta():
    assert lattice_delta_scales(1.0) == (2.0, 2.0)
    assert lattice_delta_scales(4.0) == (1.5, 1.5)
    assert lattice_delta_rescale(9, 9, 100, 0.4, 1.0, 0.0) == 0.0
    base, x, us = lattice_delta_target(1000, 0.4, 1.0, 0.25)
    assert base == 1000 and x == round(1000 + 0.25 * 1000 ** 0.4)
    assert us == pytest.approx((x - base) / 1000 ** 0.4)


def test_path_builders_vanish_at_zero():
    prof = lambda x: np.floor(2 * np.asarray(x))  # noqa: E731
    d = delta_path(prof, 64, 0.4, 1.0, [0.0, 0.5, 1.0])
    assert d.at(0.0) == 0.0 and d.kind == "delta"
    a = airy_path(prof, 64, [-1.0, 0.0, 1.0])
    assert a.values.shape == (3,)
    assert a.at(0.0) == pytest.approx(airy_rescale(128, 64, 0.0))


def test_rescaled_path_validation():
    with pytest.raises(ValueError):
        RescaledPath("airy", np.array([0.0, 1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        RescaledPath("nope", np.array([0.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        RescaledPath("airy", np.array([1.0, 0.0]), np.array([1.0, 2.0]))
