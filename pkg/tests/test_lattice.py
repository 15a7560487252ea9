import numpy as np
import pytest

from lppsim.lattice import (
    LatticeField,
    lattice_last_passage,
    lattice_oracle,
    lattice_row_profile,
    sample_exp_field,
)
from lppsim.lpp import CoverageError
from lppsim.rng import SeedSpec


def test_two_by_two():
    w = np.zeros((2, 2))
    w[0, 1] = 0.5  # [1]_0
    w[1, 0] = 1.2  # [0]_1
    w[1, 1] = 0.3
    f = LatticeField(w)
    assert lattice_last_passage(f, (0, 0), (1, 1)) == pytest.approx(1.5)
    assert lattice_oracle(f, (0, 0), (1, 1)) == pytest.approx(1.5)


def test_single_step():
    f = LatticeField(np.array([[7.0, 0.25]]))
    assert lattice_last_passage(f, (0, 0), (1, 0)) == 0.25


def test_same_point_rejected():
    f = LatticeField(np.ones((3, 3)))
    with pytest.raises(ValueError):
        lattice_last_passage(f, (1, 1), (1, 1))
    with pytest.raises(CoverageError):
        lattice_last_passage(f, (0, 0), (3, 1))


def test_rejects_negative_weights():
    with pytest.raises(ValueError):
        LatticeField(np.array([[1.0, -0.1]]))


def test_oracle_equivalence_all_small_grids(rng):
    for rows in range(1, 8):
        for cols in range(1, 8):
            if rows == cols == 1:
                continue
            f = LatticeField(rng.exponential(size=(rows, cols)))
            end = (cols - 1, rows - 1)
            assert lattice_last_passage(f, (0, 0), end) == pytest.approx(
                lattice_oracle(f, (0, 0), end), rel=1e-12)


def test_oracle_interior_start(rng):
    f = LatticeField(rng.exponential(size=(6, 6)))
    assert lattice_last_passage(f, (1, 2), (5, 5)) == pytest.approx(lattice_oracle(f, (1, 2), (5, 5)))


def test_row_profile_matches_single_targets(rng):
    f = sample_exp_field(30, 40, SeedSpec(2, 0))
    prof = lattice_row_profile(f, 20, (5, 39))
    for x in rng.integers(5, 40, 5):
        assert prof[x - 5] == pytest.approx(lattice_last_passage(f, (0, 0), (x, 20)), rel=1e-12)


def test_row_profile_monotone_in_weights():
    f = sample_exp_field(10, 10, SeedSpec(2, 1))
    w = f.weights.copy()
    w[4, 3] *= 0.5
    lower = lattice_row_profile(LatticeField(w), 9, (0, 9))
    assert np.all(lattice_row_profile(f, 9, (0, 9)) >= lower)


def test_row_profile_single_row_is_prefix_sum():
    w = np.array([[5.0, 1.0, 2.0, 3.0]])
    prof = lattice_row_profile(LatticeField(w), 0, (1, 3))
    assert prof.tolist() == [1.0, 3.0, 6.0]


def test_superadditive(rng):
    f = LatticeField(rng.exponential(size=(12, 12)))
    for _ in range(30):
        c = tuple(rng.integers(1, 10, 2))
        full = lattice_last_passage(f, (0, 0), (11, 11))
        assert lattice_last_passage(f, (0, 0), c) + lattice_last_passage(f, c, (11, 11)) <= full + 1e-12


def test_exp_moments():
    w = sample_exp_field(1000, 1000, SeedSpec(3, 0)).weights
    assert abs(w.mean() - 1) <= 0.01
    assert abs(w.var() - 1) <= 0.02
    assert np.all(w >= 0) and np.all(np.isfinite(w))


def test_field_determinism():
    a = sample_exp_field(5, 7, SeedSpec(3, 1)).weights
    b = sample_exp_field(5, 7, SeedSpec(3, 1)).weights
    assert np.array_equal(a, b)
