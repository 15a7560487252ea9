import numpy as np
import pytest

from lppsim.rng import PointSet, Rect


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_points():
    return random_points


def random_points(rng, k, region=Rect(0.0, 1.0, 0.0, 1.0)):
    x = rng.uniform(region.x0, region.x1, k)
    t = rng.uniform(region.s, region.t, k)
    # uniform(a, b) is [a, b); push off the open lower edge
    x[x == region.x0] = (region.x0 + region.x1) / 2
    t[t == region.s] = (region.s + region.t) / 2
    return PointSet(x, t, region, 1.0)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
