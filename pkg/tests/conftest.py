import numpy as np
import pytest

from gamow1d import PotentialSpec, refine_pole
from gamow1d.resonances import analytic_resonances

ACCEPTANCE_LOG: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)


def lowest_pole(spec, label=None):
    """Newton-refined pole seeded from the analytic estimate with ``label``."""
    seeds = analytic_resonances(spec, 12)
    seed = seeds[0] if label is None else next(s for s in seeds if s.index == label)
    return refine_pole(spec, seed.k).k


def fd2(f, x, h=1e-3):
    """Five-point second derivative."""
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def away_from(x, points, margin):
    x = np.asarray(x, dtype=float)
    keep = np.ones_like(x, dtype=bool)
    for p in points:
        keep &= np.abs(x - p) > margin
    return x[keep]


@pytest.fixture(scope="session")
def well16():
    return PotentialSpec.well(16.0, 5.0)


@pytest.fixture(scope="session")
def well16_pole(well16):
    return refine_pole(well16, 1.75 - 0.45j).k


@pytest.fixture(scope="session")
def barrier10():
    return PotentialSpec.barrier(1000.0, 10.0)
