import numpy as np
import pytest

from thermal_ft.experiment import default_config
from thermal_ft.grid import Grid
from thermal_ft.objects import rect_object
from thermal_ft.source import SourceConfig

# Coarser grids than the defaults, still Nyquist-valid under the default geometry;
# used by Monte Carlo property tests to keep them fast.
SMALL_SOURCE = Grid.from_extent(3000.0, 768)
SMALL_OBJECT = Grid.from_extent(1200.0, 512)
SMALL_DETECTOR = Grid(0.0, 2.0, 401)


def small_config(transmittance=None, seed=7, **overrides):
    overrides.setdefault("source", SourceConfig(SMALL_SOURCE, 1.0, seed))
    overrides.setdefault("detector_grid", SMALL_DETECTOR)
    return default_config(transmittance, object_grid=SMALL_OBJECT, **overrides)


def asymmetric_bar(xi):
    return rect_object(xi, 100.0, 50.0)


@pytest.fixture(scope="session")
def full_config():
    return default_config()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
