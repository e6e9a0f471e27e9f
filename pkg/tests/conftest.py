import numpy as np
import pytest

from ndlomb import _backend
from ndlomb.types import SampleSet


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_samples(rng, n, m, span=10.0, noise=1.0):
    coords = rng.uniform(-span, span, size=(n, m))
    values = rng.normal(0.0, noise, size=n)
    return SampleSet(coords, values)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
