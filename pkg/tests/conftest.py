import numpy as np
import pytest

from helpers import ACCEPTANCE_LINES
from syncnet.generators import path
from syncnet.objective import ProblemSpec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def path7_spec():
    return ProblemSpec(path(7), r=1.0)
