import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fpplab.distributions import Uniform  # noqa: E402


@pytest.fixture
def narrow():
    return Uniform(1.0, 1.5)


@pytest.fixture
def wide():
    return Uniform(0.1, 1.0)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split("criterion")[1].split()[0])):
            terminalreporter.write_line(line)
