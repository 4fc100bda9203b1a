import importlib.util
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent

EXAMPLE_FAMILY = [(2, 3, 1, 4), (1, 4, 2, 3), (4, 1, 2, 3), (2, 3, 4, 1), (2, 1, 4, 3), (4, 3, 2, 1)]

HAVE_PYSAT = importlib.util.find_spec("pysat") is not None
EXTERNAL_CMD = f"{sys.executable} {HERE / 'dimacs_solver.py'} {{cnf}}" if HAVE_PYSAT else None

needs_pysat = pytest.mark.skipif(not HAVE_PYSAT, reason="python-sat not installed")


@pytest.fixture
def example_family():
    return list(EXAMPLE_FAMILY)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
