import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from degchain import GrowthModel, degree_distribution  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session", autouse=True)
def _warm_jit():
    # compile the evolution loop once so timing checks measure computation only
    degree_distribution(GrowthModel.constant(1), 20, eps=0.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
