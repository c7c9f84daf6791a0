import warnings

import numpy as np
import pytest

from beecolony.kinematics import KinematicParams, build_time_matrix
from beecolony.scheduling import ReconstructedTaskWarning, default_layout, default_tasks

# Published 5 x 6 block of the time-cost matrix; [e][u] = e layers, u columns.
TABLE1 = np.array(
    [
        [0.0, 5.47, 7.74, 9.62, 11.50, 13.37],
        [11.62, 11.62, 11.62, 11.62, 11.62, 13.37],
        [22.87] * 6,
        [34.12] * 6,
        [45.37] * 6,
    ]
)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def params():
    return KinematicParams()


@pytest.fixture(scope="session")
def matrix(params):
    return build_time_matrix(params)


@pytest.fixture(scope="session")
def layout():
    return default_layout()


@pytest.fixture(scope="session")
def tasks():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReconstructedTaskWarning)
        return default_tasks()


@pytest.fixture
def verdict():
    """Record a one-line PASS/FAIL verdict for the acceptance summary."""

    def record(name: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
