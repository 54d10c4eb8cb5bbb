import numpy as np
import pytest

ACCEPTANCE_LINES = []


def record(number, passed, detail):
    ACCEPTANCE_LINES.append((number, f"criterion {number}: {'PASS' if passed else 'FAIL'} {detail}"))
    print(ACCEPTANCE_LINES[-1][1])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
