import numpy as np
import pytest

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record an acceptance criterion outcome for the end-of-run table."""

    def record(number, passed, detail):
        _CRITERIA[number] = (bool(passed), detail)
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, detail = _CRITERIA[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
