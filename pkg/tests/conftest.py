import numpy as np
import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def record():
    """Collect one pass/fail line per acceptance criterion for the summary."""
    def _record(number, passed, detail, seconds):
        ACCEPTANCE_LINES.append((number, passed, detail, seconds))
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail, seconds in sorted(ACCEPTANCE_LINES):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{number:2d}] {status}  {detail}  ({seconds:.2f} s)")
