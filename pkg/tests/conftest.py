import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from agenda_game.core import canonical_params  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture
def params():
    return canonical_params()


@pytest.fixture
def precise():
    """Canonical committee with delta = tau = 0.999."""
    return canonical_params(discount=0.999, precisions=(0.999,) * 3)


@pytest.fixture
def verdict():
    """Record one pass/fail line per acceptance criterion and print it."""

    def record(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} | {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
