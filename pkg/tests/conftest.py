from __future__ import annotations

import pytest

from chordknot.codec import parse


def diag(*circles: str):
    """Diagram from one string per circle, e.g. diag("1+ 2- 1 2")."""
    return parse("\n".join("circle: " + c for c in circles))


@pytest.fixture
def trefoil():
    return diag("1+ 2+ 3+ 1 2 3")


@pytest.fixture
def trefoil_mirror():
    return diag("1- 2- 3- 1 2 3")


@pytest.fixture
def unknot():
    return diag("")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
