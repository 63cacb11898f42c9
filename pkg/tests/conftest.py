from __future__ import annotations

import time

import pytest

from areamoments.moment_engine import moment_polynomial

# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES: list[str] = []


MOMENT_SECONDS: dict[int, float] = {}


@pytest.fixture(scope="session")
def moment_polys():
    """P_2 .. P_12 computed once per session (P_12 dominates the cost).

    Wall-clock seconds per order are left in MOMENT_SECONDS.
    """
    polys = {}
    for two_l in range(2, 13, 2):
        start = time.perf_counter()
        polys[two_l] = moment_polynomial(two_l).poly
        MOMENT_SECONDS[two_l] = time.perf_counter() - start
    return polys


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
