import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from radnodal import Ball, ConstantWeight, ProblemSpec, PurePower, solve_ladder  # noqa: E402
from radnodal.energy import attach_energy  # noqa: E402


def ball_problem(p, N=3):
    return ProblemSpec(Ball(N), ConstantWeight(1.0), PurePower(p))


@pytest.fixture(scope="session")
def cubic_problem():
    return ball_problem(3)


@pytest.fixture(scope="session")
def quadratic_problem():
    return ball_problem(2)


def _ladder(problem, ks, datum_range):
    out = solve_ladder(problem, ks, datum_range=datum_range)
    for k, res in out.items():
        if isinstance(res, Exception):
            raise res
    return {k: attach_energy(problem, res) for k, res in out.items()}


@pytest.fixture(scope="session")
def cubic_ladder(cubic_problem):
    """Solved k = 1..12 for K = 1, N = 3, p = 3."""
    return _ladder(cubic_problem, range(1, 13), (1e-2, 1e4))


@pytest.fixture(scope="session")
def quadratic_ladder(quadratic_problem):
    """Solved k = 1..12 for K = 1, N = 3, p = 2."""
    return _ladder(quadratic_problem, range(1, 13), (1e-2, 1e5))


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict(request):
    """Record one pass/fail line per acceptance criterion, then assert it."""

    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
