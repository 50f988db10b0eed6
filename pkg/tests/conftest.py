import math

import pytest

from domainpert import ProblemSpec, bessel, custom, free, solve_eigenvalues


@pytest.fixture(scope="session")
def bessel06():
    return bessel(0.6, (0.0, 1.0))


@pytest.fixture(scope="session")
def bessel_ground(bessel06):
    return solve_eigenvalues(ProblemSpec(bessel06))[0]


@pytest.fixture(scope="session")
def free_ground():
    V = free((0.0, 1.0))
    return V, solve_eigenvalues(ProblemSpec(V))[0]


@pytest.fixture
def regular_zero():
    """V = 0 with both ends regular (integration may start at x = 0)."""
    return custom("0", (0.0, 1.0), location="none")


PI2 = math.pi ** 2


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
