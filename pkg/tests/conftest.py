"""Shared fixtures: the default 1D geometry at full and reduced
resolution, realized weights, and the equilibria reused across suites.
"""

import numpy as np
import pytest

import neharilab as nl

# default 1D geometry: Omega = (0, 1), Omega0 = (0.4, 0.7), plateau b0 = 1
OMEGA0 = ((0.4, 0.7),)


def make_grid(n):
    spec = nl.DomainSpec(dimension=1, extent=(1.0,), resolution=(n,),
                         omega0=OMEGA0)
    return nl.build_grid(spec)


def make_params(grid, lam, nu=3.0, amplitude=1.0):
    b = nl.build_weight(grid, nl.WeightSpec(profile="plateau",
                                            amplitude=amplitude))
    return nl.ProblemParams(lam=lam, nu=nu, b=b)


@pytest.fixture(scope="session")
def grid299():
    return make_grid(299)


@pytest.fixture(scope="session")
def grid149():
    return make_grid(149)


@pytest.fixture(scope="session")
def params20(grid299):
    return make_params(grid299, 20.0)


@pytest.fixture(scope="session")
def params60(grid299):
    return make_params(grid299, 60.0)


@pytest.fixture(scope="session")
def params120(grid299):
    return make_params(grid299, 120.0)


@pytest.fixture(scope="session")
def phi20(grid299, params20):
    return nl.solve_positive(grid299, params20)


@pytest.fixture(scope="session")
def phi60(grid299, params60):
    return nl.solve_positive(grid299, params60)


@pytest.fixture(scope="session")
def mp_path60(grid299, params60, phi60):
    return nl.build_mp_path(grid299, params60, phi60.field)


@pytest.fixture(scope="session")
def ustar60(grid299, params60, mp_path60):
    return nl.mountain_pass(grid299, params60, mp_path60)


# one pass/fail line per acceptance criterion, echoed after the run
_acceptance_lines = []


def record_acceptance(number, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    line = f"criterion {number:02d} {name}: {status}"
    if detail:
        line += f"  ({detail})"
    _acceptance_lines.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)


def random_low_mode_field(grid, spectrum, rng, lam):
    """A random field dominated by modes below lam, so that A < 0 and
    (generically) B < 0: the projectable sign pattern."""
    ev = spectrum.eigenvalues
    low = np.flatnonzero(ev < lam)
    assert low.size > 0
    coeffs = np.zeros(spectrum.k)
    coeffs[low] = rng.uniform(1.0, 2.0, low.size) * rng.choice([-1.0, 1.0],
                                                               low.size)
    high = np.setdiff1d(np.arange(spectrum.k), low)
    coeffs[high] = 0.05 * rng.standard_normal(high.size)
    return coeffs @ spectrum.eigenfields
