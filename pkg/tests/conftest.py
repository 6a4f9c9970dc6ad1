import numpy as np
import pytest

from mxlearn.hermitian import exp_map, hermitize
from mxlearn.model import random_model


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, m, scale=1.0):
    A = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return scale * hermitize(A)


def random_profile(rng, model, scale=1.0):
    """A random feasible profile (exp_map of random scores)."""
    return [exp_map(random_hermitian(rng, m, scale), p) for m, p in zip(model.M, model.P)]


@pytest.fixture
def small_model(rng):
    return random_model(rng, 3, 4, [2, 3, 2], P=[1.0, 2.0, 0.5])


_ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one acceptance criterion; returns the boolean for ``assert``.

    Every recorded line is printed immediately and repeated in a terminal
    summary section so that it is visible without ``-s``.
    """

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
