import numpy as np
import pytest

from holonomy.models import random_hermitian


def taylor_expm(a, terms=60):
    """exp(a) by its power series; independent of any eigensolver."""
    out = np.eye(a.shape[0], dtype=np.complex128)
    term = np.eye(a.shape[0], dtype=np.complex128)
    for n in range(1, terms):
        term = term @ a / n
        out = out + term
    return out


def circ(a, b):
    return abs((a - b + np.pi) % (2 * np.pi) - np.pi)


@pytest.fixture
def rand_h():
    return random_hermitian


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
