import warnings
from pathlib import Path

import pytest

from genhw.instance import build_spec

ROOT = Path(__file__).resolve().parent.parent
INSTANCES = ROOT / "instances"

FERMAT = [(3, 0, 0), (0, 3, 0), (0, 0, 3)]


def make(p, a, n, d, exponents, coeffs):
    """build_spec without the zero-coefficient warning."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_spec(p, a, n, d, exponents, coeffs)


def fermat_cubic(p):
    return make(p, 1, 2, 3, FERMAT, [1, 1, 1])


def coordinate_product(p, a, n):
    """x_1 x_2 ... x_n = 0 in P^n (the variable x_0 does not appear)."""
    return make(p, a, n, n, [(0,) + (1,) * n], [1])


@pytest.fixture
def instances_dir():
    return INSTANCES


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES: dict[int, str] = {}


def record_acceptance(number: int, passed: bool, message: str) -> None:
    line = f"ACCEPTANCE {number}: {'PASS' if passed else 'FAIL'}  {message}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
