import random

import pytest
from hypothesis import HealthCheck, settings

from sdcodes import gf2core
from sdcodes.gf2core import BinaryCode

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_code(rng: random.Random, n: int, k: int) -> BinaryCode:
    rows = [rng.getrandbits(n) for _ in range(k)]
    return BinaryCode.from_rows(rows, n)


def random_self_dual(rng: random.Random, n: int) -> BinaryCode:
    """Grow a self-orthogonal code by even vectors of C^perp outside C until k = n/2."""
    assert n % 2 == 0
    code = BinaryCode.zero(n)
    while code.k < n // 2:
        perp = gf2core.dual(code)
        while True:
            v = 0
            for r in perp.rows:
                if rng.getrandbits(1):
                    v ^= r
            if v and gf2core.weight(v) % 2 == 0 and v not in code:
                break
        code = BinaryCode.from_rows(code.rows + (v,), n)
    return code


def random_perm(rng: random.Random, n: int):
    p = list(range(n))
    rng.shuffle(p)
    return tuple(p)


def h_matrix_code() -> BinaryCode:
    """<(I4 | J+I4)>, the [8,4,4] extended Hamming code."""
    return BinaryCode.from_strings(["10000111", "01001011", "00101101", "00011110"])


@pytest.fixture
def rng():
    return random.Random(20240515)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE, key=str):
        status, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"CRITERION {number}: {status} - {detail}")
