import random
from fractions import Fraction

import pytest
from hypothesis import settings

from hyp4f3.symbolic import A, B, C, D, E

PSI = D + E - A - B - C - 1


def random_rational_point(rng: random.Random, n: int = 5) -> tuple:
    return tuple(Fraction(rng.randint(-40, 40), rng.randint(1, 13)) + Fraction(1, 97) for _ in range(n))


@pytest.fixture
def rng():
    return random.Random(20240601)


settings.register_profile("repo", deadline=None, derandomize=True, print_blob=True)
settings.load_profile("repo")


# criterion number -> (passed, description); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, desc = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {desc}")
