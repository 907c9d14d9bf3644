import random
from fractions import Fraction

import pytest

from ncg.scalars import Scalar

ACCEPTANCE: dict = {}


def rand_q(rng: random.Random, span: int = 7) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, 4))


def random_bindings(symbols, rng: random.Random, span: int = 7) -> dict:
    """Random exact values, keeping conjugate partners consistent."""
    out = {}
    for s in sorted(symbols, key=lambda s: s.uid):
        if s in out:
            continue
        if s.is_real:
            out[s] = Scalar.const(rand_q(rng, span))
        else:
            v = Scalar.gauss(rand_q(rng, span), rand_q(rng, span))
            out[s] = v
            out[s.conj()] = v.conj()
    return out


def mat_symbols(*mats) -> set:
    out = set()
    for m in mats:
        out |= m.symbols()
    return out


@pytest.fixture
def rng():
    return random.Random(20240521)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
