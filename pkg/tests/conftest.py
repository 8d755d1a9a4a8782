import cmath
import random

import pytest
from hypothesis import settings

from qcuntz.symalg import Element, RawLetter, S, T, normal_order

settings.register_profile("qcuntz", deadline=None, max_examples=60)
settings.load_profile("qcuntz")

Q03 = cmath.exp(2j * cmath.pi * 0.3)


def random_word(rng: random.Random, n: int, m: int, max_len: int, min_len: int = 0) -> list:
    out = []
    for _ in range(rng.randint(min_len, max_len)):
        fam = rng.choice((S, T))
        idx = rng.randint(1, n if fam == S else m)
        out.append(RawLetter(fam, idx, rng.random() < 0.5))
    return out


def random_element(rng: random.Random, config, n_terms: int = 3, max_len: int = 3) -> Element:
    """Exact element: small Gaussian-integer combination of normal-ordered random words."""
    items = []
    for _ in range(n_terms):
        c = (rng.randint(-3, 3), rng.randint(-3, 3))
        items.append((c, random_word(rng, config.n, config.m, max_len)))
    return normal_order(items, config)


@pytest.fixture
def rng():
    return random.Random(20261016)


# --- acceptance report ------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(criterion: str, label: str, ok: bool, detail: str) -> str:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion:<3} {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
