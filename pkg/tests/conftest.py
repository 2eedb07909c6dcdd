import random

import pytest
from hypothesis import strategies as st

from k0surf.k0 import K0Class
from k0surf.pic import PicClass

ACCEPTANCE_LINES: list[str] = []

small = st.integers(min_value=-6, max_value=6)
pic_classes = st.lists(small, min_size=9, max_size=9).map(PicClass)


@st.composite
def lattice_classes(draw):
    """Random members of ch(K_0(S)) (z forced to the right parity)."""
    x = draw(small)
    y = draw(pic_classes)
    z = draw(small)
    if (z - sum(y)) % 2:
        z += 1
    return K0Class(x, y, z)


def random_lattice_class(rng: random.Random, bound: int = 6) -> K0Class:
    y = PicClass(rng.randint(-bound, bound) for _ in range(9))
    z = rng.randint(-bound, bound)
    if (z - sum(y)) % 2:
        z += 1
    return K0Class(rng.randint(-bound, bound), y, z)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
