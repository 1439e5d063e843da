import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from tslab.vectors import SparseVector

ACCEPTANCE_LINES: list = []


def random_vector(rng: random.Random, max_index: int = 7, density: float = 0.7, max_num: int = 9) -> SparseVector:
    coords = {}
    for i in range(1, max_index + 1):
        if rng.random() < density:
            coords[i] = Fraction(rng.randint(-max_num, max_num), rng.randint(1, 4))
    return SparseVector.from_mapping(coords)


rationals = st.fractions(min_value=-8, max_value=8, max_denominator=6)


def vectors(max_index: int = 7, max_size: int = 6):
    return st.dictionaries(st.integers(1, max_index), rationals, max_size=max_size).map(SparseVector.from_mapping)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
