import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from cwlocate.expr import parse_slick
from cwlocate.generate import random_classic, random_slick

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# expected edges of the seven-vertex example; the expression names its hub f
# instead of g, so tests compare after swapping those two names
SEVEN_EDGES = {"ab", "be", "bd", "de", "cd", "fg", "ag", "bg", "dg", "cg"}


def load(name):
    return parse_slick((FIXTURES / name).read_text())


@pytest.fixture
def seven():
    return load("seven.slick")


@pytest.fixture
def p4():
    return load("p4.slick")


@pytest.fixture
def k2():
    return load("k2.slick")


def seeded_slick(seed, max_n=12, max_k=4):
    rng = random.Random(seed)
    return random_slick(rng.randint(1, max_n), rng.randint(1, max_k), rng)


@st.composite
def slick_exprs(draw, max_n=12, max_k=4):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    return random_slick(n, k, draw(st.integers(0, 2**32)))


@st.composite
def classic_exprs(draw, max_n=12, max_k=4):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    return random_classic(n, k, draw(st.integers(0, 2**32)))


rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)
SHIFTS = [Fraction(x) for x in ("-2", "-1", "-1/2", "0", "1/2", "1", "2")]
