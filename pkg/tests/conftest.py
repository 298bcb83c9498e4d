from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from usurycap import CashFlowStream, normalize

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


def stream(*pairs):
    return CashFlowStream.of(pairs)


@pytest.fixture
def canada():
    return stream((0, -100), (1, 170))


@pytest.fixture
def fee_loan():
    return stream((0, 1), (Fraction(1, 365), -100), (Fraction(366, 365), 170))


@pytest.fixture
def refund_loan():
    return stream((0, -100), (1, 170), (Fraction(366, 365), -1))


@pytest.fixture
def credit_x():
    return stream((0, -1), (1, 5))


@pytest.fixture
def credit_y():
    return stream((6, -1000), (7, 1500))


@pytest.fixture
def joint_x():
    return stream((0, 1), (1, -2), (2, 1))


amounts = st.fractions(min_value=-10_000, max_value=10_000, max_denominator=50).filter(lambda a: a != 0)


@st.composite
def integer_streams(draw, max_len=8, max_time=12):
    """Streams with integer times, as used by the property criteria."""
    n = draw(st.integers(min_value=1, max_value=max_len))
    times = draw(st.lists(st.integers(0, max_time), min_size=n, max_size=n, unique=True))
    values = draw(st.lists(amounts, min_size=n, max_size=n))
    return normalize(zip(times, values))


@st.composite
def rational_streams(draw, max_len=5):
    n = draw(st.integers(min_value=1, max_value=max_len))
    times = draw(
        st.lists(st.fractions(min_value=0, max_value=4, max_denominator=4), min_size=n, max_size=n, unique=True)
    )
    values = draw(st.lists(amounts, min_size=n, max_size=n))
    return normalize(zip(times, values))


caps = st.sampled_from([Fraction(0), Fraction(1, 20), Fraction(1, 10), Fraction(3, 10), Fraction(3, 5), Fraction(1), Fraction(4)])


@st.composite
def simple_loans(draw):
    """An advance followed by one or two repayments: always in S1."""
    t0 = draw(st.integers(0, 6))
    gaps = draw(st.lists(st.integers(1, 4), min_size=1, max_size=2))
    advance = draw(st.integers(1, 1000))
    pays = draw(st.lists(st.integers(1, 1000), min_size=len(gaps), max_size=len(gaps)))
    pairs, t = [(t0, -advance)], t0
    for g, p in zip(gaps, pays):
        t += g
        pairs.append((t, p))
    return stream(*pairs)
