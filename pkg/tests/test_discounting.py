import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from usurycap import (
    ZERO,
    BenchmarkPath,
    Effective,
    LogFloat,
    combine,
    compound_factor,
    discounted_partials_float,
    discounted_stream,
    float_transform,
    npv_float,
    parse_percent,
    scale,
)
from usurycap.discounting import float_transform_approx, rational_power
from usurycap.errors import InvalidRate, NotAligned

from conftest import integer_streams, rational_streams, stream


class TestRates:
    def test_effective(self):
        r = Effective("0.6")
        assert r.rho == Fraction(3, 5)
        assert r.log_rate == pytest.approx(math.log(1.6), abs=1e-15)
        assert r.exact

    def test_effective_bounds(self):
        with pytest.raises(InvalidRate):
            Effective(-1)

    def test_log_float(self):
        r = LogFloat(math.log(1.6))
        assert not r.exact
        assert r.effective == pytest.approx(0.6)
        with pytest.raises(InvalidRate):
            LogFloat(float("inf"))

    def test_parse_percent(self):
        assert parse_percent("60%") == Fraction(3, 5)
        assert parse_percent(" 3 % ") == Fraction(3, 100)
        assert parse_percent("0.1") == Fraction(1, 10)
        assert parse_percent("12.5%") == Fraction(1, 8)


class TestNpv:
    def test_at_zero(self, canada):
        assert npv_float(canada, 0) == 70.0

    def test_at_irr(self, canada):
        assert abs(npv_float(canada, math.log(1.7))) <= 1e-12

    def test_line_of_credit_root(self, credit_x, credit_y):
        # F_s is 0 at s = 0.4366; at the rounded 0.44 it is small relative to the amounts
        assert abs(npv_float(combine(credit_x, credit_y), 0.44)) <= 2e-2 * 1500

    def test_partials(self, canada):
        p = discounted_partials_float(canada, math.log(1.7))
        assert p[0] == -100 and abs(p[1]) < 1e-12
        p = discounted_partials_float(canada, math.log(1.6))
        assert p == pytest.approx([-100, 6.25], abs=1e-12)
        assert discounted_partials_float(ZERO, 1.0) == []

    def test_overflow_saturates(self, caplog):
        x = stream((0, 1), (1000, -1))
        v = npv_float(x, -1000.0)
        assert v == -math.inf
        assert "overflow" in caplog.text

    @given(rational_streams(), rational_streams(), st.floats(-1, 3))
    def test_additive(self, x, y, s):
        lhs = npv_float(combine(x, y), s)
        rhs = npv_float(x, s) + npv_float(y, s)
        scale_ = sum(abs(float(a)) * math.exp(-s * float(t)) for t, a in x.transactions + y.transactions)
        assert abs(lhs - rhs) <= 1e-9 * (abs(lhs) + 1 + scale_)

    @given(rational_streams(), st.fractions(min_value=Fraction(1, 10), max_value=10), st.floats(-1, 3))
    def test_homogeneous(self, x, lam, s):
        lhs = npv_float(scale(x, lam), s)
        rhs = float(lam) * npv_float(x, s)
        scale_ = float(lam) * sum(abs(float(a)) * math.exp(-s * float(t)) for t, a in x.transactions)
        assert abs(lhs - rhs) <= 1e-12 * (abs(rhs) + scale_) + 1e-300

    @given(rational_streams(), st.floats(-1, 3))
    def test_partials_end_in_npv(self, x, s):
        p = discounted_partials_float(x, s)
        assert p[-1] == npv_float(x, s)


class TestCompounding:
    def test_constant_ten_percent(self):
        assert compound_factor(BenchmarkPath.constant("0.1"), 2) == Fraction(121, 100)

    def test_zero_benchmark(self):
        b = BenchmarkPath.constant(0)
        assert compound_factor(b, 7) == 1
        assert compound_factor(b, Fraction(1, 3)) == 1

    def test_two_segments(self):
        b = BenchmarkPath(((0, "0.1"), (1, "0.2")))
        assert compound_factor(b, 2) == Fraction(33, 25)
        assert compound_factor(b, 1) == Fraction(11, 10)
        assert compound_factor(b, 0) == 1

    def test_non_aligned(self):
        with pytest.raises(NotAligned):
            compound_factor(BenchmarkPath.constant("0.1"), Fraction(1, 2))

    def test_aligned_fractional_time_with_perfect_power(self):
        # 1.21 ** (1/2) = 1.1 is rational
        assert compound_factor(BenchmarkPath.constant("0.21"), Fraction(1, 2)) == Fraction(11, 10)

    def test_from_index(self):
        b = BenchmarkPath.from_index([(0, 100), (1, 110), (3, "133.1")])
        assert b.segments == ((0, Fraction(1, 10)), (1, Fraction(1, 10)))

    def test_path_validation(self):
        with pytest.raises(ValueError):
            BenchmarkPath(((1, "0.1"),))
        with pytest.raises(ValueError):
            BenchmarkPath(((0, "0.1"), (0, "0.2")))
        with pytest.raises(InvalidRate):
            BenchmarkPath(((0, -2),))

    def test_rational_power(self):
        assert rational_power(Fraction(4, 9), Fraction(-1, 2)) == Fraction(3, 2)
        assert rational_power(Fraction(2), Fraction(1, 2)) is None


class TestFloatTransform:
    def test_identity_for_zero_rate(self, canada):
        assert float_transform(canada, BenchmarkPath.constant(0)) == canada

    def test_example(self):
        x = stream((0, -100), (2, 121))
        assert float_transform(x, BenchmarkPath.constant("0.1")) == stream((0, -100), (2, Fraction(14641, 100)))

    @given(integer_streams(5, 6), st.sampled_from([Fraction(1, 20), Fraction(1, 10)]))
    def test_constant_benchmark_is_negative_rate_discounting(self, x, c):
        # compounding at c equals discounting at the rate ln(1/(1+c)) - 1
        assert float_transform(x, BenchmarkPath.constant(c)) == discounted_stream(x, 1 / (1 + c) - 1)

    @given(integer_streams(4, 6), integer_streams(4, 6))
    def test_linear(self, x, y):
        b = BenchmarkPath(((0, "0.1"), (2, "0.05"), (4, "-0.02")))
        assert float_transform(combine(x, y), b) == combine(float_transform(x, b), float_transform(y, b))

    def test_approx_variant(self):
        x = stream((0, -1), (Fraction(1, 2), 2))
        with pytest.raises(NotAligned):
            float_transform(x, BenchmarkPath.constant("0.1"))
        approx = float_transform_approx(x, BenchmarkPath.constant("0.1"))
        assert approx[1][1] == pytest.approx(2 * math.sqrt(1.1))

    def test_discounted_stream(self, canada):
        assert discounted_stream(canada, "0.7") == stream((0, -100), (1, 100))
        with pytest.raises(NotAligned):
            discounted_stream(stream((Fraction(1, 2), 1)), "0.1")
