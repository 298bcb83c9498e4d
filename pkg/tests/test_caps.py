import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from usurycap import (
    ZERO,
    BenchmarkPath,
    DominatingPureLoan,
    Fault,
    LogFloat,
    Mode,
    Rule,
    Side,
    StreamClass,
    ViolatingRateBracket,
    classify_stream,
    combine,
    discounted_stream,
    dominates,
    encode,
    in_cap_minus,
    in_cap_plus,
    in_floor,
    in_weak_cap,
    irr,
    joint_classify,
    negate,
    npv_float,
    pure_dominator_witness,
    pure_rate,
    refinement_minus,
    refinement_plus,
    relative_classify,
    scale,
    sign_at_rational,
)
from usurycap.errors import InvalidConfig, NonExactFactor, NotApplicable, NotInCapMinus
from usurycap.expoly import Ordering

from conftest import caps, integer_streams, rational_streams, simple_loans, stream

FINITE = {StreamClass.S0, StreamClass.S1, StreamClass.S2, StreamClass.S3}


def check_bracket(x, w: ViolatingRateBracket):
    """A violation witness must hold exactly at its rational sample."""
    p = encode(x)
    assert sign_at_rational(p, w.u_sample) == w.sign
    assert sign_at_rational(p, w.u_lo) == w.sign
    assert sign_at_rational(p, w.u_hi) == w.sign
    assert w.u_lo <= w.u_sample <= w.u_hi
    assert w.s_lo <= w.s_sample <= w.s_hi


class TestCapPlus:
    def test_canada_usurious(self, canada):
        d = in_cap_plus(canada, "0.6")
        assert not d.legal and d.rule is Rule.CAP_PLUS and d.mode is Mode.EXACT
        w = d.witness
        check_bracket(canada, w)
        assert w.s_lo >= math.log(1.6) - 1e-15
        assert w.s_lo <= math.log(1.6) + 0.1 and w.s_hi <= math.log(1.7)
        assert npv_float(canada, w.s_sample) > 0

    def test_canada_boundary(self, canada):
        d = in_cap_plus(canada, "0.7")
        assert d.legal and d.witness is None

    @pytest.mark.parametrize("cap", ["0.1", "0.6", "10"])
    def test_application_fee(self, fee_loan, cap):
        d = in_cap_plus(fee_loan, cap)
        assert not d.legal
        check_bracket(fee_loan, d.witness)
        assert npv_float(fee_loan, d.witness.s_sample) > 0

    def test_refund(self, refund_loan):
        d = in_cap_plus(refund_loan, "0.6")
        assert not d.legal
        check_bracket(refund_loan, d.witness)

    def test_zero(self):
        assert in_cap_plus(ZERO, "0.6").legal

    def test_approximate(self, canada):
        d = in_cap_plus(canada, LogFloat(math.log(1.6)))
        assert d.mode is Mode.APPROXIMATE and not d.legal and d.proven
        assert npv_float(canada, d.witness.s_sample) > 0
        d = in_cap_plus(canada, LogFloat(math.log(1.8)))
        assert d.mode is Mode.APPROXIMATE and d.legal and not d.proven


class TestCapMinus:
    def test_examples(self, canada):
        d = in_cap_minus(canada, "0.7")
        assert d.legal
        assert isinstance(d.witness, DominatingPureLoan) and d.witness.loan == canada
        assert not in_cap_minus(canada, "0.6").legal
        assert in_cap_minus(ZERO, "0.3").legal

    def test_irrational_cutoff(self, fee_loan):
        assert not in_cap_minus(fee_loan, "0.6").legal
        x = stream((0, -100), (Fraction(1, 2), 50), (1, 60))
        # 1.44 ** -(1/2) = 1/1.2 is rational, 1.5 ** -(1/2) is not
        assert in_cap_minus(x, "0.44").legal is (npv_float(x, math.log(1.44)) <= 0)
        assert in_cap_minus(x, "0.5").legal is (npv_float(x, math.log(1.5)) <= 0)

    def test_float(self, canada):
        d = in_cap_minus(canada, LogFloat(math.log(1.8)))
        assert d.legal and d.mode is Mode.APPROXIMATE


class TestWeakCap:
    def test_examples(self, canada):
        assert in_weak_cap(stream((0, 1), (1, -3), (2, 2)), 0).legal
        d = in_weak_cap(canada, "0.6")
        assert not d.legal
        check_bracket(canada, d.witness)
        assert in_weak_cap(stream((0, -1)), "0.2").legal

    def test_irrational_cutoff_witness(self, fee_loan):
        d = in_weak_cap(fee_loan, "0.6")
        assert not d.legal
        check_bracket(fee_loan, d.witness)


class TestFloor:
    def test_examples(self, joint_x, canada):
        assert in_floor(joint_x, "0.03").legal
        assert in_floor(canada, "0.03").legal
        d = in_floor(negate(canada), "0.03")
        assert not d.legal and d.witness.sign == -1
        check_bracket(negate(canada), d.witness)

    def test_zero_floor_is_total(self):
        assert in_floor(stream((0, -1), (1, 1)), 0).legal
        assert not in_floor(stream((0, -1), (1, Fraction(1, 2))), 0).legal

    def test_interior_dip(self):
        # positive at s = 0 and at the floor rate, negative in between
        x = stream((0, 1), (1, Fraction(-21, 10)), (2, Fraction(11, 10)))
        assert npv_float(x, 0) >= 0
        assert not in_floor(x, 1).legal

    def test_float(self, joint_x):
        d = in_floor(negate(joint_x), LogFloat(math.log(1.03)))
        assert d.mode is Mode.APPROXIMATE and not d.legal


class TestJoint:
    def test_fault_and_swap(self, joint_x):
        d = joint_classify(joint_x, "0.03", "0.6")
        assert not d.legal and d.at_fault is Fault.PARTY_X and d.oriented_side is Side.NEITHER
        d = joint_classify(negate(joint_x), "0.03", "0.6")
        assert d.at_fault is Fault.PARTY_Y

    def test_legal(self):
        d = joint_classify(stream((0, -100), (1, 150)), "0.03", "0.6")
        assert d.legal and d.oriented_side is Side.AS_GIVEN and d.at_fault is Fault.NONE
        d = joint_classify(stream((0, 100), (1, -150)), "0.03", "0.6")
        assert d.legal and d.oriented_side is Side.NEGATED

    def test_zero(self):
        d = joint_classify(ZERO, "0.03", "0.6")
        assert d.legal and d.oriented_side is Side.AS_GIVEN

    def test_below_floor_blames_borrower_side(self):
        # a 1% loan: the lender's rights are violated by the floor
        d = joint_classify(stream((0, -100), (1, 101)), "0.03", "0.6")
        assert not d.legal and d.at_fault is Fault.PARTY_Y

    def test_bad_config(self, canada):
        with pytest.raises(InvalidConfig):
            joint_classify(canada, "0.6", "0.03")

    @given(integer_streams(5, 6), st.sampled_from([("0.03", "0.6"), ("0", "0.1"), ("0.1", "1")]))
    def test_antisymmetry_and_swap(self, x, rates):
        a = joint_classify(x, *rates)
        b = joint_classify(negate(x), *rates)
        assert a.legal == b.legal
        assert b.at_fault is a.at_fault.swapped
        if a.legal:
            assert a.at_fault is Fault.NONE and a.oriented_side is not Side.NEITHER
            both = (a.checks["floor_x"].legal and a.checks["cap_x"].legal) + (
                a.checks["floor_neg"].legal and a.checks["cap_neg"].legal
            )
            assert both == 1


class TestWitness:
    def test_dominator_examples(self, canada):
        assert pure_dominator_witness(canada, "0.7") == canada
        y = pure_dominator_witness(stream((0, -100), (1, 160)), "0.7")
        assert y == stream((0, -100), (1, 160), (2, 17))
        assert pure_rate(y).compare_effective(Fraction(7, 10)) is Ordering.EQUAL

    def test_errors(self, canada):
        with pytest.raises(NotApplicable):
            pure_dominator_witness(ZERO, "0.7")
        with pytest.raises(NotInCapMinus):
            pure_dominator_witness(canada, "0.6")
        with pytest.raises(NonExactFactor):
            pure_dominator_witness(stream((0, -100), (Fraction(1, 2), 100)), "0.1")

    @given(integer_streams(6, 10), caps)
    def test_soundness(self, x, rho):
        d = in_cap_minus(x, rho)
        if d.legal and not x.is_zero():
            y = d.witness.loan
            assert dominates(x, y)
            assert classify_stream(y) in (StreamClass.S0, StreamClass.S1)
            assert pure_rate(y).compare_effective(rho) is Ordering.EQUAL
        c = in_cap_plus(x, rho)
        if not c.legal:
            check_bracket(x, c.witness)


class TestRelative:
    def test_template_legal(self):
        b = BenchmarkPath(((0, "0.02"), (1, "0.05")))
        d = relative_classify(stream((0, -100), (1, 103)), b, "0.6")
        assert d.legal and d.relative and d.audit

    def test_fee_template(self, fee_loan):
        d = relative_classify(fee_loan, BenchmarkPath.constant("0.1"), "0.6")
        assert not d.legal and d.audit is None  # dates are not whole periods

    @given(integer_streams(5, 6), st.sampled_from([Fraction(1, 20), Fraction(1, 10)]), caps)
    def test_constant_benchmark(self, x, c, rho):
        d = relative_classify(x, BenchmarkPath.constant(c), rho)
        assert d.legal == in_cap_plus(x, rho).legal
        assert d.audit is True


class TestProperties:
    @given(integer_streams(), caps)
    def test_sandwich(self, x, rho):
        minus, plus, weak = in_cap_minus(x, rho, witness=False), in_cap_plus(x, rho), in_weak_cap(x, rho)
        assert (not minus.legal) or plus.legal
        assert (not plus.legal) or weak.legal

    @given(integer_streams(), caps, caps)
    def test_monotone(self, x, r, s):
        r, s = min(r, s), max(r, s)
        if in_cap_plus(x, r).legal:
            assert in_cap_plus(x, s).legal
        if in_cap_minus(x, r, witness=False).legal:
            assert in_cap_minus(x, s, witness=False).legal

    @given(integer_streams(5), integer_streams(5), caps, st.fractions(min_value=Fraction(1, 50), max_value=50))
    def test_cone(self, x, y, rho, lam):
        for test in (in_cap_plus, in_weak_cap, lambda a, r: in_cap_minus(a, r, witness=False)):
            if test(x, rho).legal and test(y, rho).legal:
                assert test(combine(x, y), rho).legal
            assert test(scale(x, lam), rho).legal == test(x, rho).legal

    @given(integer_streams(5), integer_streams(5), caps)
    def test_dominance(self, x, y, rho):
        lo = combine(x, stream((0, -1))) if dominates(x, y) is False else x
        if dominates(lo, y):
            for test in (in_cap_plus, in_weak_cap, lambda a, r: in_cap_minus(a, r, witness=False)):
                if test(y, rho).legal:
                    assert test(lo, rho).legal

    @given(integer_streams(6, 8), caps)
    def test_stability(self, x, rho):
        xr = discounted_stream(x, rho)
        assert in_cap_plus(x, rho).legal == in_cap_plus(xr, 0).legal
        assert in_cap_minus(x, rho, witness=False).legal == in_cap_minus(xr, 0, witness=False).legal

    @given(st.one_of(simple_loans(), st.builds(combine, simple_loans(), simple_loans())), caps)
    def test_consistency_with_irr(self, x, rho):
        cls = classify_stream(x)
        assume(cls in FINITE)
        legal = irr(x).compare_effective(rho) <= 0
        assert in_cap_plus(x, rho).legal == legal
        if cls in (StreamClass.S0, StreamClass.S1):
            assert in_cap_minus(x, rho, witness=False).legal == legal

    @given(integer_streams(), caps)
    def test_refinement_equivalence(self, x, rho):
        assert in_cap_plus(x, rho).legal == (refinement_plus(x).compare_effective(rho) <= 0)
        assert in_cap_minus(x, rho, witness=False).legal == (refinement_minus(x).compare_effective(rho) <= 0)

    @given(rational_streams(), caps)
    def test_sandwich_rational_times(self, x, rho):
        minus, plus, weak = in_cap_minus(x, rho, witness=False), in_cap_plus(x, rho), in_weak_cap(x, rho)
        assert (not minus.legal) or plus.legal
        assert (not plus.legal) or weak.legal
        assert plus.legal == (refinement_plus(x).compare_effective(rho) <= 0)
