"""Legality decisions for caps and floors, alone or combined.

Every exact decision reduces to sign questions about the stream polynomial
``P`` on an interval of ``u`` whose ends are ``0``, ``1`` or the algebraic
cutoff ``u* = (1 + rho) ** (-1/q)``:

* cap plus:  ``P <= 0`` on ``(0, u*]``
* cap minus: every running-sum polynomial ``<= 0`` at ``u*``
* weak cap:  ``P(u*) <= 0``
* floor:     ``P >= 0`` on ``[u*, 1]``

Between consecutive distinct roots ``P`` has constant sign, so one exact
evaluation per gap settles an interval question.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import List, Optional, Union

from . import kernels, oracle, polyz
from .cashflow import CashFlowStream, atom, combine, earliest_sign, maturity, negate, total
from .discounting import (
    BenchmarkPath,
    Effective,
    LogFloat,
    RateSpec,
    compound_factor,
    discounted_partials_float,
    discounted_stream,
    float_transform,
    npv_float,
    rational_power,
)
from .errors import InvalidConfig, NonExactFactor, NotAligned, NotApplicable, NotInCapMinus
from .expoly import (
    AlgebraicNumber,
    ExpPoly,
    cutoff_for,
    encode,
    isolate_squarefree,
    prefix_polys,
    sign_at_cutoff,
)


class Rule(enum.Enum):
    CAP_PLUS = "CapPlus"
    CAP_MINUS = "CapMinus"
    WEAK_CAP = "WeakCap"
    FLOOR = "Floor"


class Mode(enum.Enum):
    EXACT = "Exact"
    APPROXIMATE = "Approximate"


class Side(enum.Enum):
    AS_GIVEN = "AsGiven"
    NEGATED = "Negated"
    NEITHER = "Neither"


class Fault(enum.Enum):
    PARTY_X = "PartyX"
    PARTY_Y = "PartyY"
    BOTH = "Both"
    NONE = "None"

    @property
    def swapped(self) -> "Fault":
        return {Fault.PARTY_X: Fault.PARTY_Y, Fault.PARTY_Y: Fault.PARTY_X}.get(self, self)


@dataclass(frozen=True)
class ViolatingRateBracket:
    """Rates at which the stream's NPV has the forbidden sign.

    ``sign`` is +1 for a cap violation (NPV > 0) and -1 for a floor
    violation (NPV < 0). In exact mode the sign holds on the whole closed
    interval ``[u_lo, u_hi]`` and was certified at the rational point
    ``u_sample``. ``s_lo``/``s_hi``/``s_sample`` are the same points read as
    logarithmic rates ``s = -q ln u``. Approximate witnesses only carry the
    float sample.
    """

    sign: int
    s_lo: float
    s_hi: float
    s_sample: float
    npv_at_sample: float
    u_lo: Optional[Fraction] = None
    u_hi: Optional[Fraction] = None
    u_sample: Optional[Fraction] = None
    q: int = 1


@dataclass(frozen=True)
class DominatingPureLoan:
    loan: CashFlowStream


Witness = Union[None, ViolatingRateBracket, DominatingPureLoan]


@dataclass
class Decision:
    legal: bool
    rule: Rule
    rate: RateSpec
    witness: Witness = None
    mode: Mode = Mode.EXACT
    relative: bool = False
    audit: Optional[bool] = None

    @property
    def proven(self) -> bool:
        """True unless this is an approximate 'no violation found' answer."""
        return self.mode is Mode.EXACT or not self.legal


@dataclass
class JointDecision:
    legal: bool
    oriented_side: Side
    at_fault: Fault
    mode: Mode = Mode.EXACT
    checks: dict = field(default_factory=dict, repr=False)


def _as_rate(r) -> RateSpec:
    if isinstance(r, (Effective, LogFloat)):
        return r
    return Effective(r)


# ---------------------------------------------------------------------------
# exact interval search


def _s_of(u: Fraction, q: int) -> float:
    if u <= 0:
        return math.inf
    return -q * (math.log(u.numerator) - math.log(u.denominator))


def _sorted_distinct(nums: List[AlgebraicNumber]) -> List[AlgebraicNumber]:
    nums.sort(key=cmp_to_key(lambda a, b: int(a.compare(b))))
    return nums


def _separate(a: Optional[AlgebraicNumber], b: AlgebraicNumber) -> None:
    if a is None:
        while b.lo <= 0:
            b.refine()
        return
    while a.hi >= b.lo and not (a.exact is not None and b.exact is not None):
        a.refine()
        b.refine()


def _gap_witness(x: CashFlowStream, p: ExpPoly, lo: Fraction, hi: Fraction, want: int):
    """Witness on the open gap ``(lo, hi)`` where ``P`` has sign ``want``."""
    step = (hi - lo) / 8
    candidates = [lo + step * k for k in range(1, 8)]
    best = None
    best_val = -math.inf
    for u in candidates:
        v = want * npv_float(x, _s_of(u, p.q)) if u > 0 else -math.inf
        if best is None or v > best_val:
            best, best_val = u, v
    u_lo = lo + step / 2
    u_hi = hi - step / 2
    return ViolatingRateBracket(
        sign=want,
        s_lo=_s_of(u_hi, p.q),
        s_hi=_s_of(u_lo, p.q),
        s_sample=_s_of(best, p.q),
        npv_at_sample=npv_float(x, _s_of(best, p.q)),
        u_lo=u_lo,
        u_hi=u_hi,
        u_sample=best,
        q=p.q,
    )


def _search_sign(
    x: CashFlowStream,
    p: ExpPoly,
    left: Optional[AlgebraicNumber],
    right: AlgebraicNumber,
    want: int,
) -> Optional[ViolatingRateBracket]:
    """Find where ``sign P == want`` on ``[left, right]`` (``left=None`` is 0+).

    Returns a witness or None when ``P`` never takes that sign there.
    """
    core = p.core
    if kernels.sign_variations(core) == 0:
        # no positive roots: P has the sign of its lowest term everywhere
        if (1 if core[0] > 0 else -1) != want:
            return None
        roots: List[AlgebraicNumber] = []
    else:
        outer_lo = left.lo if left is not None else Fraction(0)
        roots = []
        for f, _ in p.core_factors:
            for r in isolate_squarefree(f, outer_lo, right.hi):
                if left is not None and r.compare(left) <= 0:
                    continue
                if r.compare(right) >= 0:
                    continue
                roots.append(r)
        roots = _sorted_distinct(roots)
    points: List[Optional[AlgebraicNumber]] = [left] + roots + [right]
    for a, b in zip(points, points[1:]):
        _separate(a, b)
        lo = a.hi if a is not None else Fraction(0)
        hi = b.lo
        if lo >= hi:
            # both ends are the same exact rational: empty gap
            continue
        mid = (lo + hi) / 2
        s = kernels.homog_eval(core, mid.numerator, mid.denominator)
        if (s > 0 and want > 0) or (s < 0 and want < 0):
            return _gap_witness(x, p, lo, hi, want)
    return None


# ---------------------------------------------------------------------------
# approximate fallbacks


def _scan_config(s_lo: float, s_hi: float, grid: int) -> oracle.ScanConfig:
    return oracle.ScanConfig(s_lo=s_lo, s_hi=s_hi, grid_points=grid)


def _float_witness(x: CashFlowStream, s: float, sign: int) -> ViolatingRateBracket:
    return ViolatingRateBracket(sign=sign, s_lo=s, s_hi=s, s_sample=s, npv_at_sample=npv_float(x, s))


def _approx_cap_plus(x, rate: RateSpec, grid: int, span: float) -> Decision:
    s = rate.log_rate
    found = oracle.oracle_in_cap_plus(x, s, _scan_config(s, s + span, grid))
    if isinstance(found, oracle.ViolationFound):
        return Decision(False, Rule.CAP_PLUS, rate, _float_witness(x, found.s, 1), Mode.APPROXIMATE)
    return Decision(True, Rule.CAP_PLUS, rate, None, Mode.APPROXIMATE)


# ---------------------------------------------------------------------------
# public decisions


def in_cap_plus(x: CashFlowStream, r, *, grid: int = 10_000, span: float = 10.0) -> Decision:
    """Legal iff ``F_s(x) <= 0`` for every ``s >= r``."""
    rate = _as_rate(r)
    if x.is_zero():
        return Decision(True, Rule.CAP_PLUS, rate, None, Mode.EXACT if rate.exact else Mode.APPROXIMATE)
    if not rate.exact:
        return _approx_cap_plus(x, rate, grid, span)
    p = encode(x)
    cut = cutoff_for(rate.rho, p.q)
    w = _search_sign(x, p, None, cut, +1)
    return Decision(w is None, Rule.CAP_PLUS, rate, w)


def in_cap_minus(x: CashFlowStream, r, *, witness: bool = True) -> Decision:
    """Legal iff every discounted running balance at rate ``r`` is ``<= 0``."""
    rate = _as_rate(r)
    if x.is_zero():
        return Decision(True, Rule.CAP_MINUS, rate, None, Mode.EXACT if rate.exact else Mode.APPROXIMATE)
    if not rate.exact:
        partials = discounted_partials_float(x, rate.log_rate)
        legal = all(v <= 0 for v in partials)
        return Decision(legal, Rule.CAP_MINUS, rate, None, Mode.APPROXIMATE)
    if earliest_sign(x) > 0:
        return Decision(False, Rule.CAP_MINUS, rate)
    q = encode(x).q
    cut = cutoff_for(rate.rho, q)
    for p in prefix_polys(x, q):
        if sign_at_cutoff(p, cut) > 0:
            return Decision(False, Rule.CAP_MINUS, rate)
    w = None
    if witness:
        try:
            w = DominatingPureLoan(_dominator(x, rate.rho))
        except (NonExactFactor, NotAligned):
            w = None
    return Decision(True, Rule.CAP_MINUS, rate, w)


def in_weak_cap(x: CashFlowStream, r) -> Decision:
    """Legal iff ``F_r(x) <= 0`` at the single rate ``r``."""
    rate = _as_rate(r)
    if x.is_zero():
        return Decision(True, Rule.WEAK_CAP, rate, None, Mode.EXACT if rate.exact else Mode.APPROXIMATE)
    if not rate.exact:
        v = npv_float(x, rate.log_rate)
        w = _float_witness(x, rate.log_rate, 1) if v > 0 else None
        return Decision(v <= 0, Rule.WEAK_CAP, rate, w, Mode.APPROXIMATE)
    p = encode(x)
    if rate.rho == 0:
        legal = total(x) <= 0
        w = None
        if not legal:
            w = ViolatingRateBracket(1, 0.0, 0.0, 0.0, npv_float(x, 0.0), Fraction(1), Fraction(1), Fraction(1), p.q)
        return Decision(legal, Rule.WEAK_CAP, rate, w)
    cut = cutoff_for(rate.rho, p.q)
    s = sign_at_cutoff(p, cut)
    if s <= 0:
        return Decision(True, Rule.WEAK_CAP, rate)
    # shrink the cutoff bracket until P is certified positive on all of it
    while cut.exact is None and polyz.enclose_sign(p.core, cut.lo, cut.hi) != 1:
        cut.refine()
    mid = cut.midpoint()
    w = ViolatingRateBracket(
        sign=1,
        s_lo=_s_of(cut.hi, p.q),
        s_hi=_s_of(cut.lo, p.q),
        s_sample=_s_of(mid, p.q),
        npv_at_sample=npv_float(x, _s_of(mid, p.q)),
        u_lo=cut.lo,
        u_hi=cut.hi,
        u_sample=mid,
        q=p.q,
    )
    return Decision(False, Rule.WEAK_CAP, rate, w)


def in_floor(x: CashFlowStream, r, *, grid: int = 10_000) -> Decision:
    """Legal iff ``F_s(x) >= 0`` for every ``s`` in ``[0, r]``."""
    rate = _as_rate(r)
    if x.is_zero():
        return Decision(True, Rule.FLOOR, rate, None, Mode.EXACT if rate.exact else Mode.APPROXIMATE)
    if not rate.exact:
        s_end = rate.log_rate
        lo, hi = min(0.0, s_end), max(0.0, s_end)
        bad = oracle.oracle_find_negative(x, _scan_config(lo, hi if hi > lo else lo + 1e-300, grid))
        if bad is not None:
            return Decision(False, Rule.FLOOR, rate, _float_witness(x, bad, -1), Mode.APPROXIMATE)
        return Decision(True, Rule.FLOOR, rate, None, Mode.APPROXIMATE)
    p = encode(x)
    one = AlgebraicNumber.rational(1)
    if rate.rho == 0:
        legal = total(x) >= 0
        w = None
        if not legal:
            w = ViolatingRateBracket(-1, 0.0, 0.0, 0.0, npv_float(x, 0.0), Fraction(1), Fraction(1), Fraction(1), p.q)
        return Decision(legal, Rule.FLOOR, rate, w)
    cut = cutoff_for(rate.rho, p.q)
    if rate.rho > 0:
        w = _search_sign(x, p, cut, one, -1)
    else:
        w = _search_sign(x, p, one, cut, -1)
    return Decision(w is None, Rule.FLOOR, rate, w)


def _rate_le(a: RateSpec, b: RateSpec) -> bool:
    if isinstance(a, Effective) and isinstance(b, Effective):
        return a.rho <= b.rho
    return a.log_rate <= b.log_rate


def joint_classify(x: CashFlowStream, floor_r, cap_r) -> JointDecision:
    """Floor and cap together: legal iff ``x`` or ``-x`` passes both.

    When illegal, the party holding ``x`` (PartyX) is at fault if ``x`` passes
    the floor but breaks the cap, or if ``-x`` breaks the floor while passing
    the cap; PartyY symmetrically; Both when neither or each rule applies.
    """
    floor_rate = _as_rate(floor_r)
    cap_rate = _as_rate(cap_r)
    if not _rate_le(floor_rate, cap_rate):
        raise InvalidConfig("floor rate exceeds cap rate")
    exact = floor_rate.exact and cap_rate.exact
    mode = Mode.EXACT if exact else Mode.APPROXIMATE
    if x.is_zero():
        return JointDecision(True, Side.AS_GIVEN, Fault.NONE, mode)
    y = negate(x)
    fx = in_floor(x, floor_rate)
    cx = in_cap_plus(x, cap_rate)
    fy = in_floor(y, floor_rate)
    cy = in_cap_plus(y, cap_rate)
    checks = {"floor_x": fx, "cap_x": cx, "floor_neg": fy, "cap_neg": cy}
    if fx.legal and cx.legal:
        return JointDecision(True, Side.AS_GIVEN, Fault.NONE, mode, checks)
    if fy.legal and cy.legal:
        return JointDecision(True, Side.NEGATED, Fault.NONE, mode, checks)
    x_fault = (fx.legal and not cx.legal) or (not fy.legal and cy.legal)
    y_fault = (fy.legal and not cy.legal) or (not fx.legal and cx.legal)
    if x_fault and not y_fault:
        fault = Fault.PARTY_X
    elif y_fault and not x_fault:
        fault = Fault.PARTY_Y
    else:
        fault = Fault.BOTH
    return JointDecision(False, Side.NEITHER, fault, mode, checks)


def _dominator(x: CashFlowStream, rho: Fraction) -> CashFlowStream:
    xr = discounted_stream(x, rho)
    horizon = maturity(x) + 1
    factor = rational_power(1 + rho, horizon)
    if factor is None:
        raise NonExactFactor(f"(1 + {rho}) ** {horizon} is irrational")
    correction = -total(xr) * factor
    return combine(x, atom(horizon, correction)) if correction else x


def pure_dominator_witness(x: CashFlowStream, r) -> CashFlowStream:
    """A pure loan ``y >= x`` whose IRR is exactly ``r``.

    ``y`` is ``x`` plus one repayment one period after maturity, sized so
    that the discounted balance at ``r`` closes at zero.
    """
    rate = _as_rate(r)
    if x.is_zero():
        raise NotApplicable("the zero stream has no dominating pure loan")
    if not rate.exact:
        raise NonExactFactor("a float rate gives no exact witness")
    if not in_cap_minus(x, rate, witness=False).legal:
        raise NotInCapMinus("stream is not in the cap-minus set at this rate")
    try:
        return _dominator(x, rate.rho)
    except NotAligned as exc:
        raise NonExactFactor(str(exc)) from exc


def relative_classify(x: CashFlowStream, b: BenchmarkPath, cap_r) -> Decision:
    """Decide a floating-rate contract through its fixed-rate template ``x``.

    The verdict is ``in_cap_plus(x, cap)``. The audit re-derives the template
    from the compounded stream and checks it matches ``x`` exactly; it is
    None when some date is not period-aligned.
    """
    d = in_cap_plus(x, cap_r)
    d.relative = True
    try:
        floating = float_transform(x, b)
        back = CashFlowStream(
            tuple((t, a / compound_factor(b, t)) for t, a in floating.transactions)
        )
        d.audit = back == x
    except NotAligned:
        d.audit = None
    return d
