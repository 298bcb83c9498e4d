"""Stream classification (S0 .. S4) and the IRR values built on it.

In ``u = exp(-s/q)`` coordinates a stream is in S2 when its polynomial
changes sign from negative to positive at ``u0`` and has no other positive
root; S3 allows extra roots of even multiplicity. S1 adds the
condition that every discounted running balance at the root is <= 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

from . import kernels, polyz
from .cashflow import CashFlowStream, earliest_sign
from .errors import NotPure
from .expoly import (
    AlgebraicNumber,
    ExpPoly,
    Ordering,
    cutoff_for,
    encode,
    isolate_squarefree,
    positive_roots,
    prefix_polys,
    sign_at_algebraic,
)

# brackets for reported values are refined to this relative width
REPORT_REL_WIDTH = Fraction(1, 2**50)


class StreamClass(enum.Enum):
    ZERO = "Zero"
    S0 = "S0"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4POS = "S4Pos"
    S4NEG = "S4Neg"
    OUTSIDE = "Outside"

    @property
    def has_finite_irr(self) -> bool:
        return self in _FINITE


_FINITE = {StreamClass.S0, StreamClass.S1, StreamClass.S2, StreamClass.S3}


class IrrKind(enum.Enum):
    FINITE = "Finite"
    PLUS_INFINITY = "PlusInfinity"
    MINUS_INFINITY = "MinusInfinity"


@dataclass
class IrrValue:
    """A logarithmic rate, or +/- infinity.

    For finite values ``root`` is the point ``u = exp(-rate/q)`` as a
    certified algebraic number; ``log_rate`` and ``effective_rate`` are float
    readings taken at the bracket midpoint.
    """

    kind: IrrKind
    q: int = 1
    root: Optional[AlgebraicNumber] = field(default=None, repr=False)

    @classmethod
    def finite(cls, root: AlgebraicNumber, q: int) -> "IrrValue":
        if root.exact is None:
            root.refine_relative(REPORT_REL_WIDTH)
        return cls(IrrKind.FINITE, q, root)

    @classmethod
    def zero(cls) -> "IrrValue":
        return cls(IrrKind.FINITE, 1, AlgebraicNumber.rational(1))

    @property
    def is_finite(self) -> bool:
        return self.kind is IrrKind.FINITE

    @property
    def u_bracket(self) -> Optional[Tuple[Fraction, Fraction]]:
        if self.root is None:
            return None
        return (self.root.lo, self.root.hi)

    @property
    def log_rate(self) -> float:
        if self.kind is IrrKind.PLUS_INFINITY:
            return math.inf
        if self.kind is IrrKind.MINUS_INFINITY:
            return -math.inf
        return 0.0 - self.q * math.log(self.root.midpoint())

    @property
    def effective_rate(self) -> float:
        if not self.is_finite:
            return self.log_rate
        mid = self.root.midpoint()
        # (1 + rho) = u ** -q
        return float(mid ** -self.q - 1) if self.q <= 64 else math.expm1(self.log_rate)

    def log_rate_bounds(self) -> Tuple[float, float]:
        if not self.is_finite:
            return (self.log_rate, self.log_rate)
        return (-self.q * math.log(self.root.hi), -self.q * math.log(self.root.lo))

    def compare_effective(self, rho) -> Ordering:
        """Order this rate against the effective rate ``rho``, exactly."""
        if self.kind is IrrKind.PLUS_INFINITY:
            return Ordering.GREATER
        if self.kind is IrrKind.MINUS_INFINITY:
            return Ordering.LESS
        cut = cutoff_for(rho, self.q)
        # larger u means a smaller rate
        return Ordering(-int(self.root.compare(cut)))

    def compare(self, other: "IrrValue") -> Ordering:
        """Exact order of two rates, also across different time scales."""
        rank = {IrrKind.MINUS_INFINITY: -1, IrrKind.FINITE: 0, IrrKind.PLUS_INFINITY: 1}
        a, b = rank[self.kind], rank[other.kind]
        if a != b or a != 0:
            return Ordering((a > b) - (a < b))
        common = math.lcm(self.q, other.q)
        mine = self.root.kth_root(common // self.q)
        theirs = other.root.kth_root(common // other.q)
        return Ordering(-int(mine.compare(theirs)))

    def __repr__(self) -> str:
        if not self.is_finite:
            return f"IrrValue({self.kind.value})"
        return f"IrrValue(log_rate={self.log_rate:.12g}, effective={self.effective_rate:.12g})"


def _descartes(x: CashFlowStream) -> int:
    return kernels.sign_variations(x.amounts)


@dataclass
class _Analysis:
    cls: StreamClass
    root: Optional[AlgebraicNumber] = None
    q: int = 1


def _pure_at(x: CashFlowStream, q: int, root: AlgebraicNumber) -> bool:
    for p in prefix_polys(x, q)[:-1]:
        if sign_at_algebraic(p, root) > 0:
            return False
    return True


@lru_cache(maxsize=2048)
def _analyze(x: CashFlowStream) -> _Analysis:
    if x.is_zero():
        return _Analysis(StreamClass.ZERO)
    p = encode(x)
    low = earliest_sign(x)
    variations = _descartes(x)
    if variations == 0:
        return _Analysis(StreamClass.S4POS if low > 0 else StreamClass.S4NEG, q=p.q)
    if variations == 1:
        if low > 0:
            return _Analysis(StreamClass.OUTSIDE, q=p.q)
        # exactly one positive root and it is simple
        f = p.core
        root = isolate_squarefree(f, 0, _bound(f))[0]
        return _classify_single(x, p, root)
    roots = positive_roots(p)
    odd = roots.odd_roots
    if not odd:
        return _Analysis(StreamClass.S4POS if low > 0 else StreamClass.S4NEG, q=p.q)
    if len(odd) == 1 and low < 0:
        if len(roots) == 1:
            return _classify_single(x, p, odd[0].root)
        return _Analysis(StreamClass.S3, odd[0].root, p.q)
    return _Analysis(StreamClass.OUTSIDE, q=p.q)


def _bound(f: List[int]) -> Fraction:
    return 1 + Fraction(max(abs(v) for v in f[:-1]), abs(f[-1]))


def _classify_single(x: CashFlowStream, p: ExpPoly, root: AlgebraicNumber) -> _Analysis:
    a = x.amounts
    if len(a) == 2 and a[0] < 0 < a[1]:
        return _Analysis(StreamClass.S0, root, p.q)
    if _pure_at(x, p.q, root):
        return _Analysis(StreamClass.S1, root, p.q)
    return _Analysis(StreamClass.S2, root, p.q)


def classify_stream(x: CashFlowStream) -> StreamClass:
    """Finest class of ``x``: Zero, S0 < S1 < S2 < S3, S4Pos, S4Neg or Outside."""
    return _analyze(x).cls


def irr(x: CashFlowStream) -> Optional[IrrValue]:
    """The extended IRR; None where it is undefined (zero stream, Outside)."""
    a = _analyze(x)
    if a.cls in _FINITE:
        return IrrValue.finite(a.root, a.q)
    if a.cls is StreamClass.S4POS:
        return IrrValue(IrrKind.PLUS_INFINITY, a.q)
    if a.cls is StreamClass.S4NEG:
        return IrrValue(IrrKind.MINUS_INFINITY, a.q)
    return None


def pure_rate(x: CashFlowStream) -> IrrValue:
    """IRR of a pure loan (class S0 or S1)."""
    a = _analyze(x)
    if a.cls not in (StreamClass.S0, StreamClass.S1):
        raise NotPure(f"stream is {a.cls.value}, not a pure loan")
    return IrrValue.finite(a.root, a.q)


def first_odd_root_below_one(p: ExpPoly) -> Optional[AlgebraicNumber]:
    """Smallest root of odd multiplicity of ``p`` in ``(0, 1)``, if any."""
    f = p.core
    if kernels.sign_variations(f) == 0:
        return None
    best = None
    for g, k in p.core_factors:
        if k % 2 == 0:
            continue
        found = isolate_squarefree(g, 0, 1)
        if found and (best is None or found[0].compare(best) < 0):
            best = found[0]
    return best


def _from_first_root(root: Optional[AlgebraicNumber], q: int) -> IrrValue:
    if root is None:
        return IrrValue.zero()
    return IrrValue.finite(root, q)


def refinement_plus(x: CashFlowStream) -> IrrValue:
    """Least ``r >= 0`` with ``F_s(x) <= 0`` for every ``s >= r`` (+inf if none)."""
    if x.is_zero():
        return IrrValue.zero()
    p = encode(x)
    if earliest_sign(x) > 0:
        return IrrValue(IrrKind.PLUS_INFINITY, p.q)
    return _from_first_root(first_odd_root_below_one(p), p.q)


def refinement_minus(x: CashFlowStream) -> IrrValue:
    """Least ``r >= 0`` at which every discounted running balance is <= 0."""
    if x.is_zero():
        return IrrValue.zero()
    q = encode(x).q
    if earliest_sign(x) > 0:
        return IrrValue(IrrKind.PLUS_INFINITY, q)
    best = None
    for p in prefix_polys(x, q):
        r = first_odd_root_below_one(p)
        if r is not None and (best is None or r.compare(best) < 0):
            best = r
    return _from_first_root(best, q)


def clear_cache() -> None:
    """Forget memoized classifications and Sturm chains (used for cold timings)."""
    _analyze.cache_clear()
    polyz._sturm_chain_cached.cache_clear()
