"""Exact polynomial view of the NPV function and certified root work.

A stream ``x = sum_k a_k 1_{t_k}`` with rational times is rewritten with
``q = lcm(denominators of t_k)`` and ``u = exp(-s / q)`` as the polynomial
``P(u) = sum_k a_k u**(q t_k)``, so that ``P(exp(-s/q)) = F_s(x)``. Rates
``s >= r`` correspond to ``0 < u <= exp(-r/q)``; ``s -> +inf`` is ``u -> 0+``.

Everything here is exact. Real algebraic numbers are held as isolating
intervals and located with Sturm chains.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, cmp_to_key
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from . import polyz
from .cashflow import CashFlowStream, Sign
from .errors import EndpointRoot, InvalidRate, ZeroPoly


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class Parity(enum.Enum):
    ODD = "Odd"
    EVEN = "Even"


@dataclass(frozen=True)
class ExpPoly:
    """``P(u) = sum c_n u**n`` with rational coefficients; ``q`` is the time scale."""

    q: int
    terms: Tuple[Tuple[int, Fraction], ...] = ()

    @classmethod
    def from_coeffs(cls, q: int, coeffs) -> "ExpPoly":
        if isinstance(coeffs, dict):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        merged: Dict[int, Fraction] = {}
        for n, c in items:
            if n < 0:
                raise ValueError("exponents must be nonnegative")
            merged[int(n)] = merged.get(int(n), Fraction(0)) + Fraction(c)
        return cls(q, tuple((n, merged[n]) for n in sorted(merged) if merged[n] != 0))

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    @property
    def low_exponent(self) -> int:
        return self.terms[0][0] if self.terms else 0

    def __call__(self, u) -> Fraction:
        u = Fraction(u)
        return sum((c * u**n for n, c in self.terms), Fraction(0))

    @cached_property
    def dense(self) -> List[int]:
        """Integer coefficients (ascending), a positive multiple of ``P``."""
        if not self.terms:
            return []
        out = [0] * (self.degree + 1)
        den = lcm(*(c.denominator for _, c in self.terms))
        for n, c in self.terms:
            out[n] = int(c * den)
        return polyz.primitive(out)

    @cached_property
    def core(self) -> List[int]:
        """``dense`` with the factor ``u**low_exponent`` removed.

        On ``u > 0`` it has the same sign as ``P`` and it does not vanish at 0.
        """
        return self.dense[self.low_exponent:]

    @cached_property
    def core_factors(self) -> List[Tuple[List[int], int]]:
        return polyz.yun(self.core)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})u^{n}" for n, c in reversed(self.terms)) or "0"
        return f"ExpPoly(q={self.q}: {body})"


def encode(x: CashFlowStream) -> ExpPoly:
    q = lcm(*(t.denominator for t in x.times)) if x.transactions else 1
    return ExpPoly(q, tuple((int(t * q), a) for t, a in x.transactions))


def prefix_polys(x: CashFlowStream, q: Optional[int] = None) -> List[ExpPoly]:
    """Polynomials of the running sums ``sum_{i<=k} a_i u**(q t_i)``."""
    if q is None:
        q = encode(x).q
    out = []
    terms: List[Tuple[int, Fraction]] = []
    for t, a in x.transactions:
        terms.append((int(t * q), a))
        out.append(ExpPoly(q, tuple(terms)))
    return out


# ---------------------------------------------------------------------------
# real algebraic numbers


class AlgebraicNumber:
    """A real root of a squarefree integer polynomial and an isolating interval.

    Either ``lo == hi`` (the root is that rational) or ``lo < hi``, the
    polynomial has exactly one root in ``(lo, hi)`` and opposite, nonzero
    signs at the two ends. Refinement shrinks the interval in place; the
    number represented never changes.
    """

    __slots__ = ("poly", "lo", "hi", "_slo")

    def __init__(self, poly: Sequence[int], lo, hi):
        self.poly = list(poly)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if self.lo == self.hi:
            self._slo = 0
            return
        slo = polyz.sign_at(self.poly, self.lo)
        shi = polyz.sign_at(self.poly, self.hi)
        if slo == 0 or shi == 0 or slo == shi:
            raise ValueError("interval does not isolate a simple root")
        self._slo = slo

    @classmethod
    def rational(cls, value, poly: Optional[Sequence[int]] = None) -> "AlgebraicNumber":
        value = Fraction(value)
        if poly is None:
            poly = [-value.numerator, value.denominator]
        return cls(poly, value, value)

    @property
    def exact(self) -> Optional[Fraction]:
        return self.lo if self.lo == self.hi else None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint())

    def refine(self) -> None:
        if self.lo == self.hi:
            return
        mid = (self.lo + self.hi) / 2
        s = polyz.sign_at(self.poly, mid)
        if s == 0:
            self.lo = self.hi = mid
        elif s == self._slo:
            self.lo = mid
        else:
            self.hi = mid

    def refine_to(self, width) -> "AlgebraicNumber":
        width = Fraction(width)
        while self.hi - self.lo > width:
            self.refine()
        return self

    def refine_relative(self, rel) -> "AlgebraicNumber":
        """Refine until the width is at most ``rel`` times ``|midpoint|``."""
        rel = Fraction(rel)
        while self.hi - self.lo > rel * abs(self.midpoint()):
            self.refine()
        return self

    def sign_of(self, p: Sequence[int]) -> int:
        """Exact sign of the integer polynomial ``p`` at this number."""
        if not p:
            return 0
        if self.exact is not None:
            return polyz.sign_at(p, self.exact)
        for _ in range(6):
            s = polyz.enclose_sign(p, self.lo, self.hi)
            if s is not None:
                return s
            self.refine()
            if self.exact is not None:
                return polyz.sign_at(p, self.exact)
        if self._vanishes(p):
            return 0
        while True:
            s = polyz.enclose_sign(p, self.lo, self.hi)
            if s is not None:
                return s
            self.refine()
            if self.exact is not None:
                return polyz.sign_at(p, self.exact)

    def _vanishes(self, p: Sequence[int]) -> bool:
        g = polyz.gcd_poly(p, self.poly)
        if len(g) <= 1:
            return False
        # g divides a squarefree poly with one simple root in (lo, hi)
        return polyz.sign_at(g, self.lo) != polyz.sign_at(g, self.hi)

    def compare_rational(self, r) -> Ordering:
        r = Fraction(r)
        if self.exact is not None:
            return Ordering((self.exact > r) - (self.exact < r))
        if r <= self.lo:
            return Ordering.GREATER
        if r >= self.hi:
            return Ordering.LESS
        s = polyz.sign_at(self.poly, r)
        if s == 0:
            self.lo = self.hi = r
            return Ordering.EQUAL
        if s == self._slo:
            self.lo = r
            return Ordering.GREATER
        self.hi = r
        return Ordering.LESS

    def compare(self, other: "AlgebraicNumber") -> Ordering:
        if other.exact is not None:
            return self.compare_rational(other.exact)
        if self.exact is not None:
            return Ordering(-other.compare_rational(self.exact))
        checked = False
        while True:
            if self.exact is not None or other.exact is not None:
                return self.compare(other)
            if self.hi <= other.lo:
                return Ordering.LESS
            if other.hi <= self.lo:
                return Ordering.GREATER
            if not checked:
                checked = True
                g = polyz.gcd_poly(self.poly, other.poly)
                if len(g) > 1:
                    a = max(self.lo, other.lo)
                    b = min(self.hi, other.hi)
                    if polyz.sign_at(g, a) * polyz.sign_at(g, b) < 0:
                        return Ordering.EQUAL
            self.refine()
            other.refine()

    def kth_root(self, k: int) -> "AlgebraicNumber":
        """The positive number ``w`` with ``w**k`` equal to this (positive) number."""
        if k == 1:
            return self
        if self.exact is not None:
            r = rational_root(self.exact, k)
            if r is not None:
                return AlgebraicNumber.rational(r)
            g = [0] * (k + 1)
            g[0], g[k] = -self.exact.numerator, self.exact.denominator
            return isolate_squarefree(g, 0, max(self.exact, 1) + 1)[0]
        # w is a root of poly(w**k), which is squarefree when poly is and poly(0) != 0
        g = [0] * ((len(self.poly) - 1) * k + 1)
        for i, c in enumerate(self.poly):
            g[i * k] = c
        lo, hi = self.lo, self.hi
        for w in isolate_squarefree(g, 0, max(hi, 1) + 1):
            while True:
                a, b = w.lo**k, w.hi**k
                if a >= lo and b <= hi:
                    return w
                if b <= lo or a >= hi:
                    break
                w.refine()
        raise ArithmeticError("k-th root not found")

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"AlgebraicNumber({self.exact})"
        return f"AlgebraicNumber(root in ({self.lo}, {self.hi}) ~ {float(self):.15g})"


def _iroot(n: int, k: int) -> Optional[int]:
    """Exact integer k-th root of ``n >= 0`` or None."""
    if n < 2:
        return n
    x = 1 << (n.bit_length() // k + 1)  # x**k > n
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k == n else None


def rational_root(value: Fraction, k: int) -> Optional[Fraction]:
    """``value ** (1/k)`` if it is rational (``value > 0``)."""
    value = Fraction(value)
    if value <= 0:
        return None
    num = _iroot(value.numerator, k)
    if num is None:
        return None
    den = _iroot(value.denominator, k)
    if den is None:
        return None
    return Fraction(num, den)


class AlgebraicCutoff(AlgebraicNumber):
    """The discount point ``u* = (1 + rho) ** (-1/q)`` for an effective rate ``rho``.

    ``defining`` is ``(1 + rho) u**q - 1`` cleared to integers; its only
    positive root is ``u*``.
    """

    __slots__ = ("rho", "q")

    def __init__(self, rho, q: int):
        rho = Fraction(rho)
        if rho <= -1:
            raise InvalidRate(f"effective rate must exceed -100%, got {rho}")
        if q < 1:
            raise ValueError("q must be a positive integer")
        base = 1 + rho
        defining = [0] * (q + 1)
        defining[0] = -base.denominator
        defining[q] = base.numerator
        self.rho = rho
        self.q = q
        exact = rational_root(1 / base, q)
        if exact is not None:
            super().__init__(defining, exact, exact)
            return
        guess = Fraction(float(base) ** (-1.0 / q))
        eps = Fraction(1, 10**12)
        lo, hi = guess * (1 - eps), guess * (1 + eps)
        if not (polyz.sign_at(defining, lo) < 0 < polyz.sign_at(defining, hi)):
            lo, hi = Fraction(0), max(Fraction(1), 1 / base) + 1
        super().__init__(defining, lo, hi)

    @property
    def defining(self) -> List[int]:
        return self.poly

    @property
    def bracket(self) -> Tuple[Fraction, Fraction]:
        return (self.lo, self.hi)

    @property
    def log_rate(self) -> float:
        return math.log1p(float(self.rho))

    def __repr__(self) -> str:
        return f"AlgebraicCutoff(rho={self.rho}, q={self.q})"


# ---------------------------------------------------------------------------
# root reports


@dataclass
class RootBracket:
    root: AlgebraicNumber
    multiplicity: int

    @property
    def parity(self) -> Parity:
        return Parity.ODD if self.multiplicity % 2 else Parity.EVEN

    @property
    def lo(self) -> Fraction:
        return self.root.lo

    @property
    def hi(self) -> Fraction:
        return self.root.hi

    @property
    def bracket(self) -> Tuple[Fraction, Fraction]:
        return (self.root.lo, self.root.hi)


@dataclass
class RootReport:
    roots: List[RootBracket] = field(default_factory=list)
    scan_bound: Fraction = Fraction(1)

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def odd_roots(self) -> List[RootBracket]:
        return [r for r in self.roots if r.multiplicity % 2]


def _strip_endpoint_root(f: List[int], x: Fraction) -> List[int]:
    while len(f) > 1 and polyz.sign_at(f, x) == 0:
        f = polyz.div_exact(f, [-x.numerator, x.denominator])
    return f


def isolate_squarefree(f: Sequence[int], lo, hi) -> List[AlgebraicNumber]:
    """Isolate the roots of a squarefree ``f`` in the open interval ``(lo, hi)``."""
    lo = Fraction(lo)
    hi = Fraction(hi)
    f = polyz.primitive(polyz.trim(list(f)))
    if len(f) <= 1 or lo >= hi:
        return []
    if len(f) == 2:
        r = Fraction(-f[0], f[1])
        return [AlgebraicNumber.rational(r, f)] if lo < r < hi else []
    f = _strip_endpoint_root(f, lo)
    f = _strip_endpoint_root(f, hi)
    if len(f) <= 2:
        return isolate_squarefree(f, lo, hi)
    chain = polyz.sturm_chain(f)
    out: List[AlgebraicNumber] = []
    stack = [(lo, hi, polyz.variations_at(chain, lo), polyz.variations_at(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n <= 0:
            continue
        if n == 1:
            out.append(AlgebraicNumber(f, a, b))
            continue
        m = (a + b) / 2
        if polyz.sign_at(f, m) != 0:
            vm = polyz.variations_at(chain, m)
            stack.append((m, b, vm, vb))
            stack.append((a, m, va, vm))
            continue
        out.append(AlgebraicNumber.rational(m, f))
        delta = (b - a) / 4
        while True:
            left, right = m - delta, m + delta
            if polyz.sign_at(f, left) and polyz.sign_at(f, right):
                vl = polyz.variations_at(chain, left)
                vr = polyz.variations_at(chain, right)
                if vl - vr == 1:
                    break
            delta /= 2
        stack.append((right, b, vr, vb))
        stack.append((a, left, va, vl))
    out.sort(key=lambda r: r.lo)
    return out


def _separate(roots: List[RootBracket]) -> List[RootBracket]:
    roots.sort(key=cmp_to_key(lambda a, b: int(a.root.compare(b.root))))
    for a, b in zip(roots, roots[1:]):
        while a.root.hi > b.root.lo:
            a.root.refine()
            b.root.refine()
    return roots


def _isolate_factored(factors, lo, hi) -> List[RootBracket]:
    roots = []
    for f, k in factors:
        for r in isolate_squarefree(f, lo, hi):
            roots.append(RootBracket(r, k))
    return _separate(roots)


def _require_nonzero(p: ExpPoly) -> None:
    if p.is_zero():
        raise ZeroPoly("the zero polynomial has no finite root structure")


def squarefree_decompose(p: ExpPoly) -> List[Tuple[ExpPoly, int]]:
    """Square-free decomposition, factors returned as integer ExpPolys.

    The power of ``u`` dividing ``p`` is split off first and merged back as
    the factor ``u``.
    """
    _require_nonzero(p)
    factors = [(list(f), k) for f, k in p.core_factors]
    m = p.low_exponent
    if m:
        for i, (f, k) in enumerate(factors):
            if k == m:
                factors[i] = ([0] + f, k)
                break
        else:
            factors.append(([0, 1], m))
    factors.sort(key=lambda fk: fk[1])
    return [(ExpPoly.from_coeffs(p.q, f), k) for f, k in factors]


def sturm_count(p: ExpPoly, a, b) -> int:
    """Number of distinct real roots of ``p`` in the open interval ``(a, b)``."""
    a = Fraction(a)
    b = Fraction(b)
    if a >= b:
        raise ValueError("need a < b")
    _require_nonzero(p)
    f = p.dense
    if polyz.sign_at(f, a) == 0 or polyz.sign_at(f, b) == 0:
        raise EndpointRoot(f"an endpoint of ({a}, {b}) is a root")
    chain = polyz.sturm_chain(f)
    return polyz.variations_at(chain, a) - polyz.variations_at(chain, b)


def cauchy_root_bound(p: ExpPoly) -> Fraction:
    """``M >= 1`` with every real root of ``p`` in ``(-M, M)``."""
    _require_nonzero(p)
    c = p.core
    if len(c) <= 1:
        return Fraction(1)
    lead = abs(c[-1])
    return 1 + Fraction(max(abs(v) for v in c[:-1]), lead)


def isolate_roots(p: ExpPoly, lo, hi) -> RootReport:
    lo = Fraction(lo)
    hi = Fraction(hi)
    if lo >= hi:
        raise ValueError("need lo < hi")
    _require_nonzero(p)
    factors = [(f.dense, k) for f, k in squarefree_decompose(p)]
    return RootReport(_isolate_factored(factors, lo, hi), hi)


def positive_roots(p: ExpPoly) -> RootReport:
    """All distinct roots of ``p`` in ``(0, inf)``, i.e. every real rate."""
    _require_nonzero(p)
    bound = cauchy_root_bound(p)
    return RootReport(_isolate_factored(p.core_factors, Fraction(0), bound), bound)


def sign_at_rational(p: ExpPoly, u) -> Sign:
    if p.is_zero():
        return Sign.ZERO
    return Sign(polyz.sign_at(p.dense, Fraction(u)))


def sign_at_cutoff(p: ExpPoly, c: AlgebraicCutoff) -> Sign:
    if p.q != c.q:
        raise ValueError(f"time scales differ: {p.q} != {c.q}")
    if p.is_zero():
        return Sign.ZERO
    return Sign(c.sign_of(p.core))


def sign_at_algebraic(p: ExpPoly, alpha: AlgebraicNumber) -> Sign:
    """Sign of ``p`` at a positive algebraic number."""
    if p.is_zero():
        return Sign.ZERO
    return Sign(alpha.sign_of(p.core))


def compare_root_to_cutoff(bracket, p: ExpPoly, c: AlgebraicCutoff) -> Ordering:
    """Place the root of squarefree ``p`` isolated by ``bracket`` relative to ``u*``."""
    if isinstance(bracket, RootBracket):
        alpha = bracket.root
    elif isinstance(bracket, AlgebraicNumber):
        alpha = bracket
    else:
        lo, hi = bracket
        alpha = AlgebraicNumber(polyz.squarefree_part(p.dense), lo, hi)
    return alpha.compare(c)


def cutoff_for(rho, q: int) -> AlgebraicCutoff:
    return AlgebraicCutoff(rho, q)
