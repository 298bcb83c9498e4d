"""Discrete loan cash-flow streams with exact rational times and amounts.

Amounts are from the lender's side: negative is money lent out, positive is
money received. The empty stream is the zero loan.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union

from .errors import InvalidScale, InvalidTime

Number = Union[int, Fraction, str, float]


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @classmethod
    def of(cls, value) -> "Sign":
        return cls((value > 0) - (value < 0))


def to_fraction(value: Number) -> Fraction:
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"non-finite value {value!r}")
    if isinstance(value, bool):
        raise TypeError("booleans are not amounts")
    return Fraction(value)


@dataclass(frozen=True)
class CashFlowStream:
    """A normalized stream: strictly increasing times, nonzero amounts.

    Build instances with :func:`normalize` (or ``CashFlowStream.of``); the
    constructor trusts its input.
    """

    transactions: Tuple[Tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def of(cls, raw: Iterable[Tuple[Number, Number]]) -> "CashFlowStream":
        return normalize(raw)

    @property
    def times(self) -> Tuple[Fraction, ...]:
        return tuple(t for t, _ in self.transactions)

    @property
    def amounts(self) -> Tuple[Fraction, ...]:
        return tuple(a for _, a in self.transactions)

    def is_zero(self) -> bool:
        return not self.transactions

    def __len__(self) -> int:
        return len(self.transactions)

    def __iter__(self):
        return iter(self.transactions)

    def __add__(self, other: "CashFlowStream") -> "CashFlowStream":
        return combine(self, other)

    def __neg__(self) -> "CashFlowStream":
        return negate(self)

    def __sub__(self, other: "CashFlowStream") -> "CashFlowStream":
        return combine(self, negate(other))

    def __le__(self, other: "CashFlowStream") -> bool:
        return dominates(self, other)

    def __repr__(self) -> str:
        body = ", ".join(f"({t}, {a})" for t, a in self.transactions)
        return f"CashFlowStream([{body}])"


ZERO = CashFlowStream()


def normalize(raw: Iterable[Tuple[Number, Number]]) -> CashFlowStream:
    """Sort by time, merge equal times, drop zero amounts."""
    merged: dict = {}
    for t, a in raw:
        tf = to_fraction(t)
        if tf < 0:
            raise InvalidTime(f"negative time {t!r}")
        merged[tf] = merged.get(tf, Fraction(0)) + to_fraction(a)
    return CashFlowStream(tuple((t, merged[t]) for t in sorted(merged) if merged[t] != 0))


def combine(x: CashFlowStream, y: CashFlowStream) -> CashFlowStream:
    if y.is_zero():
        return x
    if x.is_zero():
        return y
    return normalize(x.transactions + y.transactions)


def scale(x: CashFlowStream, lam: Number) -> CashFlowStream:
    lam = to_fraction(lam)
    if lam <= 0:
        raise InvalidScale(f"scale factor must be positive, got {lam}")
    return CashFlowStream(tuple((t, a * lam) for t, a in x.transactions))


def negate(x: CashFlowStream) -> CashFlowStream:
    return CashFlowStream(tuple((t, -a) for t, a in x.transactions))


def cumulative_at(x: CashFlowStream, t: Number) -> Fraction:
    """Lender balance at time ``t``: the sum of amounts dated at or before ``t``."""
    t = to_fraction(t)
    if t < 0:
        raise InvalidTime(f"negative time {t}")
    total = Fraction(0)
    for tk, a in x.transactions:
        if tk > t:
            break
        total += a
    return total


def cumulative_balances(x: CashFlowStream) -> list:
    out = []
    total = Fraction(0)
    for _, a in x.transactions:
        total += a
        out.append(total)
    return out


def dominates(x: CashFlowStream, y: CashFlowStream) -> bool:
    """True iff ``x <= y``: the balance of ``x - y`` is never positive."""
    return all(b <= 0 for b in cumulative_balances(combine(x, negate(y))))


def maturity(x: CashFlowStream) -> Fraction:
    return x.transactions[-1][0] if x.transactions else Fraction(0)


def total(x: CashFlowStream) -> Fraction:
    return sum(x.amounts, Fraction(0))


def earliest_sign(x: CashFlowStream) -> Sign:
    if not x.transactions:
        return Sign.ZERO
    return Sign.of(x.transactions[0][1])


def latest_sign(x: CashFlowStream) -> Sign:
    if not x.transactions:
        return Sign.ZERO
    return Sign.of(x.transactions[-1][1])


def atom(t: Number, amount: Number = 1) -> CashFlowStream:
    """``amount`` received at time ``t``."""
    return normalize([(t, amount)])

