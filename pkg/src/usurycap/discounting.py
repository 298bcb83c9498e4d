"""Exponential discounting, rate conventions and floating-rate compounding."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .cashflow import CashFlowStream, Number, to_fraction
from .errors import InvalidRate, InvalidTime, NotAligned
from .expoly import rational_root

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Effective:
    """Per-period effective rate ``rho`` (exact); logarithmic rate ``ln(1 + rho)``."""

    rho: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rho", to_fraction(self.rho))
        if self.rho <= -1:
            raise InvalidRate(f"effective rate must exceed -100%, got {self.rho}")

    @property
    def log_rate(self) -> float:
        return math.log1p(float(self.rho))

    @property
    def effective(self) -> float:
        return float(self.rho)

    @property
    def exact(self) -> bool:
        return True


@dataclass(frozen=True)
class LogFloat:
    """Logarithmic (continuously compounded) rate given as a float.

    Decisions at such a rate can only be approximate.
    """

    s: float

    def __post_init__(self):
        if not math.isfinite(self.s):
            raise InvalidRate(f"non-finite rate {self.s}")

    @property
    def log_rate(self) -> float:
        return float(self.s)

    @property
    def effective(self) -> float:
        return math.expm1(self.s)

    @property
    def exact(self) -> bool:
        return False


RateSpec = Union[Effective, LogFloat]


def effective(rho: Number) -> Effective:
    return Effective(to_fraction(rho))


def parse_percent(text: str) -> Fraction:
    """``"60%"`` -> 3/5; a bare number is read as a fraction (``"0.6"``)."""
    text = str(text).strip()
    if text.endswith("%"):
        return Fraction(text[:-1].strip()) / 100
    return Fraction(text)


def _term(a: float, s: float, t: float) -> float:
    try:
        return a * math.exp(-s * t)
    except OverflowError:
        return math.copysign(math.inf, a)


def npv_float(x: CashFlowStream, s: float) -> float:
    """``F_s(x) = sum a_k exp(-s t_k)`` in ascending time order."""
    total = 0.0
    for t, a in x.transactions:
        total += _term(float(a), s, float(t))
    if math.isinf(total) or math.isnan(total):
        log.warning("npv_float overflow at s=%r", s)
    return total


def discounted_partials_float(x: CashFlowStream, s: float) -> List[float]:
    out = []
    total = 0.0
    for t, a in x.transactions:
        total += _term(float(a), s, float(t))
        out.append(total)
    return out


def rational_power(base: Fraction, exponent: Fraction) -> Optional[Fraction]:
    """``base ** exponent`` if the result is rational, else None (``base > 0``)."""
    base = Fraction(base)
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return base ** exponent.numerator
    root = rational_root(base, exponent.denominator)
    if root is None:
        return None
    return root ** exponent.numerator


@dataclass(frozen=True)
class BenchmarkPath:
    """Piecewise-constant realized benchmark, one effective rate per period.

    ``segments`` holds ``(start_time, rate)`` pairs with the first start at 0;
    each rate applies from its start until the next start.
    """

    segments: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        segs = tuple((to_fraction(t), to_fraction(r)) for t, r in self.segments)
        if not segs or segs[0][0] != 0:
            raise ValueError("benchmark path must start at time 0")
        for (t0, _), (t1, _) in zip(segs, segs[1:]):
            if t1 <= t0:
                raise ValueError("segment start times must be strictly increasing")
        for _, r in segs:
            if r <= -1:
                raise InvalidRate(f"benchmark rate must exceed -100%, got {r}")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def constant(cls, rate: Number) -> "BenchmarkPath":
        return cls(((Fraction(0), to_fraction(rate)),))

    @classmethod
    def from_index(cls, levels: Sequence[Tuple[Number, Number]]) -> "BenchmarkPath":
        """Build from observed index values ``B(t)`` at whole periods.

        The per-period rate between consecutive observations is
        ``(B(t1)/B(t0)) ** (1/(t1-t0)) - 1``; it must be rational.
        """
        pts = [(to_fraction(t), to_fraction(b)) for t, b in levels]
        segs = []
        for (t0, b0), (t1, b1) in zip(pts, pts[1:]):
            factor = rational_power(b1 / b0, 1 / (t1 - t0))
            if factor is None:
                raise NotAligned(f"index ratio over [{t0}, {t1}] has no rational per-period rate")
            segs.append((t0, factor - 1))
        return cls(tuple(segs))

    def _pieces(self, t: Fraction):
        for i, (start, rate) in enumerate(self.segments):
            if start >= t:
                break
            end = self.segments[i + 1][0] if i + 1 < len(self.segments) else None
            stop = t if end is None or end > t else end
            yield stop - start, rate


def compound_factor(b: BenchmarkPath, t: Number) -> Fraction:
    """``prod (1 + rate_i) ** (periods of segment i before t)``, exactly."""
    t = to_fraction(t)
    if t < 0:
        raise InvalidTime(f"negative time {t}")
    factor = Fraction(1)
    for length, rate in b._pieces(t):
        piece = rational_power(1 + rate, length)
        if piece is None:
            raise NotAligned(f"(1 + {rate}) ** {length} is irrational")
        factor *= piece
    return factor


def compound_factor_float(b: BenchmarkPath, t: Number) -> float:
    t = to_fraction(t)
    return math.exp(sum(float(length) * math.log1p(float(rate)) for length, rate in b._pieces(t)))


def float_transform(x: CashFlowStream, b: BenchmarkPath) -> CashFlowStream:
    """The floating-rate loan: each amount compounded by the benchmark to its date."""
    return CashFlowStream(tuple((t, a * compound_factor(b, t)) for t, a in x.transactions))


def float_transform_approx(x: CashFlowStream, b: BenchmarkPath) -> List[Tuple[Fraction, float]]:
    """Float amounts for reporting when some dates are not period-aligned."""
    return [(t, float(a) * compound_factor_float(b, t)) for t, a in x.transactions]


def discounted_stream(x: CashFlowStream, rho: Number) -> CashFlowStream:
    """``x_r`` for ``r = ln(1 + rho)``: each amount times ``(1 + rho) ** -t``.

    Raises NotAligned when a factor is irrational.
    """
    rho = to_fraction(rho)
    out = []
    for t, a in x.transactions:
        factor = rational_power(1 + rho, -t)
        if factor is None:
            raise NotAligned(f"(1 + {rho}) ** {-t} is irrational")
        out.append((t, a * factor))
    return CashFlowStream(tuple(out))
