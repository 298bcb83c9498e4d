"""Float brute-force checker for NPV signs and roots in rate space.

It works directly on ``s -> F_s(x)`` with a dense grid and bisection and
shares nothing with the exact polynomial code, so it can cross-check it.
A scan is evidence, not proof: touching roots and features narrower than
the grid spacing are invisible to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from . import kernels
from .cashflow import CashFlowStream
from .discounting import npv_float

# a value counts as nonzero only beyond this multiple of the rounding bound
ROUNDING_SLACK = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class ScanConfig:
    s_lo: float = 0.0
    s_hi: float = 10.0
    grid_points: int = 10_000
    bisection_tolerance: float = 1e-12

    def __post_init__(self):
        if not self.s_lo < self.s_hi:
            raise ValueError("need s_lo < s_hi")
        if self.grid_points < 2:
            raise ValueError("need at least 2 grid points")

    @property
    def step(self) -> float:
        return (self.s_hi - self.s_lo) / (self.grid_points - 1)


@dataclass(frozen=True)
class SignChange:
    s_lo: float
    s_hi: float
    direction: int  # +1: negative to positive as s grows


@dataclass(frozen=True)
class NoViolationFound:
    pass


@dataclass(frozen=True)
class ViolationFound:
    s: float
    npv: float


OracleResult = Union[NoViolationFound, ViolationFound]


def _arrays(x: CashFlowStream):
    times = np.array([float(t) for t in x.times], dtype=np.float64)
    amounts = np.array([float(a) for a in x.amounts], dtype=np.float64)
    return times, amounts


def _grid(x: CashFlowStream, cfg: ScanConfig):
    s = np.linspace(cfg.s_lo, cfg.s_hi, cfg.grid_points)
    times, amounts = _arrays(x)
    values = kernels.npv_grid(times, amounts, s)
    scale = kernels.npv_grid(times, np.abs(amounts), s)
    return s, values, scale


def _signs(values, scale):
    tol = ROUNDING_SLACK * scale
    out = np.zeros(len(values), dtype=np.int8)
    out[values > tol] = 1
    out[values < -tol] = -1
    return out


def scan_signs(x: CashFlowStream, cfg: ScanConfig = ScanConfig()) -> List[SignChange]:
    """Grid-adjacent sign changes of ``F_s(x)``; grid values lost in rounding are skipped."""
    if x.is_zero():
        return []
    s, values, scale = _grid(x, cfg)
    signs = _signs(values, scale)
    out = []
    last_i = None
    for i in np.flatnonzero(signs):
        if last_i is not None and signs[i] != signs[last_i]:
            out.append(SignChange(float(s[last_i]), float(s[i]), int(signs[i])))
        last_i = i
    return out


def _bisect(x: CashFlowStream, lo: float, hi: float, direction: int, tol: float) -> Tuple[float, float]:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        v = npv_float(x, mid)
        if v == 0:
            return (mid, mid)
        # left end has sign -direction
        if (v > 0) == (direction < 0):
            lo = mid
        else:
            hi = mid
    return (lo, hi)


def bracket_roots(x: CashFlowStream, cfg: ScanConfig = ScanConfig()) -> List[Tuple[float, float]]:
    """Each scanned sign change narrowed by bisection to ``cfg.bisection_tolerance``."""
    return [_bisect(x, c.s_lo, c.s_hi, c.direction, cfg.bisection_tolerance) for c in scan_signs(x, cfg)]


def _clearly(x: CashFlowStream, s: float, sign: int) -> Optional[float]:
    times, amounts = _arrays(x)
    v = float(kernels.npv_grid(times, amounts, np.array([s]))[0])
    scale = float(kernels.npv_grid(times, np.abs(amounts), np.array([s]))[0])
    if sign * v > ROUNDING_SLACK * scale:
        return v
    return None


def _tail_violation(x: CashFlowStream, s_from: float) -> Optional[ViolationFound]:
    # F_s tends to sign(earliest amount) * inf-weight as s grows
    if x.is_zero() or x.amounts[0] <= 0:
        return None
    s = max(s_from, 1.0)
    for _ in range(64):
        v = _clearly(x, s, 1)
        if v is not None:
            return ViolationFound(s, v)
        s *= 2
        if math.isinf(s):
            break
    return None


def oracle_in_cap_plus(x: CashFlowStream, r: float, cfg: ScanConfig = ScanConfig()) -> OracleResult:
    """Look for ``s >= r`` with ``F_s(x) > 0`` on a grid over ``[r, max(cfg.s_hi, r)]``.

    A reported violation is genuine (its value exceeds the float rounding
    bound); not finding one proves nothing.
    """
    if x.is_zero():
        return NoViolationFound()
    hi = cfg.s_hi if cfg.s_hi > r else r + (cfg.s_hi - cfg.s_lo)
    scan = ScanConfig(r, hi, cfg.grid_points, cfg.bisection_tolerance)
    s, values, scale = _grid(x, scan)
    signs = _signs(values, scale)
    hits = np.flatnonzero(signs > 0)
    if len(hits):
        i = int(hits[np.argmax(values[hits])])
        return ViolationFound(float(s[i]), float(values[i]))
    tail = _tail_violation(x, hi)
    return tail if tail is not None else NoViolationFound()


def oracle_find_negative(x: CashFlowStream, cfg: ScanConfig) -> Optional[float]:
    """A grid rate in ``[cfg.s_lo, cfg.s_hi]`` with ``F_s(x)`` clearly negative."""
    if x.is_zero():
        return None
    s, values, scale = _grid(x, cfg)
    hits = np.flatnonzero(_signs(values, scale) < 0)
    if len(hits):
        return float(s[int(hits[np.argmin(values[hits])])])
    return None
