"""Gap-criterion certificates and the probability bounds built on them.

A function is handed over as an exact head (a step function) plus a bound on
every Haar coefficient the head does not see.  At level ``n`` the maximizer
of ``A_n f`` is certified as the locked measure of ``f`` when the gap of
``A_n f`` beats the weighted tail ``sum_{k>=n} (k-n+1) max_{|w|=k} |c_w|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from . import config
from .conditions import check_admissible, check_summable
from .debruijn import PeriodicMeasure
from .haar import (
    StepFunction,
    TailError,
    analytic_level_terms,
    forward_transform,
    truncate,
    weighted_tail_sum,
)
from .magnitude import Magnitude, log2
from .optimize import ergodic_supremum
from .sequences import GaugeSpec, SequenceSpec

CONSERVATIVE = "conservative"
SHARP = "sharp"
REASON_TIE = "tie"
REASON_GAP = "gap does not exceed tail"
REASON_TAIL = "tail does not certify"


@dataclass(frozen=True)
class AnalyticTail:
    """Coefficients of level ``k >= start`` bounded by ``a_k * lip0 + bar(b)_k``."""

    a: SequenceSpec
    gauge: Optional[GaugeSpec]
    lip0: Fraction = Fraction(0)
    start: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lip0", Fraction(self.lip0))
        if self.lip0 < 0:
            raise ValueError("Lipschitz constant must be nonnegative")
        ok = _summable(self.a)
        if not ok.ok:
            raise ValueError(f"sequence is not summable against n: {ok.reason}")

    def parts(self):
        return analytic_level_terms(self.lip0, self.a, self.gauge)


@dataclass(frozen=True)
class ExplicitTail:
    """Per-level bounds ``bounds[k - start]``; past the table each level is
    ``ratio`` times the previous one.  An empty table is the zero tail."""

    bounds: tuple = ()
    start: int = 0
    ratio: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(Fraction(b) for b in self.bounds))
        object.__setattr__(self, "ratio", Fraction(self.ratio))
        if any(b < 0 for b in self.bounds) or self.ratio < 0:
            raise ValueError("tail bounds must be nonnegative")

    @classmethod
    def zero(cls, start: int = 0) -> "ExplicitTail":
        return cls((), start)

    def parts(self):
        table, start, r = self.bounds, self.start, self.ratio
        last = start + len(table) - 1

        def terms(k):
            if k <= last:
                return [Magnitude(table[k - start])]
            if not table:
                return []
            return [Magnitude(table[-1] * r ** (k - last))]

        def ratio(k):
            return Magnitude(r) if k >= last else None

        return terms, ratio


Tail = Union[AnalyticTail, ExplicitTail]


@lru_cache(maxsize=None)
def _tail_only(tail: Tail, n: int) -> Fraction:
    terms, ratio = tail.parts()
    return weighted_tail_sum(n, terms, ratio)


@lru_cache(maxsize=None)
def _summable(a: SequenceSpec):
    return check_summable(a)


@dataclass(frozen=True)
class FunctionWithTail:
    """``head`` holds the exact Haar data below its level; ``tail`` covers
    every level from ``tail.start`` on (``tail.start <= head.level``)."""

    head: StepFunction
    tail: Tail
    _coeffs: object = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.tail.start > self.head.level:
            raise ValueError("tail must start at or below the head level")
        object.__setattr__(self, "_coeffs", forward_transform(self.head))

    @property
    def level(self) -> int:
        return self.head.level

    def coeff_bound(self, k: int) -> Fraction:
        """``max_{|w|=k} |c_w|`` read off the head (zero at or past its level)."""
        return self._coeffs.level_max(k) if k < self.level else Fraction(0)

    def weighted_tail(self, n: int, mode: str = CONSERVATIVE) -> Fraction:
        """Upper bound on ``sum_{k>=n} (k-n+1) max_{|w|=k} |c_w(f)|``.

        Conservative mode trusts the tail bound from ``max(n, tail.start)``;
        sharp mode uses the head's own coefficients up to its level.
        """
        if mode not in (CONSERVATIVE, SHARP):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == CONSERVATIVE and self.tail.start <= n:
            return _tail_only(self.tail, n)
        switch = max(n, self.tail.start) if mode == CONSERVATIVE else self.level
        t_terms, t_ratio = self.tail.parts()

        def terms(k):
            if k >= switch:
                return t_terms(k)
            return [Magnitude(self.coeff_bound(k))]

        def ratio(k):
            return t_ratio(k) if k >= switch else None

        return weighted_tail_sum(n, terms, ratio, max(3 * n + config.HORIZON_PAD, switch + 1))


@dataclass(frozen=True)
class Certificate:
    level: int
    maximizer: PeriodicMeasure
    gap: Fraction
    tail: Optional[Fraction]
    certified: bool
    reason: Optional[str] = None

    def __post_init__(self):
        if self.maximizer.period > 1 << (self.level - 1):
            raise AssertionError("maximizer period exceeds 2^(level-1)")
        if self.certified != (self.tail is not None and self.gap > self.tail):
            raise AssertionError("certified must be equivalent to gap > tail")

    @property
    def margin(self) -> Optional[Fraction]:
        return None if self.tail is None else self.gap - self.tail

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "maximizer": self.maximizer.word,
            "period": self.maximizer.period,
            "gap": str(self.gap),
            "tail": None if self.tail is None else str(self.tail),
            "tail_log2": None if self.tail is None else log2_str(self.tail),
            "margin": None if self.margin is None else str(self.margin),
            "certified": self.certified,
            "reason": self.reason,
        }


def log2_str(x) -> str:
    """Decimal rendering of ``log2(x)`` for reports; ``-inf`` for zero."""
    v = x.log2() if isinstance(x, Magnitude) else log2(Fraction(x))
    return "-inf" if v == -math.inf else f"{v:.6f}"


def check_gap_criterion(f: FunctionWithTail, n: int, mode: str = CONSERVATIVE) -> Certificate:
    """Test the gap condition for ``f`` at level ``n``.

    Ties and tails without a summable majorant yield uncertified results
    with a reason rather than exceptions.
    """
    if not 1 <= n <= f.level:
        raise ValueError(f"level must be in 1..{f.level}, got {n}")
    res = ergodic_supremum(truncate(f.head, n))
    try:
        tail = f.weighted_tail(n, mode)
    except TailError:
        tail = None
    if res.tie:
        return Certificate(n, res.maximizer, res.gap, tail, False, REASON_TIE)
    if tail is None:
        return Certificate(n, res.maximizer, res.gap, None, False, REASON_TAIL)
    ok = res.gap > tail
    return Certificate(n, res.maximizer, res.gap, tail, ok, None if ok else REASON_GAP)


def smallest_certifying_level(f: FunctionWithTail, max_level: Optional[int] = None,
                              mode: str = CONSERVATIVE) -> Optional[Certificate]:
    """First certificate over ``n = 1..min(max_level, level)``, or ``None``.

    Each level is tested on its own; certification at one level says
    nothing about the next.
    """
    top = f.level if max_level is None else min(max_level, f.level)
    for n in range(1, top + 1):
        cert = check_gap_criterion(f, n, mode)
        if cert.certified:
            return cert
    return None


def slice_bound(box_thickness, linf_norm, delta) -> Magnitude:
    """``2 delta / (|L|_inf tau(Q))``: the relative volume of a slab in a box."""
    args = (box_thickness, linf_norm, delta)
    if any((x.is_zero() if isinstance(x, Magnitude) else Fraction(x) <= 0) for x in args):
        raise ValueError("slice bound needs positive arguments")
    t, l, d = (Magnitude.of(x) for x in args)
    return Magnitude(Fraction(2)) * d / (l * t)


def box_thickness(gauge: GaugeSpec, a: SequenceSpec, n: int) -> tuple:
    """``(min_{|w|<n} b_w, level attaining it)``; ties go to the deepest level."""
    if n < 1:
        raise ValueError("box thickness needs n >= 1")
    best, level = None, None
    for k in range(n):
        u = gauge.under(k, a)
        if best is None or u <= best:
            best, level = u, k
    return best, level


@dataclass(frozen=True)
class FailureBound:
    level: int
    value: Magnitude
    clamped: bool
    delta: Fraction
    thickness: Magnitude
    thickness_level: int

    def as_fraction(self) -> Fraction:
        return self.value.to_fraction()

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "bound": str(self.as_fraction()),
            "bound_log2": log2_str(self.value),
            "clamped": self.clamped,
            "delta_log2": log2_str(self.delta),
            "thickness_log2": log2_str(self.thickness),
            "thickness_level": self.thickness_level,
        }


def failure_probability_bound(n: int, a: SequenceSpec, gauge: GaugeSpec, lip0=0,
                              horizon: Optional[int] = None) -> FailureBound:
    """``2**(2**n + n + 1) delta_n / tau(Q_n)``, clamped to 1.

    ``tau(Q_n)`` is the exact minimum of ``b_w`` over ``|w| < n``; the level
    where it is attained is reported so callers can see whether it sits at
    ``n - 1``.
    """
    horizon = max(n, 1) + config.HORIZON_PAD if horizon is None else horizon
    adm = check_admissible(gauge, a, horizon)
    if not adm.ok:
        raise ValueError(f"gauge is not admissible: {adm.reason}")
    delta = _tail_only(AnalyticTail(a, gauge, lip0), n)
    tau, level = box_thickness(gauge, a, n)
    value = Magnitude(delta, (1 << n) + n + 1) / tau
    clamped = value > Magnitude(Fraction(1))
    return FailureBound(n, Magnitude(Fraction(1)) if clamped else value, clamped, delta, tau, level)
