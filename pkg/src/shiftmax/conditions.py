"""Finite-horizon checks of the asymptotic hypotheses on sequences and gauges.

Each ``o(.)`` or ``O(.)`` condition becomes an explicit inequality with a
user-visible constant, tested level by level up to a horizon.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Optional

from .haar import TailError, weighted_tail_sum
from .magnitude import Magnitude
from .sequences import GaugeSpec, SequenceSpec


class CheckResult(NamedTuple):
    ok: bool
    first_violation: Optional[int]
    reason: str = ""


def check_evanescent(a: SequenceSpec, c=1, horizon: int = 8) -> CheckResult:
    """``a_{n+1} / a_n <= C * 2**-(2**(n+2))`` for every ``n < horizon``."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("evanescence constant must be positive")
    for n in range(horizon):
        if a.term(n + 1) / a.term(n) > Magnitude(c, -(1 << (n + 2))):
            return CheckResult(False, n, f"a_{n + 1}/a_{n} exceeds C*2^-{1 << (n + 2)}")
    return CheckResult(True, None)


def check_admissible(b: GaugeSpec, a: SequenceSpec, horizon: int = 8) -> CheckResult:
    """Proxy for ``bar(b)_n = o(a_n)`` and ``log2(a_n / under(b)_n) = O(n)``.

    For every ``n <= horizon``: ``bar(b)_n / a_n <= C_adm / max(n, 1)`` and
    ``a_n / under(b)_n <= 2**(C_lin * max(n, 1))``.
    """
    for n in range(horizon + 1):
        m = max(n, 1)
        an = a.term(n)
        if b.bar(n, a) / an > Magnitude(b.c_adm / m):
            return CheckResult(False, n, f"bar(b)_{n}/a_{n} exceeds C_adm/{m} (C_adm={b.c_adm})")
        if an / b.under(n, a) > Magnitude.pow2(b.c_lin * m):
            return CheckResult(False, n,
                               f"log2(a_{n}/under(b)_{n}) exceeds C_lin*{m} (C_lin={b.c_lin})")
    return CheckResult(True, None)


def check_summable(a: SequenceSpec, horizon: int = 8) -> CheckResult:
    """``sum n a_n < infinity``, certified by a geometric majorant."""
    try:
        weighted_tail_sum(0, lambda k: [a.term(k)], a.ratio_bound, horizon)
    except TailError as exc:
        return CheckResult(False, None, str(exc))
    return CheckResult(True, None)
