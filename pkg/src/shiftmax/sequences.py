"""Moduli of regularity ``a = (a_n)`` and coefficient gauges ``b = (b_w)``.

Both are described symbolically so that their terms can be produced as exact
:class:`~shiftmax.magnitude.Magnitude` values at any level, however small.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .magnitude import Magnitude

DOUBLY_EXPONENTIAL = "doubly-exponential"
GEOMETRIC = "geometric"
LOG2_TABLE = "log2-table"


@dataclass(frozen=True)
class SequenceSpec:
    """A strictly decreasing sequence ``a_n -> 0``.

    ``doubly-exponential``: ``a_n = 2**-e_n`` with ``e_{n+1} = e_n + 2**(n+2)``.
    ``geometric``: ``a_n = theta**n``.
    ``log2-table``: ``a_n = 2**log2_values[n]``; past the table each step
    subtracts ``tail_step`` from the exponent (if given).
    """

    kind: str
    e0: int = 0
    theta: Optional[Fraction] = None
    log2_values: tuple = ()
    tail_step: Optional[int] = None

    def __post_init__(self):
        if self.kind == DOUBLY_EXPONENTIAL:
            return
        if self.kind == GEOMETRIC:
            if self.theta is None or not 0 < Fraction(self.theta) < 1:
                raise ValueError("geometric sequence needs 0 < theta < 1")
            object.__setattr__(self, "theta", Fraction(self.theta))
            return
        if self.kind == LOG2_TABLE:
            vals = tuple(int(v) for v in self.log2_values)
            if not vals:
                raise ValueError("log2 table is empty")
            if any(b >= a for a, b in zip(vals, vals[1:])):
                raise ValueError("log2 table must be strictly decreasing")
            if self.tail_step is not None and self.tail_step <= 0:
                raise ValueError("tail_step must be positive")
            object.__setattr__(self, "log2_values", vals)
            return
        raise ValueError(f"unknown sequence kind {self.kind!r}")

    def exponent(self, n: int) -> int:
        """``e_n`` for the doubly-exponential kind (``a_n = 2**-e_n``)."""
        return self.e0 + (1 << (n + 2)) - 4

    def term(self, n: int) -> Magnitude:
        if n < 0:
            raise ValueError("negative index")
        if self.kind == DOUBLY_EXPONENTIAL:
            return Magnitude.pow2(-self.exponent(n))
        if self.kind == GEOMETRIC:
            return Magnitude(self.theta**n)
        vals = self.log2_values
        if n < len(vals):
            return Magnitude.pow2(vals[n])
        if self.tail_step is None:
            raise ValueError(f"sequence undefined at n={n} (past the table)")
        return Magnitude.pow2(vals[-1] - self.tail_step * (n - len(vals) + 1))

    def value(self, n: int) -> Fraction:
        return self.term(n).to_fraction()

    def ratio_bound(self, n: int) -> Optional[Magnitude]:
        """Upper bound on ``a_{j+1}/a_j`` valid for every ``j >= n``.

        ``None`` when the sequence says nothing about that range.
        """
        if self.kind == DOUBLY_EXPONENTIAL:
            return Magnitude.pow2(-(1 << (n + 2)))
        if self.kind == GEOMETRIC:
            return Magnitude(self.theta)
        vals = self.log2_values
        steps = [b - a for a, b in zip(vals[n:], vals[n + 1:])]
        if self.tail_step is None:
            return None
        steps.append(-self.tail_step)
        return Magnitude.pow2(max(steps))

    def to_json(self) -> dict:
        if self.kind == DOUBLY_EXPONENTIAL:
            return {"kind": self.kind, "e0": self.e0}
        if self.kind == GEOMETRIC:
            return {"kind": self.kind, "theta": str(self.theta)}
        out = {"kind": self.kind, "log2_values": list(self.log2_values)}
        if self.tail_step is not None:
            out["tail_step"] = self.tail_step
        return out

    @classmethod
    def from_json(cls, obj) -> "SequenceSpec":
        if isinstance(obj, str):
            return parse_sequence(obj)
        kind = obj.get("kind")
        if kind == DOUBLY_EXPONENTIAL:
            return cls(kind, e0=int(obj.get("e0", 0)))
        if kind == GEOMETRIC:
            return cls(kind, theta=Fraction(obj["theta"]))
        if kind == LOG2_TABLE:
            tail = obj.get("tail_step")
            return cls(kind, log2_values=tuple(obj["log2_values"]),
                       tail_step=None if tail is None else int(tail))
        raise ValueError(f"unknown sequence kind {kind!r}")


def doubly_exponential(e0: int = 0) -> SequenceSpec:
    return SequenceSpec(DOUBLY_EXPONENTIAL, e0=e0)


def geometric(theta) -> SequenceSpec:
    return SequenceSpec(GEOMETRIC, theta=Fraction(theta))


def log2_table(values, tail_step: Optional[int] = None) -> SequenceSpec:
    return SequenceSpec(LOG2_TABLE, log2_values=tuple(values), tail_step=tail_step)


DEFAULT_SEQUENCE = doubly_exponential(0)


def parse_sequence(text: str) -> SequenceSpec:
    """Parse the command-line shorthand for a sequence.

    ``default`` | ``doubly-exponential[:E0]`` | ``geometric:THETA`` |
    ``log2:V0,V1,...[;tail=STEP]``
    """
    text = text.strip()
    if text == "default":
        return DEFAULT_SEQUENCE
    head, _, rest = text.partition(":")
    if head == DOUBLY_EXPONENTIAL:
        return doubly_exponential(int(rest) if rest else 0)
    if head == GEOMETRIC:
        return geometric(Fraction(rest))
    if head in ("log2", LOG2_TABLE):
        body, _, tail = rest.partition(";")
        step = None
        if tail:
            key, _, val = tail.partition("=")
            if key.strip() != "tail":
                raise ValueError(f"bad sequence option {tail!r}")
            step = int(val)
        return log2_table([int(v) for v in body.split(",")], step)
    raise ValueError(f"cannot parse sequence {text!r}")


_POW2_N = re.compile(r"^2\^(-?\d*)n$")
_POW2_CONST = re.compile(r"^2\^(-?\d+)$")
_HARMONIC = re.compile(r"^n\^-(\d+)$")


@dataclass(frozen=True)
class GaugeSpec:
    """A gauge ``b_w`` given by a level rule plus optional per-word overrides.

    The rule is a ``*``-separated product of factors: ``a_n``, ``2^-n`` (or
    ``2^kn``), ``n^-k`` (read as ``max(n, 1)**-k``), ``2^k`` and rational
    constants.  ``depth`` is the sampling cutoff ``D``; the three constants
    are the finite-horizon stand-ins for the asymptotic conditions.
    """

    rule: str = "2^-n*a_n"
    overrides: tuple = ()
    depth: int = 5
    c_eva: Fraction = Fraction(1)
    c_adm: Fraction = Fraction(1)
    c_lin: int = 4
    _factors: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        const, slope, harmonic, uses_a = Fraction(1), 0, 0, False
        for tok in (t.strip() for t in self.rule.split("*")):
            if tok == "a_n":
                uses_a = True
            elif m := _POW2_N.match(tok):
                s = m.group(1)
                slope += -1 if s == "-" else (1 if s == "" else int(s))
            elif m := _HARMONIC.match(tok):
                harmonic += int(m.group(1))
            elif m := _POW2_CONST.match(tok):
                const *= Fraction(2) ** int(m.group(1))
            else:
                try:
                    const *= Fraction(tok)
                except (ValueError, ZeroDivisionError):
                    raise ValueError(f"bad gauge factor {tok!r}") from None
        if const <= 0:
            raise ValueError("gauge constant must be positive")
        ovr = tuple(sorted((str(w), Fraction(v)) for w, v in dict(self.overrides).items()))
        if any(v <= 0 for _, v in ovr):
            raise ValueError("gauge values must be positive")
        if any(set(w) - {"0", "1"} for w, _ in ovr):
            raise ValueError("override keys must be binary words")
        object.__setattr__(self, "overrides", ovr)
        object.__setattr__(self, "c_eva", Fraction(self.c_eva))
        object.__setattr__(self, "c_adm", Fraction(self.c_adm))
        object.__setattr__(self, "_factors", (const, slope, harmonic, uses_a))

    def level_rule(self, n: int, a: SequenceSpec) -> Magnitude:
        """The rule's value at level ``n`` (ignores overrides)."""
        const, slope, harmonic, uses_a = self._factors
        mag = Magnitude(const / Fraction(max(n, 1)) ** harmonic, slope * n)
        return mag * a.term(n) if uses_a else mag

    def _overrides_at(self, n: int) -> dict:
        return {w: v for w, v in self.overrides if len(w) == n}

    def b(self, word: str, a: SequenceSpec) -> Magnitude:
        for w, v in self.overrides:
            if w == word:
                return Magnitude(v)
        return self.level_rule(len(word), a)

    def _level_values(self, n: int, a: SequenceSpec) -> list:
        ovr = self._overrides_at(n)
        vals = [Magnitude(v) for v in ovr.values()]
        if len(ovr) < (1 << n):
            vals.append(self.level_rule(n, a))
        return vals

    def bar(self, n: int, a: SequenceSpec) -> Magnitude:
        """``max_{|w|=n} b_w``."""
        return max(self._level_values(n, a))

    def under(self, n: int, a: SequenceSpec) -> Magnitude:
        """``min_{|w|=n} b_w``."""
        return min(self._level_values(n, a))

    def override_depth(self) -> int:
        """First level from which no override applies."""
        return max((len(w) + 1 for w, _ in self.overrides), default=0)

    def ratio_bound(self, n: int, a: SequenceSpec) -> Optional[Magnitude]:
        """Upper bound on ``bar(j+1)/bar(j)`` for all ``j >= n``."""
        if n < self.override_depth():
            return None
        _, slope, _, uses_a = self._factors
        # n^-k only shrinks from one level to the next
        r = Magnitude.pow2(slope)
        if uses_a:
            q = a.ratio_bound(n)
            if q is None:
                return None
            r = r * q
        return r

    @property
    def level_uniform(self) -> bool:
        return not self.overrides

    def to_json(self) -> dict:
        out = {"rule": self.rule, "depth": self.depth, "C_eva": str(self.c_eva),
               "C_adm": str(self.c_adm), "C_lin": self.c_lin}
        if self.overrides:
            out["overrides"] = {w: str(v) for w, v in self.overrides}
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "GaugeSpec":
        return cls(
            rule=obj.get("rule", "2^-n*a_n"),
            overrides=tuple((w, Fraction(v)) for w, v in obj.get("overrides", {}).items()),
            depth=int(obj.get("depth", 5)),
            c_eva=Fraction(obj.get("C_eva", 1)),
            c_adm=Fraction(obj.get("C_adm", 1)),
            c_lin=int(obj.get("C_lin", 4)),
        )
