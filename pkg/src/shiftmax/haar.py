"""Words, step functions and their Haar series on the Cantor set {0,1}^N.

A word is a plain ``str`` over ``"01"``; the empty word names the whole
space.  Words of one length are ordered lexicographically, which is the
same as ordering them by ``int(word, 2)``.

Normalization: ``h_w = (chi[w0] - chi[w1]) / 2`` and
``c_w(f) = 2**(|w|+2) * integral(f h_w dbeta)``, which works out to
``c_w = mean(f on [w0]) - mean(f on [w1])``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

from . import config
from .magnitude import Magnitude
from .sequences import GaugeSpec, SequenceSpec

HALF = Fraction(1, 2)


class TailError(ValueError):
    """A weighted tail sum could not be bounded at the requested horizon."""


def check_word(word: str) -> str:
    if not isinstance(word, str) or set(word) - {"0", "1"}:
        raise ValueError(f"not a binary word: {word!r}")
    return word


def words(n: int) -> list:
    """All words of length ``n`` in lexicographic order."""
    return ["".join(p) for p in product("01", repeat=n)]


def word_index(word: str) -> int:
    return int(word, 2) if word else 0


def haar_eval(omega: str, x: str) -> Fraction:
    """Value of ``h_omega`` at any point whose first symbols are ``x``."""
    check_word(omega)
    check_word(x)
    if len(x) <= len(omega):
        raise ValueError("insufficient depth")
    if not x.startswith(omega):
        return Fraction(0)
    return HALF if x[len(omega)] == "0" else -HALF


def _check_level(level: int):
    if level < 0:
        raise ValueError("negative level")
    if level > config.max_level():
        raise ValueError(f"level {level} exceeds the cap {config.max_level()}")


@dataclass(frozen=True)
class StepFunction:
    """A function constant on each cylinder of level ``level``."""

    level: int
    values: tuple

    def __post_init__(self):
        _check_level(self.level)
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != 1 << self.level:
            raise ValueError(f"level {self.level} needs {1 << self.level} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, c, level: int = 0) -> "StepFunction":
        return cls(level, (Fraction(c),) * (1 << level))

    @classmethod
    def indicator(cls, word: str, level: Optional[int] = None) -> "StepFunction":
        """``chi[word]`` as a step function (of level ``len(word)`` by default)."""
        check_word(word)
        level = len(word) if level is None else level
        if level < len(word):
            raise ValueError("level below the word length")
        return cls(level, tuple(int(w.startswith(word)) for w in words(level)))

    @classmethod
    def from_callable(cls, level: int, fn: Callable[[str], object]) -> "StepFunction":
        return cls(level, tuple(fn(w) for w in words(level)))

    def __call__(self, x: str) -> Fraction:
        """Value on the cylinder given by the first ``level`` symbols of ``x``."""
        if len(x) < self.level:
            raise ValueError("insufficient depth")
        return self.values[word_index(x[: self.level])]

    def lift(self, level: int) -> "StepFunction":
        """The same function viewed at a finer level."""
        if level < self.level:
            raise ValueError("cannot lift to a coarser level")
        rep = 1 << (level - self.level)
        return StepFunction(level, tuple(v for v in self.values for _ in range(rep)))

    def sup_norm(self) -> Fraction:
        return max(abs(v) for v in self.values)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        lv = max(self.level, other.level)
        a, b = self.lift(lv), other.lift(lv)
        return StepFunction(lv, tuple(x + y for x, y in zip(a.values, b.values)))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, lam) -> "StepFunction":
        lam = Fraction(lam)
        return StepFunction(self.level, tuple(lam * v for v in self.values))

    def shift(self, c) -> "StepFunction":
        c = Fraction(c)
        return StepFunction(self.level, tuple(v + c for v in self.values))

    def to_json(self) -> dict:
        return {"level": self.level, "values": [str(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj: dict) -> "StepFunction":
        return cls(int(obj["level"]), tuple(Fraction(v) for v in obj["values"]))


@dataclass(frozen=True)
class HaarCoefficients:
    """Mean ``c`` and coefficients ``c_w`` for ``|w| < level``.

    ``by_level[k][i]`` is the coefficient of the ``i``-th word of length ``k``.
    """

    mean: Fraction
    by_level: tuple

    def __post_init__(self):
        object.__setattr__(self, "mean", Fraction(self.mean))
        levels = tuple(tuple(Fraction(c) for c in row) for row in self.by_level)
        for k, row in enumerate(levels):
            if len(row) != 1 << k:
                raise ValueError(f"level {k} needs {1 << k} coefficients")
        _check_level(len(levels))
        object.__setattr__(self, "by_level", levels)

    @property
    def level(self) -> int:
        return len(self.by_level)

    def coeff(self, word: str) -> Fraction:
        if len(word) >= self.level:
            return Fraction(0)
        return self.by_level[len(word)][word_index(word)]

    def __len__(self):
        return (1 << self.level) - 1

    def as_dict(self) -> dict:
        return {w: c for k in range(self.level) for w, c in zip(words(k), self.by_level[k])}

    @classmethod
    def from_dict(cls, mean, coeffs: dict, level: Optional[int] = None) -> "HaarCoefficients":
        for w in coeffs:
            check_word(w)
        if level is None:
            level = max((len(w) + 1 for w in coeffs), default=0)
        rows = [[Fraction(0)] * (1 << k) for k in range(level)]
        for w, c in coeffs.items():
            if len(w) >= level:
                raise ValueError(f"coefficient {w!r} beyond level {level}")
            rows[len(w)][word_index(w)] = Fraction(c)
        return cls(Fraction(mean), tuple(tuple(r) for r in rows))

    def truncated(self, n: int) -> "HaarCoefficients":
        """Coefficients of ``A_n f``."""
        if n > self.level:
            raise ValueError(f"only {self.level} levels are known")
        return HaarCoefficients(self.mean, self.by_level[:n])

    def padded(self, level: int) -> "HaarCoefficients":
        rows = list(self.by_level)
        rows += [(Fraction(0),) * (1 << k) for k in range(len(rows), level)]
        return HaarCoefficients(self.mean, tuple(rows))

    def __add__(self, other: "HaarCoefficients") -> "HaarCoefficients":
        lv = max(self.level, other.level)
        a, b = self.padded(lv), other.padded(lv)
        rows = tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a.by_level, b.by_level))
        return HaarCoefficients(a.mean + b.mean, rows)

    def level_max(self, k: int) -> Fraction:
        """``max_{|w|=k} |c_w|``."""
        if k >= self.level:
            return Fraction(0)
        return max(abs(c) for c in self.by_level[k])

    def to_json(self) -> dict:
        return {"mean": str(self.mean), "level": self.level,
                "coeffs": {w: str(c) for w, c in self.as_dict().items()}}

    @classmethod
    def from_json(cls, obj: dict) -> "HaarCoefficients":
        level = obj.get("level")
        return cls.from_dict(Fraction(obj["mean"]),
                             {w: Fraction(c) for w, c in obj.get("coeffs", {}).items()},
                             None if level is None else int(level))


def forward_transform(f: StepFunction) -> HaarCoefficients:
    """Haar coefficients of a step function, exactly."""
    avg = list(f.values)
    rows = []
    for _ in range(f.level):
        rows.append(tuple(avg[2 * i] - avg[2 * i + 1] for i in range(len(avg) // 2)))
        avg = [(avg[2 * i] + avg[2 * i + 1]) / 2 for i in range(len(avg) // 2)]
    return HaarCoefficients(avg[0], tuple(reversed(rows)))


def inverse_transform(h: HaarCoefficients) -> StepFunction:
    """Sum of the (finite) Haar series as a step function of level ``h.level``."""
    vals = [h.mean]
    for row in h.by_level:
        nxt = []
        for v, c in zip(vals, row):
            nxt.append(v + c / 2)
            nxt.append(v - c / 2)
        vals = nxt
    return StepFunction(h.level, tuple(vals))


def cylinder_averages(f: StepFunction, n: int) -> StepFunction:
    """``A_n f`` computed by averaging ``f`` over each cylinder of level ``n``."""
    if n > f.level:
        raise ValueError(f"cannot average a level-{f.level} function at level {n}")
    size = 1 << (f.level - n)
    vals = f.values
    return StepFunction(n, tuple(sum(vals[i:i + size], Fraction(0)) / size
                                 for i in range(0, len(vals), size)))


def truncate(f: StepFunction, n: int) -> StepFunction:
    """``A_n f``; the truncated series and the cylinder averages must agree."""
    by_series = inverse_transform(forward_transform(f).truncated(n))
    by_average = cylinder_averages(f, n)
    assert by_series == by_average, "Haar truncation disagrees with cylinder averages"
    return by_series


def variation(f: StepFunction, n: int) -> Fraction:
    """Largest oscillation of ``f`` inside a cylinder of level ``n``."""
    if n < 0:
        raise ValueError("negative level")
    if n >= f.level:
        return Fraction(0)
    size = 1 << (f.level - n)
    vals = f.values
    return max(max(vals[i:i + size]) - min(vals[i:i + size])
               for i in range(0, len(vals), size))


def lipschitz_constant(f: StepFunction, a: SequenceSpec) -> Fraction:
    """Least Lipschitz constant for the ultrametric ``d_a`` (max of var_n / a_n)."""
    return max((variation(f, n) / a.value(n) for n in range(f.level)), default=Fraction(0))


def _rounded_up(p: Magnitude, floor_exp: int) -> Fraction:
    if p.ceil_log2() >= floor_exp:
        return p.to_fraction()
    return Magnitude.pow2(floor_exp).to_fraction()


def weighted_tail_sum(
    n: int,
    level_terms: Callable[[int], Iterable[Magnitude]],
    ratio_bound: Callable[[int], Optional[Magnitude]],
    horizon: Optional[int] = None,
    precision_bits: int = config.TAIL_PRECISION_BITS,
) -> Fraction:
    """Exact rational upper bound on ``sum_{k>=n} (k-n+1) * sum(level_terms(k))``.

    Levels are summed exactly up to ``horizon`` (default ``3n + 8``) or until
    the terms fall ``precision_bits`` below the first nonzero one.  The rest
    is bounded by the linearly weighted geometric series with ratio
    ``ratio_bound(k)``, an upper bound on the level-to-level ratio of every
    part from ``k`` on.  Terms too small to be worth materializing are
    rounded up, never down.
    """
    if horizon is None:
        horizon = 3 * n + config.HORIZON_PAD
    total = Fraction(0)
    floor_exp = None
    k = n
    cap = Magnitude.pow2(-64)
    while True:
        w = k - n + 1
        try:
            parts = [p for p in level_terms(k) if not p.is_zero()]
        except ValueError as exc:
            raise TailError(f"tail does not certify: {exc}") from None
        if not parts:
            q = ratio_bound(k)
            if q is not None:
                return total
            if k >= horizon:
                raise TailError("tail does not certify: no ratio bound at the horizon")
            k += 1
            continue
        top = max(p.ceil_log2() for p in parts)
        if floor_exp is None:
            floor_exp = top - precision_bits
        if k >= horizon or top < floor_exp:
            q = ratio_bound(k)
            if q is not None and q < 1:
                # sum_j (w + j) t q^j = t (w / (1-q) + q / (1-q)^2)
                r = (q if q > cap else cap).to_fraction()
                head = sum((_rounded_up(p, floor_exp) for p in parts), Fraction(0))
                return total + head * (w / (1 - r) + r / (1 - r) ** 2)
            if k >= horizon:
                raise TailError("tail does not certify at the horizon")
        total += w * sum((_rounded_up(p, floor_exp) for p in parts), Fraction(0))
        k += 1


def analytic_level_terms(lip, a: SequenceSpec, gauge: Optional[GaugeSpec]):
    """Per-level parts ``a_k * lip`` and ``bar(b)_k`` with their common ratio bound."""
    lip = Fraction(lip)
    if lip < 0:
        raise ValueError("Lipschitz constant must be nonnegative")

    def terms(k):
        out = []
        if lip:
            out.append(a.term(k) * lip)
        if gauge is not None:
            out.append(gauge.bar(k, a))
        return out

    def ratio(k):
        qs = []
        if lip:
            qs.append(a.ratio_bound(k))
        if gauge is not None:
            qs.append(gauge.ratio_bound(k, a))
        if any(q is None for q in qs):
            return None
        return max(qs, default=Magnitude(0))

    return terms, ratio


def tail_bound(lip, a: SequenceSpec, gauge: Optional[GaugeSpec], n: int,
               horizon: Optional[int] = None) -> Fraction:
    """``delta_n = sum_{k>=n} (k-n+1) (a_k lip + bar(b)_k)``, bounded above exactly.

    ``gauge=None`` stands for the zero gauge.
    """
    if n < 0:
        raise ValueError("negative level")
    terms, ratio = analytic_level_terms(lip, a, gauge)
    return weighted_tail_sum(n, terms, ratio, horizon)


def sup_norm_bound(mean, level_bounds: Sequence) -> Fraction:
    """``|c| + (1/2) sum_n bar(c)_n`` for finitely many coefficient levels."""
    return abs(Fraction(mean)) + sum((Fraction(b) for b in level_bounds), Fraction(0)) / 2


def variation_bound(level_bounds: Sequence, n: int) -> Fraction:
    """``sum_{k>=n} bar(c)_k`` for finitely many coefficient levels."""
    return sum((Fraction(b) for b in level_bounds[n:]), Fraction(0))
