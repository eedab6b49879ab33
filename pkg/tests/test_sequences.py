from fractions import Fraction

import pytest

from shiftmax.magnitude import Magnitude
from shiftmax.sequences import (
    DEFAULT_SEQUENCE,
    GaugeSpec,
    SequenceSpec,
    doubly_exponential,
    geometric,
    log2_table,
    parse_sequence,
)


def test_doubly_exponential_exponents():
    a = doubly_exponential(0)
    e = [0]
    for n in range(8):
        e.append(e[-1] + (1 << (n + 2)))
    assert [a.exponent(n) for n in range(9)] == e
    for n in range(8):
        assert a.term(n + 1) / a.term(n) == Magnitude.pow2(-(1 << (n + 2)))


def test_sequences_strictly_decreasing():
    for a in (DEFAULT_SEQUENCE, geometric(Fraction(1, 3)), log2_table([0, -1, -5], 2)):
        vals = [a.term(n) for n in range(8)]
        assert all(y < x for x, y in zip(vals, vals[1:]))


def test_ratio_bounds_hold():
    for a in (DEFAULT_SEQUENCE, geometric(Fraction(2, 3)), log2_table([0, -3, -4, -9], 3)):
        for n in range(5):
            q = a.ratio_bound(n)
            for j in range(n, n + 6):
                assert a.term(j + 1) / a.term(j) <= q


def test_table_without_tail_is_finite():
    a = log2_table([0, -2])
    assert a.ratio_bound(0) is None
    with pytest.raises(ValueError):
        a.term(2)


@pytest.mark.parametrize("bad", [
    lambda: geometric(1),
    lambda: log2_table([0, 0]),
    lambda: log2_table([]),
    lambda: log2_table([0, -1], 0),
    lambda: SequenceSpec("nope"),
])
def test_invalid_sequences(bad):
    with pytest.raises(ValueError):
        bad()


def test_parse_and_json_round_trip():
    for text in ("default", "doubly-exponential:3", "geometric:1/2", "log2:0,-2,-7;tail=5"):
        a = parse_sequence(text)
        assert SequenceSpec.from_json(a.to_json()) == a
    assert parse_sequence("default") == DEFAULT_SEQUENCE
    with pytest.raises(ValueError):
        parse_sequence("log2:0,-1;step=2")


def test_gauge_rules():
    a = DEFAULT_SEQUENCE
    g = GaugeSpec("2^-n*a_n")
    assert g.b("0101", a) == Magnitude.pow2(-4) * a.term(4)
    h = GaugeSpec("n^-1*a_n")
    assert h.b("", a) == a.term(0)
    assert h.b("000", a) == Magnitude(Fraction(1, 3)) * a.term(3)
    c = GaugeSpec("3/4*2^-2n*2^5")
    assert c.b("01", a).to_fraction() == Fraction(3, 4) * Fraction(1, 16) * 32
    with pytest.raises(ValueError):
        GaugeSpec("b_n")


def test_gauge_overrides_and_extremes():
    a = DEFAULT_SEQUENCE
    g = GaugeSpec(overrides=(("01", Fraction(1, 1 << 20)),))
    assert g.under(2, a) == Magnitude(Fraction(1, 1 << 20))
    assert g.bar(2, a) == g.level_rule(2, a)
    assert g.ratio_bound(2, a) is None
    assert g.ratio_bound(3, a) is not None
    assert not g.level_uniform
    assert GaugeSpec.from_json(g.to_json()) == g


def test_gauge_ratio_bound_valid():
    a = DEFAULT_SEQUENCE
    for g in (GaugeSpec(), GaugeSpec("n^-2*a_n"), GaugeSpec("2^-3n")):
        for n in range(4):
            q = g.ratio_bound(n, a)
            for j in range(n, n + 5):
                assert g.bar(j + 1, a) / g.bar(j, a) <= q
