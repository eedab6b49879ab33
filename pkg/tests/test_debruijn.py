from fractions import Fraction
from itertools import product

import networkx as nx
import pytest

from shiftmax.debruijn import (
    DeBruijnGraph,
    PeriodicMeasure,
    basin,
    basin_intersection_check,
    basin_preimage_intersection,
    cycle_measures,
    cycle_of,
    cycles_to_json,
    debruijn_formula,
    enumerate_cycles,
    hamiltonian_count,
    least_rotation,
    primitive_root,
    recursive_complexity,
)


def necklace_oracle(n: int) -> set:
    """Primitive binary necklaces whose cyclic (n-1)-windows are pairwise distinct.

    Brute force over every word of length up to 2^(n-1), independent of the
    graph search.
    """
    found = set()
    for p in range(1, (1 << (n - 1)) + 1):
        for bits in product("01", repeat=p):
            w = "".join(bits)
            rots = [w[i:] + w[:i] for i in range(p)]
            if w != min(rots) or len(set(rots)) != p:
                continue
            ext = w * (n + 1)
            wins = [ext[i:i + n - 1] for i in range(p)]
            if len(set(wins)) == p:
                found.add(w)
    return found


def test_c3_listing():
    assert [m.word for m in cycle_measures(3)] == ["0", "001", "0011", "01", "011", "1"]


@pytest.mark.parametrize("n,count", [(1, 2), (2, 3), (3, 6)])
def test_small_cycle_counts(n, count):
    assert len(cycle_measures(n)) == count


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cycles_match_necklace_oracle(n):
    assert {m.word for m in cycle_measures(n)} == necklace_oracle(n)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cycle_count_matches_networkx(n):
    g = DeBruijnGraph(n)
    dg = nx.DiGraph()
    dg.add_edges_from((g.source(a), g.target(a)) for a in g.arcs)
    assert sum(1 for _ in nx.simple_cycles(dg)) == len(enumerate_cycles(g))


def test_g1_has_parallel_loops():
    cycles = enumerate_cycles(DeBruijnGraph(1))
    assert [c.arcs for c in cycles] == [("0",), ("1",)]


def test_cycles_are_simple_and_closed():
    for n in range(1, 6):
        for c in enumerate_cycles(DeBruijnGraph(n)):
            assert len(set(c.nodes)) == len(c)
            for a, b in zip(c.arcs, c.arcs[1:] + c.arcs[:1]):
                assert a[1:] == b[:-1]
            assert cycle_of(c.measure, n) == c


@pytest.mark.parametrize("n,count", [(2, 1), (3, 1), (4, 2), (5, 16), (6, 2048)])
def test_hamiltonian_counts(n, count):
    assert debruijn_formula(n) == count
    assert hamiltonian_count(n) == count


def test_cycle_cap():
    with pytest.raises(ValueError):
        enumerate_cycles(DeBruijnGraph(7))
    with pytest.raises(ValueError):
        DeBruijnGraph(17)


def test_periodic_measure_normalizes():
    assert PeriodicMeasure("1010") == PeriodicMeasure("01")
    assert PeriodicMeasure("110").word == "011"
    assert primitive_root("001001") == "001"
    assert least_rotation("1001") == "0011"
    with pytest.raises(ValueError):
        PeriodicMeasure("")


def test_frequencies():
    m = PeriodicMeasure("001")
    assert m.frequencies(1) == (Fraction(2, 3), Fraction(1, 3))
    assert m.frequencies(2) == (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3), 0)
    for k in range(5):
        assert sum(m.frequencies(k)) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_projection_injective(n):
    ms = cycle_measures(n)
    assert len({m.frequencies(n) for m in ms}) == len(ms)


def test_recursive_complexity_examples():
    assert recursive_complexity(PeriodicMeasure("000111")) == 4
    assert recursive_complexity(PeriodicMeasure("01011")) == 5
    assert recursive_complexity(PeriodicMeasure("0")) == 1
    assert recursive_complexity(PeriodicMeasure("01")) == 2


def test_recursive_complexity_matches_membership():
    for n in range(1, 6):
        members = set(cycle_measures(n))
        for m in members:
            assert recursive_complexity(m) <= n
        for m in cycle_measures(min(n + 1, 5)):
            assert (m in members) == (recursive_complexity(m) <= n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_basin_identity_exhaustive(n):
    for m in cycle_measures(n):
        for s in range(4):
            assert basin_intersection_check(m, n, s)


def test_basin_identity_needs_membership():
    with pytest.raises(ValueError):
        basin_intersection_check(PeriodicMeasure("000111"), 3, 1)


def test_basin_identity_fails_outside_hypothesis():
    m = PeriodicMeasure("000111")
    assert basin_preimage_intersection(m, 3, 1) != basin(m, 4)


def test_cycles_to_json_shape():
    out = cycles_to_json(3)
    assert out["count"] == 6 and out["nodes"] == 4 and out["arcs"] == 8
    assert out["cycles"][2] == {
        "word": "0011",
        "period": 4,
        "arcs": ["001", "011", "110", "100"],
        "pi": ["0", "1/4", "0", "1/4", "1/4", "0", "1/4", "0"],
    }
