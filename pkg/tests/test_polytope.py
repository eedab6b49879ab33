from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftmax.linalg import affine_dimension, rank, solve
from shiftmax.polytope import build_polytope, decompose_circulation, is_circulation


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_dimension(n):
    assert build_polytope(n).dim == 1 << (n - 1)


def test_r3_census():
    c = build_polytope(3).face_census()
    assert [c["by_dim"][d] for d in range(-1, 5)] == [1, 6, 13, 13, 6, 1]
    assert c["total"] == 40
    assert c["facet_vertex_counts"] == {4: 4, 5: 2}


def test_r4_census_regression():
    c = build_polytope(4).face_census()
    assert [c["by_dim"][d] for d in range(-1, 9)] == [1, 19, 101, 266, 408, 385, 224, 77, 14, 1]
    assert c["total"] == 1496


@pytest.mark.parametrize("n", [2, 3, 4])
def test_euler_relation(n):
    by_dim = build_polytope(n).face_census()["by_dim"]
    assert sum((-1) ** d * c for d, c in by_dim.items()) == 0


@pytest.mark.parametrize("n", [2, 3])
def test_face_dims_match_affine_rank(n):
    p = build_polytope(n)
    for face in p.face_lattice():
        assert face.dim == affine_dimension([p.vertices[i] for i in face.cycles])


def test_face_cap():
    with pytest.raises(ValueError):
        build_polytope(5).face_lattice()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_edges_by_support_containment(n):
    """An edge is a pair whose joint arc support contains no third cycle."""
    p = build_polytope(n)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            union = p.masks[i] | p.masks[j]
            inside = [k for k, m in enumerate(p.masks) if m & ~union == 0]
            assert p.is_edge(i, j) == (sorted(inside) == [i, j])


def test_r3_edges_and_neighbors():
    p = build_polytope(3)
    assert len(p.edges) == 13
    zero = p.index_of(p.measures[0])
    assert sorted(p.measures[j].word for j in p.neighbors(zero)) == ["001", "0011", "01", "011", "1"]
    assert len(build_polytope(4).edges) == 101


def test_edge_needs_two_vertices():
    with pytest.raises(ValueError):
        build_polytope(2).is_edge(0, 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_vertices_are_circulations(n):
    p = build_polytope(n)
    for v in p.vertices:
        assert is_circulation(n, v)


@given(st.integers(2, 4), st.data())
def test_decomposition_recombines(n, data):
    p = build_polytope(n)
    picks = data.draw(st.lists(st.integers(0, len(p) - 1), min_size=1, max_size=5))
    raw = data.draw(st.lists(st.integers(1, 9), min_size=len(picks), max_size=len(picks)))
    total = sum(raw)
    x = [Fraction(0)] * (1 << n)
    for i, r in zip(picks, raw):
        for k, v in enumerate(p.vertices[i]):
            x[k] += Fraction(r, total) * v
    assert is_circulation(n, x)
    parts = decompose_circulation(n, x)
    assert sum(parts.values()) == 1 and all(c > 0 for c in parts.values())
    back = [sum(c * m.frequencies(n)[k] for m, c in parts.items()) for k in range(1 << n)]
    assert back == x


def test_non_circulations_rejected():
    assert is_circulation(2, [1, 0, 0, 0])
    assert not is_circulation(2, [0, 0, 0, 0])
    assert not is_circulation(2, [0, 1, 0, 0])
    assert not is_circulation(2, [Fraction(1, 2), 0, 0, 0])
    with pytest.raises(ValueError):
        decompose_circulation(2, [0, 1, 0, 0])


def test_linalg_helpers():
    assert rank([[1, 2], [2, 4]]) == 1
    assert affine_dimension([]) == -1
    assert affine_dimension([[1, 1]]) == 0
    assert solve([[1, 1], [1, -1]], [3, 1]) == [2, 1]
    assert solve([[1, 1], [1, 1]], [1, 2]) is None
