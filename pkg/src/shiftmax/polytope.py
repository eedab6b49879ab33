"""Rotation polytopes R_n as circulation polytopes of de Bruijn graphs.

Faces of a circulation polytope are the circulation polytopes of subgraphs,
and a subgraph can be trimmed to the arcs lying on its own cycles without
changing its circulations.  So faces of ``R_n`` are keyed by arc sets that
are unions of cycles, stored as bitmasks over the ``2**n`` arcs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from . import config
from .debruijn import Cycle, DeBruijnGraph, enumerate_cycles, subgraph_cycles
from .haar import words
from .linalg import affine_dimension, rank


@dataclass(frozen=True)
class Face:
    support: int
    cycles: tuple
    dim: int

    def arcs(self, n: int) -> list:
        return [w for i, w in enumerate(words(n)) if self.support >> i & 1]


class RotationPolytope:
    """Vertices, edges and (for small ``n``) faces of ``R_n``.

    Vertex ``i`` is the frequency vector ``pi_n`` of the ``i``-th cycle of
    ``G_n`` in :func:`~shiftmax.debruijn.enumerate_cycles` order.
    """

    def __init__(self, n: int):
        self.n = n
        self.cycles: tuple = tuple(enumerate_cycles(DeBruijnGraph(n)))
        self.measures = tuple(c.measure for c in self.cycles)
        self.vertices = tuple(m.frequencies(n) for m in self.measures)
        self.masks = tuple(c.arc_mask for c in self.cycles)
        if len(set(self.vertices)) != len(self.vertices):
            raise AssertionError("pi_n is not injective on the cycles")
        self._index = {m: i for i, m in enumerate(self.measures)}

    def __len__(self):
        return len(self.vertices)

    def index_of(self, measure) -> int:
        return self._index[measure]

    @cached_property
    def dim(self) -> int:
        return affine_dimension(self.vertices)

    def is_edge(self, i: int, j: int) -> bool:
        """Whether ``[v_i, v_j]`` is an edge.

        The smallest face containing both vertices is the circulation
        polytope of the union of the two cycles.  It is the segment exactly
        when that union carries no third cycle.
        """
        if i == j:
            raise ValueError("an edge needs two distinct vertices")
        union = self.masks[i] | self.masks[j]
        count = 0
        for _ in subgraph_cycles(self.n, union):
            count += 1
            if count > 2:
                return False
        return count == 2

    def neighbors(self, i: int) -> list:
        return [j for j in range(len(self)) if j != i and self.is_edge(i, j)]

    @cached_property
    def edges(self) -> tuple:
        return tuple((i, j) for i in range(len(self)) for j in range(i + 1, len(self))
                     if self.is_edge(i, j))

    def cycles_in(self, support: int) -> tuple:
        return tuple(i for i, m in enumerate(self.masks) if m & ~support == 0)

    def face_lattice(self, cap: int = config.FACE_CAP) -> list:
        """Every face, from the empty face to ``R_n`` itself."""
        if self.n > cap:
            raise ValueError(f"face enumeration capped at n={cap}, got n={self.n}")
        supports = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for s in frontier:
                for m in self.masks:
                    u = s | m
                    if u not in supports:
                        supports.add(u)
                        nxt.append(u)
            frontier = nxt
        faces = []
        for s in sorted(supports, key=lambda s: (bin(s).count("1"), s)):
            inside = self.cycles_in(s)
            # vertices are indicator/period, so linear rank of indicators - 1 is the affine dim
            dim = rank([_indicator(self.masks[i], self.n) for i in inside]) - 1
            faces.append(Face(s, inside, dim))
        return faces

    def face_census(self) -> dict:
        faces = self.face_lattice()
        by_dim = Counter(f.dim for f in faces)
        top = max(by_dim)
        facets = Counter(len(f.cycles) for f in faces if f.dim == top - 1)
        return {
            "by_dim": {d: by_dim[d] for d in range(-1, top + 1)},
            "total": len(faces),
            "facet_vertex_counts": dict(sorted(facets.items())),
        }

    def to_json(self, faces: bool = False) -> dict:
        out = {
            "n": self.n,
            "dim": self.dim,
            "vertices": [{"word": m.word, "period": m.period, "pi": [str(x) for x in v]}
                         for m, v in zip(self.measures, self.vertices)],
            "edges": [list(e) for e in self.edges],
        }
        if faces:
            census = self.face_census()
            out["faces"] = {
                "by_dim": {str(d): c for d, c in census["by_dim"].items()},
                "total": census["total"],
                "facet_vertex_counts": {str(k): v for k, v in census["facet_vertex_counts"].items()},
            }
        return out


def _indicator(mask: int, n: int) -> list:
    return [mask >> i & 1 for i in range(1 << n)]


@lru_cache(maxsize=None)
def build_polytope(n: int) -> RotationPolytope:
    return RotationPolytope(n)


def is_edge(p: RotationPolytope, i: int, j: int) -> bool:
    return p.is_edge(i, j)


def neighbors(p: RotationPolytope, i: int) -> list:
    return p.neighbors(i)


def face_lattice(p: RotationPolytope) -> list:
    return p.face_lattice()


def is_circulation(n: int, weights) -> bool:
    """Nonnegative arc weights on ``G_n`` summing to 1 with Kirchhoff balance."""
    w = [Fraction(x) for x in weights]
    if len(w) != 1 << n or any(x < 0 for x in w) or sum(w) != 1:
        return False
    g = DeBruijnGraph(n)
    idx = {a: i for i, a in enumerate(words(n))}
    return all(sum(w[idx[a]] for a in g.out_arcs(v)) == sum(w[idx[a]] for a in g.in_arcs(v))
               for v in g.nodes)


def decompose_circulation(n: int, weights) -> dict:
    """Write a circulation as a convex combination of cycle vertices.

    Peels off one cycle of the current support at a time.  Returns
    ``{PeriodicMeasure: coefficient}``.
    """
    if not is_circulation(n, weights):
        raise ValueError("not a circulation on G_%d" % n)
    w = [Fraction(x) for x in weights]
    out = {}
    while any(w):
        support = sum(1 << i for i, x in enumerate(w) if x)
        c: Cycle = next(subgraph_cycles(n, support))
        idx = [int(a, 2) for a in c.arcs]
        t = min(w[i] for i in idx)
        for i in idx:
            w[i] -= t
        m = c.measure
        out[m] = out.get(m, Fraction(0)) + t * len(c)
    return out
