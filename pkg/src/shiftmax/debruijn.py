"""De Bruijn graphs G_n, their simple cycles, and periodic measures.

Nodes of ``G_n`` are the words of length ``n-1``; arcs are the words of
length ``n``, running from their initial to their final ``(n-1)``-subword.
A cycle of ``G_n`` read off by the first letter of each arc is the period
of an orbit whose ``(n-1)``-windows are all distinct, i.e. a member of
``C_n``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from . import config
from .haar import check_word, word_index, words


def primitive_root(word: str) -> str:
    """Shortest ``u`` with ``word == u * k``."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def least_rotation(word: str) -> str:
    return min((word[i:] + word[:i] for i in range(len(word))), default=word)


@dataclass(frozen=True, order=True)
class PeriodicMeasure:
    """The invariant measure on the orbit of ``word word word ...``.

    ``word`` is kept primitive and as its lexicographically least rotation,
    so equal measures compare equal.  Non-primitive input is reduced.
    """

    word: str

    def __post_init__(self):
        check_word(self.word)
        if not self.word:
            raise ValueError("a periodic orbit needs a nonempty word")
        object.__setattr__(self, "word", least_rotation(primitive_root(self.word)))

    @property
    def period(self) -> int:
        return len(self.word)

    def windows(self, k: int) -> list:
        """First ``k`` symbols of each of the ``period`` orbit points."""
        p = self.period
        reps = -(-(k + p) // p)
        s = self.word * reps
        return [s[i:i + k] for i in range(p)]

    def frequencies(self, k: int) -> tuple:
        """``pi_k``: mass of each level-``k`` cylinder, lexicographic order."""
        counts = [0] * (1 << k)
        for w in self.windows(k):
            counts[word_index(w)] += 1
        return tuple(Fraction(c, self.period) for c in counts)

    def mass(self, cylinders) -> Fraction:
        """Measure of a union of cylinders of one common level."""
        cyl = set(cylinders)
        if not cyl:
            return Fraction(0)
        k = len(next(iter(cyl)))
        return Fraction(sum(w in cyl for w in self.windows(k)), self.period)

    def __str__(self):
        return self.word


@dataclass(frozen=True)
class DeBruijnGraph:
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= 16:
            raise ValueError(f"de Bruijn graph order must be in 1..16, got {self.n}")

    @cached_property
    def nodes(self) -> tuple:
        return tuple(words(self.n - 1))

    @cached_property
    def arcs(self) -> tuple:
        return tuple(words(self.n))

    @staticmethod
    def source(arc: str) -> str:
        return arc[:-1]

    @staticmethod
    def target(arc: str) -> str:
        return arc[1:]

    def out_arcs(self, node: str) -> list:
        return [node + "0", node + "1"]

    def in_arcs(self, node: str) -> list:
        return ["0" + node, "1" + node]


def build_graph(n: int) -> DeBruijnGraph:
    return DeBruijnGraph(n)


@dataclass(frozen=True)
class Cycle:
    """A simple cycle of ``G_n``, arcs listed from its least node."""

    arcs: tuple

    @property
    def n(self) -> int:
        return len(self.arcs[0])

    def __len__(self):
        return len(self.arcs)

    @property
    def nodes(self) -> tuple:
        return tuple(a[:-1] for a in self.arcs)

    @property
    def measure(self) -> PeriodicMeasure:
        return PeriodicMeasure("".join(a[0] for a in self.arcs))

    @property
    def arc_mask(self) -> int:
        m = 0
        for a in self.arcs:
            m |= 1 << word_index(a)
        return m


def _johnson(num_nodes: int, out: list):
    """Johnson's elementary-circuit search on an arc-labelled digraph.

    ``out[v]`` lists ``(label, w)`` pairs; parallel arcs and loops are fine.
    Yields each circuit once as the tuple of labels, starting from its
    least node.
    """
    for s in range(num_nodes):
        blocked = {s}
        held = defaultdict(set)
        arcs = []
        stack = [(s, [(a, w) for a, w in out[s] if w >= s])]
        closed = [False]
        while stack:
            v, nbrs = stack[-1]
            if nbrs:
                a, w = nbrs.pop()
                if w == s:
                    yield tuple(arcs) + (a,)
                    closed[-1] = True
                elif w not in blocked:
                    arcs.append(a)
                    stack.append((w, [(b, x) for b, x in out[w] if x >= s]))
                    closed.append(False)
                    blocked.add(w)
                    continue
            if not nbrs:
                if closed[-1]:
                    todo = [v]
                    while todo:
                        u = todo.pop()
                        if u in blocked:
                            blocked.discard(u)
                            todo.extend(held[u])
                            held[u].clear()
                else:
                    for _, w in out[v]:
                        if w >= s:
                            held[w].add(v)
                stack.pop()
                if arcs:
                    arcs.pop()
                done = closed.pop()
                if closed:
                    closed[-1] = closed[-1] or done


@lru_cache(maxsize=None)
def _cycles(n: int) -> tuple:
    g = DeBruijnGraph(n)
    out = [[(arc, word_index(g.target(arc))) for arc in g.out_arcs(node)] for node in g.nodes]
    found = [Cycle(c) for c in _johnson(len(g.nodes), out)]
    found.sort(key=lambda c: (c.measure.word, c.arcs))
    return tuple(found)


def enumerate_cycles(g: DeBruijnGraph, cap: int = config.CYCLE_CAP) -> list:
    """All simple cycles of ``g``, sorted by the canonical word of their orbit."""
    if g.n > cap:
        raise ValueError(f"cycle enumeration capped at n={cap}, got n={g.n}")
    return list(_cycles(g.n))


def cycle_measures(n: int) -> list:
    """``C_n`` as a sorted list of periodic measures."""
    return [c.measure for c in enumerate_cycles(DeBruijnGraph(n))]


def hamiltonian_count(n: int, cap: int = config.CYCLE_CAP) -> int:
    """Number of cycles of ``G_n`` visiting every node."""
    if n < 2:
        raise ValueError("Hamiltonian count is defined for n >= 2")
    full = 1 << (n - 1)
    return sum(len(c) == full for c in enumerate_cycles(DeBruijnGraph(n), cap))


def debruijn_formula(n: int) -> int:
    """Closed form ``2**(2**(n-2) - n + 1)`` for the Hamiltonian count."""
    return 1 << ((1 << (n - 2)) - n + 1)


def windows_distinct(m: PeriodicMeasure, k: int) -> bool:
    w = m.windows(k)
    return len(set(w)) == len(w)


def recursive_complexity(m: PeriodicMeasure) -> int:
    """Least ``n`` with ``m`` in ``C_n``."""
    k = 0
    while not windows_distinct(m, k):
        k += 1
    return k + 1


def cycle_of(m: PeriodicMeasure, n: int) -> Cycle:
    """The cycle of ``G_n`` traced by ``m`` (requires ``m`` in ``C_n``)."""
    if recursive_complexity(m) > n:
        raise ValueError(f"{m} is not in C_{n}")
    arcs = m.windows(n)
    start = min(range(len(arcs)), key=lambda i: arcs[i][:-1])
    return Cycle(tuple(arcs[start:] + arcs[:start]))


def basin(m: PeriodicMeasure, k: int) -> frozenset:
    """Level-``k`` cylinders that meet the orbit of ``m``."""
    return frozenset(m.windows(k))


def basin_preimage_intersection(m: PeriodicMeasure, n: int, s: int) -> frozenset:
    """Level-``(n+s)`` cylinders inside ``sigma^-j(B_{m,n})`` for every ``j <= s``.

    Built by extending words one symbol at a time, keeping only those whose
    newest ``n``-window is in the basin.
    """
    b = basin(m, n)
    level = [w for w in words(n) if w in b]
    for _ in range(s):
        level = [w + c for w in level for c in "01" if (w + c)[-n:] in b]
    return frozenset(level)


def basin_intersection_check(m: PeriodicMeasure, n: int, s: int) -> bool:
    """Whether ``cap_{j<=s} sigma^-j(B_{m,n}) == B_{m,n+s}`` holds on cylinders."""
    if recursive_complexity(m) > n:
        raise ValueError(f"{m} is not in C_{n}: the basin identity does not apply")
    if s < 0:
        raise ValueError("s must be nonnegative")
    return basin_preimage_intersection(m, n, s) == basin(m, n + s)


def cycles_to_json(n: int) -> dict:
    g = DeBruijnGraph(n)
    out = []
    for c in enumerate_cycles(g):
        m = c.measure
        out.append({
            "word": m.word,
            "period": m.period,
            "arcs": list(c.arcs),
            "pi": [str(x) for x in m.frequencies(n)],
        })
    return {"n": n, "nodes": len(g.nodes), "arcs": len(g.arcs), "count": len(out), "cycles": out}



def subgraph_cycles(n: int, arc_mask: int):
    """Simple cycles of the subgraph of ``G_n`` with the arcs in ``arc_mask``.

    Arc ``w`` belongs to the subgraph when bit ``int(w, 2)`` is set.  Yields
    :class:`Cycle` objects lazily so callers can stop early.
    """
    g = DeBruijnGraph(n)
    out = []
    for node in g.nodes:
        out.append([(arc, word_index(g.target(arc))) for arc in g.out_arcs(node)
                    if arc_mask >> word_index(arc) & 1])
    for c in _johnson(len(g.nodes), out):
        yield Cycle(c)
