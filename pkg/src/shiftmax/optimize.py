"""Ergodic supremum, maximizing measure and n-gap of step functions.

For a step function of level ``n`` the supremum over invariant measures is a
linear program over ``R_n`` and is attained at a vertex, i.e. at a cycle of
``G_n``.  The primary route scores every vertex; Karp's maximum cycle mean
is an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional

from . import config
from .debruijn import (
    DeBruijnGraph,
    PeriodicMeasure,
    basin,
    enumerate_cycles,
    recursive_complexity,
)
from .haar import StepFunction, word_index
from .polytope import build_polytope

# neighbor cross-check of the gap is affordable up to this level
NEIGHBOR_CHECK_MAX_LEVEL = 4


@dataclass(frozen=True)
class OptimizationResult:
    level: int
    ergsup: Fraction
    maximizer: PeriodicMeasure
    second_best: Fraction
    gap: Fraction

    @property
    def tie(self) -> bool:
        return self.gap == 0

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "ergsup": str(self.ergsup),
            "maximizer": self.maximizer.word,
            "period": self.maximizer.period,
            "second_best": str(self.second_best),
            "gap": str(self.gap),
            "tie": self.tie,
        }


def evaluate(f: StepFunction, m: PeriodicMeasure) -> Fraction:
    """``<f, m>``: average of ``f`` along the periodic orbit."""
    return sum((f.values[word_index(w)] for w in m.windows(f.level)), Fraction(0)) / m.period


@lru_cache(maxsize=None)
def _vertex_table(n: int):
    cycles = enumerate_cycles(DeBruijnGraph(n))
    return tuple((c.measure, tuple(word_index(a) for a in c.arcs)) for c in cycles)


def vertex_values(f: StepFunction, n: Optional[int] = None) -> list:
    """``[(measure, <f, measure>)]`` over the vertices of ``R_n``."""
    n = max(f.level, 1) if n is None else n
    vals = f.lift(n).values
    return [(m, sum((vals[i] for i in arcs), Fraction(0)) / len(arcs))
            for m, arcs in _vertex_table(n)]


def _best_two(scored):
    best = max(v for _, v in scored)
    # canonical tie-break: least word among the maximizers
    maximizer = min(m.word for m, v in scored if v == best)
    others = [v for m, v in scored if m.word != maximizer]
    return PeriodicMeasure(maximizer), best, max(others)


def ergodic_supremum(f: StepFunction, check_neighbors: Optional[bool] = None) -> OptimizationResult:
    """Best vertex, runner-up value and gap of ``f``.

    A constant (level-0) function is read at level 1.  For small levels the
    gap is recomputed over the polytope neighbors of the maximizer and must
    agree with the all-vertex gap.
    """
    n = max(f.level, 1)
    if n > config.CYCLE_CAP:
        raise ValueError(f"level {n} exceeds the cycle cap {config.CYCLE_CAP}")
    scored = vertex_values(f, n)
    maximizer, best, second = _best_two(scored)
    result = OptimizationResult(n, best, maximizer, second, best - second)
    if check_neighbors is None:
        check_neighbors = n <= NEIGHBOR_CHECK_MAX_LEVEL
    if check_neighbors:
        local = neighbor_gap(f, maximizer, n)
        if local != result.gap:
            raise AssertionError(f"neighbor gap {local} != vertex gap {result.gap}")
    return result


def neighbor_gap(f: StepFunction, maximizer: PeriodicMeasure, n: Optional[int] = None) -> Fraction:
    """Gap measured only against edge-neighbors of ``maximizer`` in ``R_n``."""
    n = max(f.level, 1) if n is None else n
    p = build_polytope(n)
    i = p.index_of(maximizer)
    lifted = f.lift(n)
    top = evaluate(lifted, maximizer)
    return top - max(evaluate(lifted, p.measures[j]) for j in p.neighbors(i))


def karp_max_cycle_mean(nodes, arcs) -> Fraction:
    """Maximum mean weight of a cycle in a strongly connected digraph.

    ``arcs`` is a list of ``(source, target, weight)``.  Karp's recurrence
    on walks of exact length from a fixed source, exact arithmetic.
    """
    nodes = list(nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    N = len(nodes)
    edges = [(idx[u], idx[v], Fraction(w)) for u, v, w in arcs]
    D = [[None] * N for _ in range(N + 1)]
    D[0][0] = Fraction(0)
    for k in range(1, N + 1):
        prev, cur = D[k - 1], D[k]
        for u, v, w in edges:
            if prev[u] is not None:
                cand = prev[u] + w
                if cur[v] is None or cand > cur[v]:
                    cur[v] = cand
    best = None
    for v in range(N):
        if D[N][v] is None:
            continue
        worst = min((D[N][v] - D[k][v]) / (N - k) for k in range(N) if D[k][v] is not None)
        if best is None or worst > best:
            best = worst
    if best is None:
        raise ValueError("graph has no cycle reachable from the source")
    return best


def karp_debruijn(g: DeBruijnGraph, weights: Mapping[str, object]) -> Fraction:
    """Karp's value on ``G_n`` with ``weights`` keyed by arc word."""
    arcs = [(g.source(a), g.target(a), weights[a]) for a in g.arcs]
    return karp_max_cycle_mean(g.nodes, arcs)


def cancellation_bound_check(g: StepFunction, mu: PeriodicMeasure, xi: PeriodicMeasure,
                             n: int) -> bool:
    """``<g, xi> - <g, mu> <= 2 (k-n+1) |g|_inf xi(B_{mu,n}^c)`` with ``k = level(g)``."""
    k = g.level
    if not n <= k:
        raise ValueError("need n <= k")
    if recursive_complexity(mu) > n:
        raise ValueError(f"{mu} is not in C_{n}")
    if recursive_complexity(xi) > k:
        raise ValueError(f"{xi} is not in C_{k}")
    if mu.period > xi.period:
        raise ValueError("need per(mu) <= per(xi)")
    outside = 1 - xi.mass(basin(mu, n))
    lhs = evaluate(g, xi) - evaluate(g, mu)
    return lhs <= 2 * (k - n + 1) * g.sup_norm() * outside
