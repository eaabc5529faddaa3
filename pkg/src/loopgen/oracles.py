"""Reference evaluators that do not touch the generating functions.

All arguments are doubled integers (``2j``, ``2m``) so half-integers stay exact.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exact import ZERO, RootRational, delta, sqrt_factorial_ratio, triangle_violation
from .graph import Edge, RecouplingGraph
from .quantum import QuantumAssignment

__all__ = ["racah_3j", "racah_6j", "contraction_oracle", "BudgetExceeded"]


class BudgetExceeded(RuntimeError):
    """The magnetic sum would visit more terms than allowed."""


@lru_cache(maxsize=1 << 18)
def racah_3j(ta: int, tb: int, tc: int, tal: int, tbe: int, tga: int) -> RootRational:
    """Wigner 3-j symbol from the single-sum formula."""
    for tj, tm in ((ta, tal), (tb, tbe), (tc, tga)):
        if tj < 0 or abs(tm) > tj or (tj + tm) % 2:
            return ZERO
    if tal + tbe + tga != 0 or triangle_violation(ta, tb, tc):
        return ZERO
    abc = (ta + tb - tc) // 2
    a_m = (ta - tal) // 2
    b_p = (tb + tbe) // 2
    cba = (tc - tb + tal) // 2
    cab = (tc - ta - tbe) // 2
    phase0 = (ta - tb - tga) // 2
    total = Fraction(0)
    for z in range(max(0, -cba, -cab), min(abc, a_m, b_p) + 1):
        den = (
            factorial(z)
            * factorial(abc - z)
            * factorial(a_m - z)
            * factorial(b_p - z)
            * factorial(cba + z)
            * factorial(cab + z)
        )
        total += Fraction(-1 if (z + phase0) % 2 else 1, den)
    if not total:
        return ZERO
    norm = sqrt_factorial_ratio(
        ((ta + tal) // 2, (ta - tal) // 2, (tb + tbe) // 2, (tb - tbe) // 2, (tc + tga) // 2, (tc - tga) // 2)
    )
    return delta(ta, tb, tc) * norm * total


@lru_cache(maxsize=1 << 16)
def racah_6j(ta: int, tb: int, tc: int, td: int, te: int, tf: int) -> RootRational:
    """Wigner 6-j symbol ``{a b c; d e f}`` from Racah's single sum."""
    triads = ((ta, tb, tc), (ta, te, tf), (tb, td, tf), (tc, td, te))
    if min(ta, tb, tc, td, te, tf) < 0 or any(triangle_violation(*t) for t in triads):
        return ZERO
    lo = [sum(t) // 2 for t in triads]
    hi = [(ta + tb + td + te) // 2, (tb + tc + te + tf) // 2, (ta + tc + td + tf) // 2]
    total = 0
    for z in range(max(lo), min(hi) + 1):
        den = 1
        for x in lo:
            den *= factorial(z - x)
        for y in hi:
            den *= factorial(y - z)
        total += Fraction((-1) ** z * factorial(z + 1), den)
    if not total:
        return ZERO
    norm = RootRational(1)
    for t in triads:
        norm = norm * delta(*t)
    return norm * total


def _edge_order(g: RecouplingGraph) -> list[Edge]:
    """Greedy order that completes vertices as early as possible."""
    pending = list(g.edges)
    done_half: set[str] = {leg.half_edge for leg in g.legs}
    order = []
    while pending:
        def closes(e: Edge) -> int:
            got = done_half | {e.tail, e.head}
            score = 0
            for h in (e.tail, e.head):
                v = g.vertices[g.vertex_index(h)]
                score += all(x in got for x in v.half_edges)
            return score
        best = max(pending, key=closes)
        pending.remove(best)
        order.append(best)
        done_half |= {best.tail, best.head}
    return order


def contraction_oracle(
    g: RecouplingGraph, q: QuantumAssignment, budget: int = 10**6, stats: dict | None = None
) -> RootRational:
    """Sum over internal magnetic numbers of products of vertex 3-j symbols and edge metrics.

    Each vertex contributes ``racah_3j`` with its lines in counter-clockwise
    order; an edge with momentum ``a`` whose tail carries ``m`` forces ``-m``
    at its head and contributes ``(-1)**(a + m)``.  ``stats["terms"]`` is
    incremented by the number of magnetic configurations visited.
    """
    q.validate(g)
    tj = q.twice_j
    m_of: dict[str, int] = {leg.half_edge: q.twice_m[leg.name] for leg in g.legs}
    for v in g.vertices:
        if triangle_violation(*(tj[g.line_name(h)] for h in v.half_edges)):
            return ZERO
    for leg in g.legs:
        if (tj[leg.name] + q.twice_m[leg.name]) % 2:
            return ZERO

    edges = _edge_order(g)
    vertex_lines = [tuple(tj[g.line_name(h)] for h in v.half_edges) for v in g.vertices]

    def factor(vi: int) -> RootRational:
        ms = tuple(m_of[h] for h in g.vertices[vi].half_edges)
        return racah_3j(*vertex_lines[vi], *ms)

    # vertices that become fully assigned after edge k
    complete_after: list[list[int]] = [[] for _ in edges]
    assigned = set(m_of)
    seen_complete: set[int] = set()
    start = RootRational(1)
    for vi, v in enumerate(g.vertices):
        if all(h in assigned for h in v.half_edges):
            seen_complete.add(vi)
            start = start * factor(vi)
    if not start:
        return ZERO
    for k, e in enumerate(edges):
        assigned |= {e.tail, e.head}
        for vi, v in enumerate(g.vertices):
            if vi not in seen_complete and all(h in assigned for h in v.half_edges):
                seen_complete.add(vi)
                complete_after[k].append(vi)

    result = ZERO
    visited = 0

    def rec(k: int, weight: RootRational):
        nonlocal result, visited
        if k == len(edges):
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"contraction needs more than {budget} terms")
            result = result + weight
            return
        e = edges[k]
        ta = tj[e.name]
        for tm in range(-ta, ta + 1, 2):
            m_of[e.tail], m_of[e.head] = tm, -tm
            w = -weight if ((ta + tm) // 2) % 2 else weight
            for vi in complete_after[k]:
                w = w * factor(vi)
                if not w:
                    break
            if w:
                rec(k + 1, w)
        del m_of[e.tail], m_of[e.head]

    try:
        rec(0, start)
    finally:
        if stats is not None:
            stats["terms"] = stats.get("terms", 0) + visited
    return result
