"""Generating functions for multi-j symbols and exact extraction of their values."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Mapping

from .curves import MultilinearPolynomial, curve_polynomial, loop_polynomial
from .exact import ZERO, RootRational, delta, sqrt_factorial_ratio
from .graph import RecouplingGraph, bar
from .quantum import QuantumAssignment, selection_flags
from .series import TruncatedSeries

__all__ = [
    "GeneratingFunction",
    "SymbolValue",
    "SymbolEvaluator",
    "generating_function",
    "expand_eq5",
    "expand_eq6",
    "caps_for",
    "symbol_value",
    "symbol_value_eq6",
    "symbol_via_layer_sums",
]


@dataclass(frozen=True)
class GeneratingFunction:
    graph: RecouplingGraph
    base: MultilinearPolynomial
    # leg name -> sum over i != j of open-set polynomials ending at j
    open_parts: Mapping[str, MultilinearPolynomial]

    @property
    def J(self) -> int:
        return self.graph.J

    @property
    def q_factors(self) -> dict[str, MultilinearPolynomial]:
        return {j: self.base + p for j, p in self.open_parts.items()}

    @property
    def vertex_triples(self) -> tuple[tuple[str, str, str], ...]:
        return tuple(self.graph.vertex_lines(v) for v in self.graph.vertices)


@dataclass(frozen=True)
class SymbolValue:
    value: RootRational
    flags: tuple[str, ...] = field(default=())

    def __str__(self):
        if self.flags:
            return f"0 (selection rule: {', '.join(self.flags)})"
        return str(self.value)


def generating_function(g: RecouplingGraph) -> GeneratingFunction:
    base = loop_polynomial(g)
    parts = {}
    for j in g.leg_names:
        p = MultilinearPolynomial()
        for i in g.leg_names:
            if i != j:
                p = p + curve_polynomial(g, i, j)
        parts[j] = p
    return GeneratingFunction(g, base, parts)


def caps_for(g: RecouplingGraph, q: QuantumAssignment) -> dict[str, int]:
    """Smallest caps that still contain the monomial of ``q``."""
    return q.exponents(g)


def _table_caps(g: RecouplingGraph, max2j: int) -> dict[str, int]:
    return {v: max2j for v in g.variables()}


def _caps(g: RecouplingGraph, caps: Mapping[str, int] | int) -> dict[str, int]:
    if isinstance(caps, int):
        return _table_caps(g, caps)
    return {v: caps[v] for v in g.variables()}


def _series(gf: GeneratingFunction, poly: MultilinearPolynomial, caps, total) -> TruncatedSeries:
    return TruncatedSeries.from_polynomial(poly, gf.graph.variables(), caps, total)


def expand_eq5(gf: GeneratingFunction, caps: Mapping[str, int] | int, total: int | None = None) -> TruncatedSeries:
    """``base**(J-2) * prod_j Q_j**-1`` truncated at ``caps``."""
    caps = _caps(gf.graph, caps)
    out = _series(gf, gf.base, caps, total).power(gf.J - 2)
    for q in gf.q_factors.values():
        out = out * _series(gf, q, caps, total).power(-1)
    return out


def expand_eq6(gf: GeneratingFunction, caps: Mapping[str, int] | int, total: int | None = None) -> TruncatedSeries:
    """``base**-2 * exp(-B / base)`` with ``B`` the sum of all open-set polynomials."""
    caps = _caps(gf.graph, caps)
    base = _series(gf, gf.base, caps, total)
    out = base.power(-2)
    b = MultilinearPolynomial()
    for p in gf.open_parts.values():
        b = b + p
    if len(b):
        out = out * (-(_series(gf, b, caps, total) * base.power(-1))).exp()
    return out


def _delta_product(g: RecouplingGraph, q: QuantumAssignment) -> RootRational:
    out = RootRational(1)
    for v in g.vertices:
        out = out * delta(*(q.twice_j[x] for x in g.vertex_lines(v)))
    return out


def _leg_norm(g: RecouplingGraph, q: QuantumAssignment, eq6: bool) -> RootRational:
    num, den = [], []
    for leg in g.leg_names:
        p = (q.twice_j[leg] + q.twice_m[leg]) // 2
        m = (q.twice_j[leg] - q.twice_m[leg]) // 2
        num.append(p)
        (num if eq6 else den).append(m)
    return sqrt_factorial_ratio(num, den)


def _assemble(g: RecouplingGraph, q: QuantumAssignment, coeff, eq6: bool) -> SymbolValue:
    if not coeff:
        return SymbolValue(ZERO)
    value = _delta_product(g, q) * _leg_norm(g, q, eq6) * coeff
    return SymbolValue(value)


def _prepare(g: RecouplingGraph, q: QuantumAssignment) -> tuple[str, ...]:
    q.validate(g)
    return selection_flags(g, q)


def symbol_value(
    g: RecouplingGraph,
    q: QuantumAssignment,
    gf: GeneratingFunction | None = None,
    series: TruncatedSeries | None = None,
) -> SymbolValue:
    """Exact ``S(g, q)`` from the coefficient of the product-form expansion."""
    flags = _prepare(g, q)
    if flags:
        return SymbolValue(ZERO, flags)
    if series is None:
        series = expand_eq5(gf or generating_function(g), caps_for(g, q))
    return _assemble(g, q, series.coefficient(q.exponents(g)), eq6=False)


def symbol_value_eq6(
    g: RecouplingGraph,
    q: QuantumAssignment,
    gf: GeneratingFunction | None = None,
    series: TruncatedSeries | None = None,
) -> SymbolValue:
    """Exact ``S(g, q)`` from the exponential-form expansion."""
    flags = _prepare(g, q)
    if flags:
        return SymbolValue(ZERO, flags)
    if series is None:
        series = expand_eq6(gf or generating_function(g), caps_for(g, q))
    return _assemble(g, q, series.coefficient(q.exponents(g)), eq6=True)


class SymbolEvaluator:
    """Evaluates many assignments with ``2j <= max2j`` from one shared expansion."""

    def __init__(self, g: RecouplingGraph, max2j: int, method: str = "eq5"):
        if method not in ("eq5", "eq6"):
            raise ValueError(f"unknown method {method!r}")
        self.graph, self.max2j, self.method = g, max2j, method
        self.gf = generating_function(g)
        expand = expand_eq5 if method == "eq5" else expand_eq6
        self.series = expand(self.gf, _table_caps(g, max2j))

    def __call__(self, q: QuantumAssignment) -> SymbolValue:
        if any(tj > self.max2j for tj in q.twice_j.values()):
            raise ValueError(f"assignment exceeds 2j <= {self.max2j}")
        fn = symbol_value if self.method == "eq5" else symbol_value_eq6
        return fn(self.graph, q, self.gf, self.series)


def _layer_solutions(loops, target: tuple[int, ...]):
    """Non-negative ``k`` with ``sum k[i] * loops[i] == target`` (loops as 0/1 vectors)."""
    n, nv = len(loops), len(target)
    ks = [0] * n
    # lines covered by loops i.. and lines whose last covering loop is i
    covered = [frozenset(e for t in range(i, n) for e in range(nv) if loops[t][e]) for i in range(n + 1)]
    closes = [[e for e in range(nv) if loops[i][e] and e not in covered[i + 1]] for i in range(n)]
    support = [[e for e in range(nv) if loops[i][e]] for i in range(n)]

    def rec(i: int, rem: list[int]):
        if i == n:
            if not any(rem):
                yield tuple(ks)
            return
        if any(r and e not in covered[i] for e, r in enumerate(rem)):
            return
        sup = support[i]
        limit = min((rem[e] for e in sup), default=0)
        forced = {rem[e] for e in closes[i]}
        if len(forced) > 1:
            return
        choices = range(limit + 1) if not forced else [k for k in forced if k <= limit]
        for k in choices:
            ks[i] = k
            nxt = list(rem)
            for e in sup:
                nxt[e] -= k
            yield from rec(i + 1, nxt)
        ks[i] = 0

    yield from rec(0, list(target))


def symbol_via_layer_sums(
    g: RecouplingGraph, q: QuantumAssignment, gf: GeneratingFunction | None = None, stats: dict | None = None
) -> SymbolValue:
    """Closed-graph value as a sum over stacks of loop sets, each weighted by one plus the layer count.

    ``stats["terms"]`` is incremented by the number of layer configurations summed.
    """
    if g.J:
        raise ValueError("layer sums need a closed graph")
    flags = _prepare(g, q)
    if flags:
        return SymbolValue(ZERO, flags)
    gf = gf or generating_function(g)
    edges = g.edge_names
    loops, signs = [], []
    for mono, c in gf.base.sorted_terms():
        if mono:
            loops.append(tuple(int(e in mono) for e in edges))
            signs.append(c)
    target = tuple(q.twice_j[e] for e in edges)
    total = 0
    n = 0
    for ks in _layer_solutions(loops, target):
        n += 1
        K = sum(ks)
        w = factorial(K)
        for k, s in zip(ks, signs):
            w = w // factorial(k) * s**k
        total += (-1) ** K * (K + 1) * w
    if stats is not None:
        stats["terms"] = stats.get("terms", 0) + n
    if not total:
        return SymbolValue(ZERO)
    return SymbolValue(_delta_product(g, q) * total)
