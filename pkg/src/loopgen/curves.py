"""Non-overlapping loops and open curves on a recoupling graph.

A walk is stored as the sequence of half-edges it touches.  For a closed
loop ``(h0, h0', h1, h1', ...)`` each pair ``(hk, hk')`` crosses one internal
edge and each pair ``(hk', hk+1)`` passes through a vertex.  An open curve
starts at a leg's half-edge, passes its vertex, and ends on another leg's
half-edge.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .graph import Edge, Leg, RecouplingGraph, bar

__all__ = [
    "MultilinearPolynomial",
    "CurveSet",
    "WalkError",
    "sign_of",
    "closed_sets",
    "open_sets",
    "set_term",
    "loop_polynomial",
    "curve_polynomial",
    "count_sets",
    "var_key",
]


class WalkError(ValueError):
    pass


def var_key(name: str) -> tuple[str, int]:
    """Sort key putting ``X`` right before ``Xbar``."""
    if name.endswith("bar") and len(name) > 3:
        return (name[:-3], 1)
    return (name, 0)


def _mono_key(mono: frozenset[str]):
    return (len(mono), tuple(sorted(var_key(v) for v in mono)))


class MultilinearPolynomial:
    """Integer polynomial whose monomials are squarefree (sets of variables)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[frozenset[str], int] | Iterable[tuple[Iterable[str], int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[frozenset[str], int] = {}
        for mono, c in items:
            mono = frozenset(mono)
            acc[mono] = acc.get(mono, 0) + c
        self.terms = {m: c for m, c in acc.items() if c}

    @classmethod
    def one(cls) -> "MultilinearPolynomial":
        return cls({frozenset(): 1})

    def __add__(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        return MultilinearPolynomial(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        return self + (-other)

    def __neg__(self) -> "MultilinearPolynomial":
        return MultilinearPolynomial({m: -c for m, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, MultilinearPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def constant(self) -> int:
        return self.terms.get(frozenset(), 0)

    def variables(self) -> set[str]:
        return set().union(*self.terms) if self.terms else set()

    def negate_variables(self, names: Iterable[str]) -> "MultilinearPolynomial":
        """Substitute ``x -> -x`` for every ``x`` in ``names``."""
        names = set(names)
        return MultilinearPolynomial({m: c * (-1) ** len(m & names) for m, c in self.terms.items()})

    def split_by(self, name: str) -> tuple["MultilinearPolynomial", "MultilinearPolynomial"]:
        """``(p0, p1)`` with ``self == p0 + name * p1``."""
        p0 = {m: c for m, c in self.terms.items() if name not in m}
        p1 = {m - {name}: c for m, c in self.terms.items() if name in m}
        return MultilinearPolynomial(p0), MultilinearPolynomial(p1)

    def sorted_terms(self) -> list[tuple[frozenset[str], int]]:
        return sorted(self.terms.items(), key=lambda t: _mono_key(t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (mono, c) in enumerate(self.sorted_terms()):
            body = "*".join(sorted(mono, key=var_key))
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if i == 0:
                parts.append(text if c > 0 else "-" + text)
            else:
                parts.append(("+ " if c > 0 else "- ") + text)
        return " ".join(parts)

    def __repr__(self):
        return f"MultilinearPolynomial({str(self)!r})"


@dataclass(frozen=True)
class CurveSet:
    """Edge-disjoint closed loops plus at most one open curve from leg ``start`` to leg ``end``."""

    loops: tuple[tuple[str, ...], ...] = ()
    path: tuple[str, ...] | None = None
    start: str | None = None
    end: str | None = None


def _walk_sign(g: RecouplingGraph, seq: tuple[str, ...], closed: bool) -> tuple[int, list[str]]:
    """Sign exponent and traversed edge names for one walk."""
    n = len(seq)
    flips = 0
    lines: list[str] = []
    if closed:
        if n < 2 or n % 2:
            raise WalkError(f"closed walk must have an even number of half-edges: {seq}")
        crossings = [(seq[k], seq[k + 1]) for k in range(0, n, 2)]
        passages = [(seq[k], seq[(k + 1) % n]) for k in range(1, n, 2)]
    else:
        if n < 2 or n % 2:
            raise WalkError(f"open walk must have an even number of half-edges: {seq}")
        passages = [(seq[k], seq[k + 1]) for k in range(0, n, 2)]
        crossings = [(seq[k], seq[k + 1]) for k in range(1, n - 1, 2)]
    for x, y in crossings:
        try:
            e = g.owner(x)
        except KeyError:
            raise WalkError(f"half-edge {x!r} not in graph") from None
        if not isinstance(e, Edge) or {x, y} != {e.tail, e.head}:
            raise WalkError(f"{x!r} -> {y!r} does not cross an internal edge")
        if x == e.head:
            flips += 1
        lines.append(e.name)
    for x, y in passages:
        for h in (x, y):
            if h not in g._vertex_of:
                raise WalkError(f"half-edge {h!r} not in graph")
        if x == y or g.vertex_index(x) != g.vertex_index(y):
            raise WalkError(f"{x!r} -> {y!r} is not a passage through one vertex")
        if y == g.cw_next(x):
            flips += 1
    return flips, lines


def sign_of(walk: CurveSet | tuple[str, ...], g: RecouplingGraph, closed: bool | None = None) -> int:
    """Sign of a single walk, or of a whole curve set (product over components).

    A bare half-edge sequence is taken as closed unless it starts and ends on
    leg half-edges.
    """
    if isinstance(walk, CurveSet):
        s = 1
        for loop in walk.loops:
            s *= sign_of(loop, g, True)
        if walk.path is not None:
            s *= sign_of(walk.path, g, False)
        return s
    if closed is None:
        closed = not (isinstance(g.owner(walk[0]), Leg) and isinstance(g.owner(walk[-1]), Leg))
    flips, _ = _walk_sign(g, tuple(walk), closed)
    return -1 if flips % 2 == 0 else 1


def set_term(cs: CurveSet, g: RecouplingGraph) -> tuple[frozenset[str], int]:
    """Monomial and sign of ``P(cs)``."""
    flips = 0
    mono: list[str] = []
    for loop in cs.loops:
        f, lines = _walk_sign(g, loop, True)
        flips += f + 1
        mono += lines
    if cs.path is not None:
        f, lines = _walk_sign(g, cs.path, False)
        flips += f + 1
        mono += lines + [cs.start, bar(cs.end)]
    ms = frozenset(mono)
    if len(ms) != len(mono):
        raise WalkError("curve set overlaps itself")
    return ms, -1 if flips % 2 else 1


# enumeration -----------------------------------------------------------------


def _even_subsets(g: RecouplingGraph, leg_degree: Mapping[int, int]) -> Iterator[frozenset[str]]:
    """Edge subsets giving every vertex 0 or 2 selected half-edges.

    ``leg_degree`` maps vertex index to the number of selected leg half-edges
    there.  Depth-first with a parity/degree check whenever a vertex has all
    of its incident edges decided.
    """
    edges = list(g.edges)
    ends = [(g.vertex_index(e.tail), g.vertex_index(e.head)) for e in edges]
    remaining = [0] * g.V
    for a, b in ends:
        remaining[a] += 1
        remaining[b] += 1
    degree = [leg_degree.get(v, 0) for v in range(g.V)]
    for v in range(g.V):
        if remaining[v] == 0 and degree[v] not in (0, 2):
            return
    chosen: list[str] = []

    def settle(v: int) -> bool:
        return remaining[v] > 0 or degree[v] in (0, 2)

    def rec(k: int):
        if k == len(edges):
            yield frozenset(chosen)
            return
        a, b = ends[k]
        remaining[a] -= 1
        remaining[b] -= 1
        if settle(a) and settle(b):
            yield from rec(k + 1)
        degree[a] += 1
        degree[b] += 1
        if degree[a] <= 2 and degree[b] <= 2 and settle(a) and settle(b):
            chosen.append(edges[k].name)
            yield from rec(k + 1)
            chosen.pop()
        degree[a] -= 1
        degree[b] -= 1
        remaining[a] += 1
        remaining[b] += 1

    yield from rec(0)


def _decompose(g: RecouplingGraph, edge_names: frozenset[str], start: Leg | None, end: Leg | None) -> CurveSet:
    selected: set[str] = set()
    for e in g.edges:
        if e.name in edge_names:
            selected.add(e.tail)
            selected.add(e.head)
    if start is not None:
        selected.add(start.half_edge)
        selected.add(end.half_edge)
    by_vertex: dict[int, list[str]] = {}
    for h in selected:
        by_vertex.setdefault(g.vertex_index(h), []).append(h)
    partner = {}
    for hs in by_vertex.values():
        x, y = hs
        partner[x], partner[y] = y, x

    def other_end(h: str) -> str:
        e = g.owner(h)
        return e.head if h == e.tail else e.tail

    visited: set[str] = set()
    path = None
    if start is not None:
        seq = [start.half_edge]
        h = partner[start.half_edge]
        seq.append(h)
        visited.update(seq)
        while h != end.half_edge:
            h2 = other_end(h)
            h3 = partner[h2]
            seq += [h2, h3]
            visited.update((h2, h3))
            h = h3
        path = tuple(seq)
    loops = []
    for h0 in sorted(selected):
        if h0 in visited:
            continue
        seq, h = [], h0
        while True:
            h2 = other_end(h)
            seq += [h, h2]
            visited.update((h, h2))
            h = partner[h2]
            if h == h0:
                break
        loops.append(tuple(seq))
    return CurveSet(tuple(loops), path, start.name if start else None, end.name if end else None)


def closed_sets(g: RecouplingGraph) -> list[CurveSet]:
    """All non-overlapping sets of closed loops, the empty set first."""
    out = [_decompose(g, s, None, None) for s in _even_subsets(g, {})]
    out.sort(key=lambda cs: (sum(len(x) for x in cs.loops), cs.loops))
    return out


def open_sets(g: RecouplingGraph, i: str, j: str) -> list[CurveSet]:
    """All non-overlapping sets with one open curve from leg ``i`` to leg ``j``."""
    if i == j:
        raise ValueError(f"open curves need two distinct legs, got {i!r} twice")
    li, lj = g.leg(i), g.leg(j)
    deg: dict[int, int] = {}
    for leg in (li, lj):
        v = g.vertex_index(leg.half_edge)
        deg[v] = deg.get(v, 0) + 1
    out = [_decompose(g, s, li, lj) for s in _even_subsets(g, deg)]
    out.sort(key=lambda cs: (len(cs.path) + sum(len(x) for x in cs.loops), cs.path, cs.loops))
    return out


def _poly(g: RecouplingGraph, sets: Iterable[CurveSet]) -> MultilinearPolynomial:
    return MultilinearPolynomial([set_term(cs, g) for cs in sets])


def loop_polynomial(g: RecouplingGraph) -> MultilinearPolynomial:
    """Sum of ``P`` over all non-overlapping loop sets (constant term 1)."""
    return _poly(g, closed_sets(g))


def curve_polynomial(g: RecouplingGraph, i: str, j: str) -> MultilinearPolynomial:
    """Sum of ``P`` over all non-overlapping sets running from leg ``i`` to leg ``j``."""
    return _poly(g, open_sets(g, i, j))


def count_sets(g: RecouplingGraph) -> tuple[int, dict[tuple[str, str], int]]:
    """Enumerated ``|closed sets|`` and ``|open sets|`` for every ordered leg pair."""
    n0 = len(closed_sets(g))
    pairs = {}
    for a, b in combinations(g.leg_names, 2):
        pairs[(a, b)] = len(open_sets(g, a, b))
        pairs[(b, a)] = len(open_sets(g, b, a))
    return n0, pairs
