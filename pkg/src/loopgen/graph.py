"""Embedded trivalent recoupling graphs.

A graph is a set of vertices, each listing its three half-edges in
counter-clockwise order, plus oriented internal edges (pairs of half-edges)
and external legs (one half-edge with a free end).  Internal edge ``A``
carries the expansion variable ``A``; leg ``B`` carries the pair ``B`` and
``Bbar``.

Text format, one declaration per line, ``#`` starts a comment::

    vertex <id>: <half-edge> <half-edge> <half-edge>   # counter-clockwise
    edge <Name>: <tail half-edge> -> <head half-edge>
    leg <Name>: <half-edge>
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

__all__ = [
    "Vertex",
    "Edge",
    "Leg",
    "RecouplingGraph",
    "GraphError",
    "GraphParseError",
    "bar",
    "build_graph",
    "parse_graph",
    "glue_legs",
    "reverse_edge",
    "swap_half_edges",
    "disjoint_union",
    "random_graph",
    "three_j",
    "three_j_pair",
    "five_j",
    "six_j",
    "nine_j",
    "STANDARD_GRAPHS",
]

BAR = "bar"
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_HALF = re.compile(r"[A-Za-z0-9_.]+\Z")


def bar(name: str) -> str:
    """Name of the barred variable of leg ``name``."""
    return name + BAR


class GraphError(ValueError):
    """Structural problem in a graph description."""


class GraphParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Vertex:
    name: str
    half_edges: tuple[str, ...]


@dataclass(frozen=True)
class Edge:
    name: str
    tail: str
    head: str


@dataclass(frozen=True)
class Leg:
    name: str
    half_edge: str


@dataclass(frozen=True)
class RecouplingGraph:
    """Immutable embedded trivalent graph; validated on construction."""

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()
    legs: tuple[Leg, ...] = ()
    _vertex_of: dict = field(default=None, init=False, repr=False, compare=False)
    _owner: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "legs", tuple(self.legs))
        vertex_of: dict[str, tuple[int, int]] = {}
        seen_vertices = set()
        for vi, v in enumerate(self.vertices):
            if len(v.half_edges) != 3:
                raise GraphError(
                    f"non-trivalent vertex {v.name!r}: {len(v.half_edges)} half-edges {list(v.half_edges)}"
                )
            if v.name in seen_vertices:
                raise GraphError(f"duplicate vertex name {v.name!r}")
            seen_vertices.add(v.name)
            for pos, h in enumerate(v.half_edges):
                if h in vertex_of:
                    raise GraphError(f"half-edge {h!r} appears at more than one vertex slot")
                vertex_of[h] = (vi, pos)

        owner: dict[str, Edge | Leg] = {}
        names: set[str] = set()

        def claim_name(name: str):
            if not _NAME.match(name):
                raise GraphError(f"invalid variable name {name!r}")
            if name in names:
                raise GraphError(f"duplicate variable name {name!r}")
            names.add(name)

        def claim_half(h: str, who):
            if h not in vertex_of:
                raise GraphError(f"dangling half-edge {h!r} of {who.name!r}: not at any vertex")
            if h in owner:
                raise GraphError(f"half-edge {h!r} used by both {owner[h].name!r} and {who.name!r}")
            owner[h] = who

        for e in self.edges:
            claim_name(e.name)
            if e.tail == e.head:
                raise GraphError(f"edge {e.name!r} uses half-edge {e.tail!r} twice")
            claim_half(e.tail, e)
            claim_half(e.head, e)
        for leg in self.legs:
            claim_name(leg.name)
            claim_name(bar(leg.name))
            claim_half(leg.half_edge, leg)
        for h in vertex_of:
            if h not in owner:
                raise GraphError(f"dangling half-edge {h!r}: not part of any edge or leg")
        object.__setattr__(self, "_vertex_of", vertex_of)
        object.__setattr__(self, "_owner", owner)

    # counts ---------------------------------------------------------------

    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def I(self) -> int:
        return len(self.edges)

    @property
    def J(self) -> int:
        return len(self.legs)

    @property
    def is_closed(self) -> bool:
        return not self.legs

    # lookups --------------------------------------------------------------

    def vertex_index(self, half_edge: str) -> int:
        return self._vertex_of[half_edge][0]

    def owner(self, half_edge: str) -> Edge | Leg:
        return self._owner[half_edge]

    def ccw_next(self, half_edge: str) -> str:
        vi, pos = self._vertex_of[half_edge]
        return self.vertices[vi].half_edges[(pos + 1) % 3]

    def cw_next(self, half_edge: str) -> str:
        vi, pos = self._vertex_of[half_edge]
        return self.vertices[vi].half_edges[(pos - 1) % 3]

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(f"no internal edge {name!r}")

    def leg(self, name: str) -> Leg:
        for leg in self.legs:
            if leg.name == name:
                return leg
        raise KeyError(f"no external leg {name!r}")

    def line_name(self, half_edge: str) -> str:
        return self._owner[half_edge].name

    def vertex_lines(self, vertex: int | Vertex) -> tuple[str, str, str]:
        """Line names at a vertex in counter-clockwise order."""
        v = self.vertices[vertex] if isinstance(vertex, int) else vertex
        return tuple(self.line_name(h) for h in v.half_edges)

    @property
    def edge_names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.edges)

    @property
    def leg_names(self) -> tuple[str, ...]:
        return tuple(leg.name for leg in self.legs)

    def variables(self) -> tuple[str, ...]:
        """All expansion variables: legs as (A, Abar), then internal edges."""
        out = []
        for leg in self.legs:
            out += [leg.name, bar(leg.name)]
        out += [e.name for e in self.edges]
        return tuple(out)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict[int, set[int]] = {i: set() for i in range(self.V)}
        for e in self.edges:
            a, b = self.vertex_index(e.tail), self.vertex_index(e.head)
            adj[a].add(b)
            adj[b].add(a)
        seen, stack = {0}, [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.V

    # text -----------------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"vertex {v.name}: {' '.join(v.half_edges)}" for v in self.vertices]
        lines += [f"edge {e.name}: {e.tail} -> {e.head}" for e in self.edges]
        lines += [f"leg {leg.name}: {leg.half_edge}" for leg in self.legs]
        return "\n".join(lines) + "\n"

    def __str__(self):
        return self.to_text()


_LINE = re.compile(
    r"""^(?:
        vertex\s+(?P<vname>\S+?)\s*:\s*(?P<vhalves>.*)
      | edge\s+(?P<ename>\S+?)\s*:\s*(?P<tail>\S+)\s*->\s*(?P<head>\S+)
      | leg\s+(?P<lname>\S+?)\s*:\s*(?P<lhalf>\S+)
    )$""",
    re.X,
)


def parse_graph(text: str) -> RecouplingGraph:
    """Parse the line-oriented graph format; errors carry line numbers."""
    vertices, edges, legs = [], [], []
    where: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise GraphParseError(lineno, f"cannot parse {line!r}")
        if m.group("vname") is not None:
            halves = m.group("vhalves").split()
            for h in halves:
                if not _HALF.match(h):
                    raise GraphParseError(lineno, f"bad half-edge token {h!r}")
            if len(halves) != 3:
                raise GraphParseError(
                    lineno, f"non-trivalent vertex {m.group('vname')!r}: {len(halves)} half-edges"
                )
            vertices.append(Vertex(m.group("vname"), tuple(halves)))
            where[m.group("vname")] = lineno
        elif m.group("ename") is not None:
            for h in (m.group("tail"), m.group("head")):
                if not _HALF.match(h):
                    raise GraphParseError(lineno, f"bad half-edge token {h!r}")
            edges.append(Edge(m.group("ename"), m.group("tail"), m.group("head")))
            where[m.group("ename")] = lineno
        else:
            if not _HALF.match(m.group("lhalf")):
                raise GraphParseError(lineno, f"bad half-edge token {m.group('lhalf')!r}")
            legs.append(Leg(m.group("lname"), m.group("lhalf")))
            where[m.group("lname")] = lineno
    try:
        return RecouplingGraph(tuple(vertices), tuple(edges), tuple(legs))
    except GraphError as exc:
        # point at the first declaration the message names, if any
        for name, lineno in where.items():
            if repr(name) in str(exc):
                raise GraphParseError(lineno, str(exc)) from None
        raise


def build_graph(desc: Mapping) -> RecouplingGraph:
    """Build from a mapping ``{"vertices": {id: [h, h, h]}, "edges": {name: (tail, head)}, "legs": {name: h}}``."""
    vertices = tuple(Vertex(name, tuple(hs)) for name, hs in desc.get("vertices", {}).items())
    edges = tuple(Edge(name, t, h) for name, (t, h) in desc.get("edges", {}).items())
    legs = tuple(Leg(name, h) for name, h in desc.get("legs", {}).items())
    return RecouplingGraph(vertices, edges, legs)


# transformations ------------------------------------------------------------


def glue_legs(g: RecouplingGraph, leg_1: str, leg_2: str, name: str | None = None) -> RecouplingGraph:
    """Join two legs into one internal edge running from ``leg_1`` to ``leg_2``.

    The edge takes over the half-edge slots of the legs, so cyclic orders at
    the vertices are untouched.
    """
    if leg_1 == leg_2:
        raise GraphError(f"cannot glue leg {leg_1!r} to itself")
    l1, l2 = g.leg(leg_1), g.leg(leg_2)
    edge = Edge(name or leg_1 + leg_2, l1.half_edge, l2.half_edge)
    legs = tuple(leg for leg in g.legs if leg.name not in (leg_1, leg_2))
    return RecouplingGraph(g.vertices, g.edges + (edge,), legs)


def reverse_edge(g: RecouplingGraph, name: str) -> RecouplingGraph:
    if any(leg.name == name for leg in g.legs):
        raise GraphError(f"{name!r} is an external leg; only internal edges have an orientation")
    e = g.edge(name)
    edges = tuple(Edge(e.name, e.head, e.tail) if x.name == name else x for x in g.edges)
    return replace(g, edges=edges)


def swap_half_edges(g: RecouplingGraph, vertex: str, h1: str, h2: str) -> RecouplingGraph:
    """Transpose two half-edges in one vertex's cyclic order (reverses it)."""
    out = []
    for v in g.vertices:
        if v.name == vertex:
            if h1 not in v.half_edges or h2 not in v.half_edges or h1 == h2:
                raise GraphError(f"{h1!r}, {h2!r} are not two half-edges of vertex {vertex!r}")
            swap = {h1: h2, h2: h1}
            v = Vertex(v.name, tuple(swap.get(h, h) for h in v.half_edges))
        out.append(v)
    if out == list(g.vertices):
        raise GraphError(f"no vertex {vertex!r}")
    return replace(g, vertices=tuple(out))


def disjoint_union(*graphs: RecouplingGraph) -> RecouplingGraph:
    """Union of graphs whose vertex, half-edge and variable names do not clash."""
    return RecouplingGraph(
        tuple(v for g in graphs for v in g.vertices),
        tuple(e for g in graphs for e in g.edges),
        tuple(leg for g in graphs for leg in g.legs),
    )


def random_graph(rng: random.Random, n_vertices: int, n_glues: int | None = None) -> RecouplingGraph:
    """Random connected trivalent graph: a random tree of vertices, then random leg gluings.

    ``n_glues`` defaults to a random admissible count; the result has
    ``J = n_vertices + 2 - 2 * n_glues`` legs.
    """
    if n_vertices < 1:
        raise ValueError("need at least one vertex")
    max_glues = (n_vertices + 2) // 2
    if n_glues is None:
        n_glues = rng.randint(0, max_glues)
    if not 0 <= n_glues <= max_glues:
        raise ValueError(f"n_glues must be in [0, {max_glues}]")
    vertices = [Vertex("v0", ("v0.0", "v0.1", "v0.2"))]
    legs = [Leg(f"L{i}", f"v0.{i}") for i in range(3)]
    edges: list[Edge] = []
    counter = 3
    for k in range(1, n_vertices):
        halves = (f"v{k}.0", f"v{k}.1", f"v{k}.2")
        vertices.append(Vertex(f"v{k}", halves))
        target = legs.pop(rng.randrange(len(legs)))
        a, b = (target.half_edge, halves[0]) if rng.random() < 0.5 else (halves[0], target.half_edge)
        edges.append(Edge(f"E{len(edges)}", a, b))
        for h in halves[1:]:
            legs.append(Leg(f"L{counter}", h))
            counter += 1
    for _ in range(n_glues):
        i, j = rng.sample(range(len(legs)), 2)
        a, b = legs[i], legs[j]
        edges.append(Edge(f"E{len(edges)}", a.half_edge, b.half_edge))
        legs = [leg for leg in legs if leg is not a and leg is not b]
    rng.shuffle(vertices)
    vertices = [Vertex(v.name, v.half_edges if rng.random() < 0.5 else v.half_edges[::-1]) for v in vertices]
    return RecouplingGraph(tuple(vertices), tuple(edges), tuple(legs))


# standard graphs ------------------------------------------------------------


def three_j(a: str = "A", b: str = "B", c: str = "C", vertex: str = "v") -> RecouplingGraph:
    """Single vertex with legs ``a, b, c`` counter-clockwise."""
    halves = tuple(f"{vertex}.{x}" for x in (a, b, c))
    return RecouplingGraph(
        (Vertex(vertex, halves),),
        (),
        tuple(Leg(x, h) for x, h in zip((a, b, c), halves)),
    )


def three_j_pair() -> RecouplingGraph:
    """Unconnected 3-j vertices ``(A1, B, C)`` and ``(A2, D, E)``, ready to be glued."""
    return disjoint_union(three_j("A1", "B", "C", "v1"), three_j("A2", "D", "E", "v2"))


def five_j() -> RecouplingGraph:
    """Two 3-j vertices ``(A, B, C)`` and ``(A, D, E)`` joined along ``A``."""
    return glue_legs(three_j_pair(), "A1", "A2", "A")


def _closed(vertices: Mapping[str, Iterable[str]], edges: Mapping[str, tuple[str, str]]) -> RecouplingGraph:
    """Closed graph from vertex line lists; half-edge ``v.X`` is line ``X`` at ``v``."""
    vs = tuple(Vertex(v, tuple(f"{v}.{x}" for x in lines)) for v, lines in vertices.items())
    es = tuple(Edge(x, f"{t}.{x}", f"{h}.{x}") for x, (t, h) in edges.items())
    return RecouplingGraph(vs, es, ())


def six_j() -> RecouplingGraph:
    """Tetrahedron with vertex triples (a,b,c), (a,e,f), (c,d,e), (b,d,f).

    Arrows and cyclic orders make every closed loop carry a plus sign.
    """
    return _closed(
        {
            "abc": "ABC",
            "aef": "AEF",
            "cde": "CDE",
            "bdf": "BFD",
        },
        {
            "A": ("abc", "aef"),
            "B": ("abc", "bdf"),
            "C": ("abc", "cde"),
            "D": ("cde", "bdf"),
            "E": ("aef", "cde"),
            "F": ("bdf", "aef"),
        },
    )


def nine_j() -> RecouplingGraph:
    """K(3,3) with rows (a,b,c), (d,e,f), (g,h,k) and columns (a,d,g), (b,e,h), (c,f,k)."""
    return _closed(
        {
            "abc": "ABC",
            "def": "DEF",
            "ghk": "GHK",
            "adg": "ADG",
            "beh": "BEH",
            "cfk": "CFK",
        },
        {
            "A": ("abc", "adg"),
            "B": ("abc", "beh"),
            "C": ("abc", "cfk"),
            "D": ("def", "adg"),
            "E": ("def", "beh"),
            "F": ("def", "cfk"),
            "G": ("ghk", "adg"),
            "H": ("ghk", "beh"),
            "K": ("ghk", "cfk"),
        },
    )


STANDARD_GRAPHS = {
    "3j": three_j,
    "3j3j": three_j_pair,
    "5j": five_j,
    "6j": six_j,
    "9j": nine_j,
}
