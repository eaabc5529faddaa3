"""Quantum-number assignments on a graph, stored as doubled integers."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping

from .exact import triangle_violation
from .graph import RecouplingGraph

__all__ = ["QuantumAssignment", "AssignmentError", "selection_flags", "assignments"]


class AssignmentError(ValueError):
    pass


@dataclass(frozen=True)
class QuantumAssignment:
    """``twice_j`` for every line, ``twice_m`` for every external leg."""

    twice_j: Mapping[str, int]
    twice_m: Mapping[str, int] = field(default_factory=dict)

    def validate(self, g: RecouplingGraph) -> None:
        names = set(g.edge_names) | set(g.leg_names)
        missing = names - set(self.twice_j)
        if missing:
            raise AssignmentError(f"no angular momentum for {sorted(missing)}")
        extra = set(self.twice_j) - names
        if extra:
            raise AssignmentError(f"unknown lines {sorted(extra)}")
        for name, tj in self.twice_j.items():
            if not isinstance(tj, int) or tj < 0:
                raise AssignmentError(f"2j for {name} must be a non-negative integer, got {tj!r}")
        for leg in g.leg_names:
            if leg not in self.twice_m:
                raise AssignmentError(f"no magnetic number for leg {leg}")
            tm = self.twice_m[leg]
            if not isinstance(tm, int) or abs(tm) > self.twice_j[leg]:
                raise AssignmentError(f"|2m| for {leg} must not exceed 2j={self.twice_j[leg]}, got {tm!r}")
        extra = set(self.twice_m) - set(g.leg_names)
        if extra:
            raise AssignmentError(f"magnetic numbers given for non-legs {sorted(extra)}")

    def exponents(self, g: RecouplingGraph) -> dict[str, int]:
        """Monomial exponents: ``a+m`` on ``A``, ``a-m`` on ``Abar``, ``2a`` on internal ``A``."""
        out = {}
        for leg in g.leg_names:
            tj, tm = self.twice_j[leg], self.twice_m[leg]
            out[leg] = (tj + tm) // 2
            out[leg + "bar"] = (tj - tm) // 2
        for e in g.edge_names:
            out[e] = self.twice_j[e]
        return out

    def key(self, g: RecouplingGraph) -> tuple:
        return tuple(self.twice_j[x] for x in g.leg_names + g.edge_names) + tuple(
            self.twice_m[x] for x in g.leg_names
        )


def selection_flags(g: RecouplingGraph, q: QuantumAssignment) -> tuple[str, ...]:
    """Selection rules that force the symbol to vanish, deduplicated in a fixed order."""
    found = set()
    for leg in g.leg_names:
        if (q.twice_j[leg] + q.twice_m[leg]) % 2:
            found.add("parity")
    for v in g.vertices:
        why = triangle_violation(*(q.twice_j[g.line_name(h)] for h in v.half_edges))
        if why:
            found.add(why)
    if g.legs and sum(q.twice_m.values()) != 0:
        found.add("magnetic-sum")
    return tuple(f for f in ("parity", "triangle", "magnetic-sum") if f in found)


def assignments(
    g: RecouplingGraph, max2j: int, min2j: int = 0, admissible: bool = False
) -> Iterator[QuantumAssignment]:
    """Every assignment with ``min2j <= 2j <= max2j`` on all lines and every ``2m`` in range and parity.

    With ``admissible`` only assignments passing every selection rule are produced.
    """
    lines = g.leg_names + g.edge_names
    triples = [g.vertex_lines(v) for v in g.vertices]
    for tjs in product(range(min2j, max2j + 1), repeat=len(lines)):
        tj = dict(zip(lines, tjs))
        if admissible and any(triangle_violation(*(tj[x] for x in t)) for t in triples):
            continue
        ranges = [range(-tj[leg], tj[leg] + 1, 2) for leg in g.leg_names]
        for tms in product(*ranges):
            if admissible and g.legs and sum(tms):
                continue
            yield QuantumAssignment(tj, dict(zip(g.leg_names, tms)))
