"""Exhaustive cross-checks of the series engine against independent evaluators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .exact import RootRational
from .graph import RecouplingGraph, bar, glue_legs, six_j, three_j
from .oracles import contraction_oracle, racah_3j, racah_6j
from .quantum import QuantumAssignment, assignments
from .series import glue_series
from .symbols import SymbolEvaluator, expand_eq5, generating_function, symbol_via_layer_sums

__all__ = ["CheckReport", "oracle_for", "check", "verify_glue"]


@dataclass
class CheckReport:
    cases: int = 0
    mismatches: list[tuple[str, QuantumAssignment, str, str]] = field(default_factory=list)
    oracle: str = ""

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        return f"{len(self.mismatches)} mismatches / {self.cases} cases"


def oracle_for(g: RecouplingGraph, budget: int = 10**6) -> tuple[str, Callable[[QuantumAssignment], RootRational]]:
    """The closed-form oracle when ``g`` is a standard 3-j or 6-j graph, else the contraction sum."""
    text = g.to_text()
    if text == three_j().to_text():
        def r3(q: QuantumAssignment) -> RootRational:
            t, m = q.twice_j, q.twice_m
            return racah_3j(t["A"], t["B"], t["C"], m["A"], m["B"], m["C"])
        return "racah_3j", r3
    if text == six_j().to_text():
        def r6(q: QuantumAssignment) -> RootRational:
            return racah_6j(*(q.twice_j[x] for x in "ABCDEF"))
        return "racah_6j", r6
    return "contraction", lambda q: contraction_oracle(g, q, budget)


def check(
    g: RecouplingGraph,
    max2j: int,
    budget: int = 10**6,
    eq6: bool = True,
    layers: bool = True,
    oracle: bool = True,
) -> CheckReport:
    """Compare the product-form extraction with the oracle, the exponential form and layer sums.

    Raises ``BudgetExceeded`` if the contraction oracle would exceed ``budget`` terms on a case.
    """
    name, ref = oracle_for(g, budget)
    report = CheckReport(oracle=name)
    ev5 = SymbolEvaluator(g, max2j, "eq5")
    ev6 = SymbolEvaluator(g, max2j, "eq6") if eq6 else None
    use_layers = layers and g.J == 0
    for q in assignments(g, max2j):
        report.cases += 1
        got = ev5(q)
        others = []
        if oracle:
            others.append((name, ref(q)))
        if ev6 is not None:
            others.append(("eq6", ev6(q).value))
        if use_layers:
            others.append(("layers", symbol_via_layer_sums(g, q, ev5.gf).value))
        for label, want in others:
            if want != got.value:
                report.mismatches.append((label, q, str(got.value), str(want)))
    return report


def verify_glue(
    g: RecouplingGraph, leg_1: str, leg_2: str, name: str | None = None, cap: int = 3
) -> tuple[RecouplingGraph, bool]:
    """Glue two legs and compare the residue-glued series of ``g`` with the series of the glued graph.

    ``g`` is expanded to per-variable ``cap`` and total degree ``2 * cap``,
    which leaves the glued series complete up to total degree ``cap``.
    """
    glued = glue_legs(g, leg_1, leg_2, name)
    new = name or leg_1 + leg_2
    F = expand_eq5(generating_function(g), cap, total=2 * cap)
    lhs = glue_series(F, (leg_1, bar(leg_1)), (leg_2, bar(leg_2)), new)
    rhs = expand_eq5(generating_function(glued), cap, total=cap)
    return glued, lhs.agrees_with(rhs)
