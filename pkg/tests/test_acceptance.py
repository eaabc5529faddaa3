"""Acceptance criteria; each test prints one PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) or through pytest.
"""
from __future__ import annotations

import csv
import io
import random
import time
from contextlib import contextmanager

import pytest

from loopgen.cli import BENCH_HEADER, main
from loopgen.curves import MultilinearPolynomial, count_sets, curve_polynomial, loop_polynomial
from loopgen.graph import (
    five_j,
    nine_j,
    random_graph,
    reverse_edge,
    six_j,
    swap_half_edges,
    three_j,
)
from loopgen.quantum import QuantumAssignment, assignments
from loopgen.series import TruncatedSeries, glue_series
from loopgen.symbols import SymbolEvaluator, expand_eq5, expand_eq6, generating_function
from loopgen.verify import check

LINES: list[str] = []
_capsys = None


@pytest.fixture(autouse=True)
def _report_channel(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


def _emit(line: str) -> None:
    if _capsys is None:
        print(line)
    else:
        with _capsys.disabled():
            print("\n" + line)


@contextmanager
def criterion(n: int, title: str, budget_s: float | None = None):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - t0
        if budget_s is not None:
            assert elapsed < budget_s, f"took {elapsed:.1f} s, budget {budget_s} s"
        status = "PASS"
    finally:
        line = f"[{status}] criterion {n:2d}: {title} ({time.perf_counter() - t0:.2f} s)"
        LINES.append(line)
        _emit(line)


def poly(*terms: tuple[str, int]) -> MultilinearPolynomial:
    return MultilinearPolynomial([(t.split() if t else [], c) for t, c in terms])


_SWEEPS: dict[str, tuple] = {}


def sweep(name: str):
    """Run (once) the exhaustive comparison for one of the oracle sweeps."""
    if name not in _SWEEPS:
        g, max2j = {"3j": (three_j(), 6), "6j": (six_j(), 5), "9j": (nine_j(), 3)}[name]
        t0 = time.perf_counter()
        report = check(g, max2j)
        _SWEEPS[name] = (report, time.perf_counter() - t0)
    return _SWEEPS[name]


def _only(report, label):
    return [m for m in report.mismatches if m[0] == label]


# 1 -----------------------------------------------------------------------------


def test_01_golden_six_j():
    with criterion(1, "6-j loop polynomial", 1.0):
        assert str(loop_polynomial(six_j())) == "1 + A*B*F + A*C*E + B*C*D + D*E*F + A*B*D*E + A*C*D*F + B*C*E*F"


# 2 -----------------------------------------------------------------------------


def test_02_golden_nine_j():
    with criterion(2, "9-j loop polynomial", 1.0):
        want = poly(
            ("", 1),
            ("A B D E", -1), ("A B G H", -1), ("A C D F", -1), ("A C G K", -1), ("B C E F", -1),
            ("B C H K", -1), ("D E G H", -1), ("D F G K", -1), ("E F H K", -1),
            ("A B E F G K", 1), ("A C D E H K", 1), ("B C D F G H", 1),
            ("A B D F H K", -1), ("A C E F G H", -1), ("B C D E G K", -1),
        )
        got = loop_polynomial(nine_j())
        assert got == want and len(got) == 16


# 3 -----------------------------------------------------------------------------


def test_03_golden_three_j():
    with criterion(3, "3-j factors and exponential form", 5.0):
        gf = generating_function(three_j())
        assert gf.base == poly(("", 1))
        # 1/(1+(B-C)Abar) 1/(1+(C-A)Bbar) 1/(1+(A-B)Cbar)
        assert gf.q_factors == {
            "A": poly(("", 1), ("B Abar", 1), ("C Abar", -1)),
            "B": poly(("", 1), ("C Bbar", 1), ("A Bbar", -1)),
            "C": poly(("", 1), ("A Cbar", 1), ("B Cbar", -1)),
        }
        g = three_j()
        det = poly(("A Bbar", 1), ("B Abar", -1), ("B Cbar", 1), ("C Bbar", -1), ("C Abar", 1), ("A Cbar", -1))
        want = TruncatedSeries.from_polynomial(det, g.variables(), 3).exp()
        assert expand_eq6(gf, 3) == want


# 4 -----------------------------------------------------------------------------


def test_04_counting_identities():
    with criterion(4, "loop and curve set counts on 60 random graphs", 60.0):
        seen = 0
        for seed in range(60):
            rng = random.Random(seed)
            g = random_graph(rng, rng.randint(1, 10))
            assert g.is_connected() and g.V <= 10
            n0, pairs = count_sets(g)
            assert n0 == 2 ** (g.I - g.V + 1)
            if g.J >= 2:
                assert all(n == n0 for n in pairs.values())
            seen += 1
        assert seen >= 50


# 5-7 ---------------------------------------------------------------------------


def test_05_three_j_sweep():
    with criterion(5, "3-j sweep against Racah, 2j <= 6", 60.0):
        report, elapsed = sweep("3j")
        assert report.oracle == "racah_3j"
        assert not _only(report, "racah_3j")
        assert elapsed < 60.0


def test_06_six_j_sweep():
    with criterion(6, "6-j sweep against Racah, 2j <= 5", 120.0):
        report, elapsed = sweep("6j")
        assert report.oracle == "racah_6j"
        assert report.cases == 6**6
        assert not _only(report, "racah_6j")
        assert elapsed < 120.0


def test_07_nine_j_sweep():
    with criterion(7, "9-j sweep against contraction, 2j <= 3", 600.0):
        report, elapsed = sweep("9j")
        assert report.oracle == "contraction"
        assert report.cases == 4**9
        assert not _only(report, "contraction")
        assert elapsed < 600.0


# 8-9 ---------------------------------------------------------------------------


def test_08_product_and_exponential_forms_agree():
    with criterion(8, "product and exponential forms agree on sweeps 5-7"):
        for name in ("3j", "6j", "9j"):
            report, _ = sweep(name)
            assert not _only(report, "eq6"), name


def test_09_layer_sums_agree():
    with criterion(9, "layer sums agree on 6-j and 9-j sweeps"):
        for name in ("6j", "9j"):
            report, _ = sweep(name)
            assert not _only(report, "layers"), name


# 10 ----------------------------------------------------------------------------


def test_10_gluing_step():
    with criterion(10, "glued 3-j pair equals 5-j series, total degree 8", 60.0):
        g1, g2 = three_j("A1", "B", "C", "v1"), three_j("A2", "D", "E", "v2")
        s1 = expand_eq5(generating_function(g1), 8, total=8)
        s2 = expand_eq5(generating_function(g2), 8, total=8)
        glued = glue_series(s1, ("A1", "A1bar"), ("A2", "A2bar"), "A", other=s2)
        target = expand_eq5(generating_function(five_j()), 8, total=8)
        assert glued.total == 8
        assert glued == target

        gf = generating_function(five_j())
        assert gf.base == poly(("", 1))
        one = ("", 1)
        want = {
            # 1+(C-A(D-E))Bbar, 1+(A(D-E)-B)Cbar, 1+(E+A(B-C))Dbar, 1+(-A(B-C)-D)Ebar
            "B": poly(one, ("C Bbar", 1), ("A D Bbar", -1), ("A E Bbar", 1)),
            "C": poly(one, ("A D Cbar", 1), ("A E Cbar", -1), ("B Cbar", -1)),
            "D": poly(one, ("E Dbar", 1), ("A B Dbar", 1), ("A C Dbar", -1)),
            "E": poly(one, ("A B Ebar", -1), ("A C Ebar", 1), ("D Ebar", -1)),
        }
        g = five_j()
        for j, q in want.items():
            parts = [curve_polynomial(g, i, j) for i in g.leg_names if i != j]
            total = poly(one)
            for p in parts:
                total = total + p
            assert total == q, j


# 11 ----------------------------------------------------------------------------


def _regge_substitutions(ta, tb, tc, x, y, z):
    """Images of a 3-j argument set under a+-alpha -> b+c-a (with b, c alike), in doubled units."""
    top = ((tb + tc - ta) // 2, (ta + tc - tb) // 2, (ta + tb - tc) // 2)
    minus = ((ta - x) // 2, (tb - y) // 2, (tc - z) // 2)
    plus = ((ta + x) // 2, (tb + y) // 2, (tc + z) // 2)
    for lo, hi in ((top, plus), (minus, top)):  # a-alpha -> b+c-a, a+alpha -> b+c-a
        yield {"A": lo[0] + hi[0], "B": lo[1] + hi[1], "C": lo[2] + hi[2]}, {
            "A": hi[0] - lo[0],
            "B": hi[1] - lo[1],
            "C": hi[2] - lo[2],
        }


def test_11_sign_covariances():
    with criterion(11, "edge reversal, leg transposition and Regge substitutions"):
        # edge reversal and vertex leg transposition over the 3-j and 6-j sweep ranges
        for g, max2j in ((three_j(), 6), (six_j(), 5)):
            ev = SymbolEvaluator(g, max2j)
            cases = [(q, ev(q).value) for q in assignments(g, max2j, admissible=True)]
            for e in g.edge_names:
                r = SymbolEvaluator(reverse_edge(g, e), max2j)
                for q, v in cases:
                    assert r(q).value == v * (-1) ** q.twice_j[e]
            for vert in g.vertices:
                for h1, h2 in ((0, 1), (1, 2)):
                    s = SymbolEvaluator(
                        swap_half_edges(g, vert.name, vert.half_edges[h1], vert.half_edges[h2]), max2j
                    )
                    lines = g.vertex_lines(vert)
                    for q, v in cases:
                        assert s(q).value == v * (-1) ** (sum(q.twice_j[x] for x in lines) // 2)
        # one reversal and one transposition across the 9-j sweep range
        g = nine_j()
        ev = SymbolEvaluator(g, 3)
        r = SymbolEvaluator(reverse_edge(g, "E"), 3)
        vert = g.vertices[0]
        s = SymbolEvaluator(swap_half_edges(g, vert.name, *vert.half_edges[:2]), 3)
        for q in assignments(g, 3, admissible=True):
            v = ev(q).value
            assert r(q).value == v * (-1) ** q.twice_j["E"]
            assert s(q).value == v * (-1) ** (sum(q.twice_j[x] for x in g.vertex_lines(vert)) // 2)

        # Regge substitution grid on the 3-j symbol, 2j <= 4, asserted as plain invariance.
        g = three_j()
        big = SymbolEvaluator(g, 12)
        checked, flipped = 0, []
        for q in assignments(g, 4, admissible=True):
            t, m = q.twice_j, q.twice_m
            v = big(q).value
            phase = (-1) ** ((t["A"] + t["B"] + t["C"]) // 2)
            for tj, tm in _regge_substitutions(t["A"], t["B"], t["C"], m["A"], m["B"], m["C"]):
                w = big(QuantumAssignment(tj, tm)).value
                assert w == v * phase  # any discrepancy is exactly (-1)^(a+b+c)
                checked += 1
                if w != v:
                    flipped.append((dict(t), dict(m), str(v), str(w)))
        assert not flipped, (
            f"{len(flipped)} of {checked} substitutions change the value by (-1)^(a+b+c); first: {flipped[0]}"
        )


# 12 ----------------------------------------------------------------------------


def test_12_benchmark_artifact():
    with criterion(12, "benchmark CSV for 6-j up to 2j = 8"):
        out = io.StringIO()
        assert main(["bench", "@6j", "--max2j", "8", "--csv"], out=out) == 0
        rows = list(csv.reader(io.StringIO(out.getvalue())))
        assert tuple(rows[0]) == BENCH_HEADER
        by_eval: dict[str, list[tuple[int, int]]] = {}
        for name, size, cases, wall_ms, terms in rows[1:]:
            assert name in ("series", "layers", "contraction")
            float(wall_ms)
            int(terms)
            by_eval.setdefault(name, []).append((int(size), int(cases)))
        for name, pts in by_eval.items():
            sizes = [s for s, _ in pts]
            counts = [c for _, c in pts]
            assert sizes == list(range(len(sizes)))
            assert counts == sorted(counts), name
        assert len(by_eval["series"]) == 9 and len(by_eval["layers"]) == 9


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
