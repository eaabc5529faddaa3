from fractions import Fraction
from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from loopgen.exact import ZERO, RootRational, triangle_violation
from loopgen.graph import six_j, three_j
from loopgen.oracles import BudgetExceeded, contraction_oracle, racah_3j, racah_6j
from loopgen.quantum import AssignmentError, QuantumAssignment, assignments


def test_racah_3j_examples():
    assert racah_3j(0, 0, 0, 0, 0, 0) == 1
    assert racah_3j(2, 2, 0, 0, 0, 0) == RootRational(Fraction(-1, 3), 3)
    assert racah_3j(2, 2, 0, 2, 0, -2) == ZERO
    # stretched state: (1/2 1/2 1; 1/2 1/2 -1) = -1/sqrt(3)
    assert racah_3j(1, 1, 2, 1, 1, -2) == RootRational(Fraction(-1, 3), 3)


def test_racah_6j_examples():
    assert racah_6j(0, 0, 0, 0, 0, 0) == 1
    assert racah_6j(2, 2, 2, 2, 2, 2) == RootRational(Fraction(1, 6))
    assert racah_6j(2, 2, 6, 2, 2, 2) == ZERO
    # {1/2 1/2 1; 1/2 1/2 0} = 1/2
    assert racah_6j(1, 1, 2, 1, 1, 0) == RootRational(Fraction(1, 2))


def ms(tj):
    return range(-tj, tj + 1, 2)


@pytest.mark.parametrize("ta, tb", [(1, 1), (2, 1), (2, 2), (3, 2), (4, 3)])
def test_3j_orthogonality(ta, tb):
    # sum_{alpha beta} (2c+1) (a b c; alpha beta gamma)(a b c'; alpha beta gamma') = delta delta
    for tc, tc2 in product(range(abs(ta - tb), ta + tb + 1, 2), repeat=2):
        for tg, tg2 in product(ms(tc), ms(tc2)):
            total = ZERO
            for tal, tbe in product(ms(ta), ms(tb)):
                total = total + racah_3j(ta, tb, tc, tal, tbe, tg) * racah_3j(ta, tb, tc2, tal, tbe, tg2)
            assert total * (tc + 1) == (1 if (tc, tg) == (tc2, tg2) else 0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=6, max_size=6))
def test_3j_column_symmetries(v):
    ta, tb, tc, tal, tbe, _ = v
    tga = -tal - tbe
    x = racah_3j(ta, tb, tc, tal, tbe, tga)
    phase = -1 if ((ta + tb + tc) // 2) % 2 else 1
    assert racah_3j(tb, tc, ta, tbe, tga, tal) == x
    assert racah_3j(tb, ta, tc, tbe, tal, tga) == x * phase
    assert racah_3j(ta, tb, tc, -tal, -tbe, -tga) == x * phase


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=6, max_size=6))
def test_6j_tetrahedral_symmetry(v):
    a, b, c, d, e, f = v
    x = racah_6j(a, b, c, d, e, f)
    cols = [(a, d), (b, e), (c, f)]
    for p in permutations(cols):
        (a1, d1), (b1, e1), (c1, f1) = p
        assert racah_6j(a1, b1, c1, d1, e1, f1) == x
    assert racah_6j(d, e, c, a, b, f) == x


@pytest.mark.parametrize("ta, tb, tc, td", [(1, 1, 1, 1), (2, 2, 2, 2), (2, 1, 1, 2), (3, 2, 3, 2)])
def test_6j_orthogonality(ta, tb, tc, td):
    # sum_x (2x+1)(2f+1) {a b x; c d f}{a b x; c d f'} = delta_{f f'} when (a d f), (b c f) couple
    for tf, tf2 in product(range(10), repeat=2):
        total = ZERO
        for tx in range(12):
            total = total + racah_6j(ta, tb, tx, tc, td, tf) * racah_6j(ta, tb, tx, tc, td, tf2) * (tx + 1)
        couples = not triangle_violation(ta, td, tf) and not triangle_violation(tb, tc, tf)
        assert total * (tf + 1) == (1 if tf == tf2 and couples else 0)


def test_contraction_reproduces_3j():
    g = three_j()
    for q in assignments(g, 3):
        t, m = q.twice_j, q.twice_m
        assert contraction_oracle(g, q) == racah_3j(t["A"], t["B"], t["C"], m["A"], m["B"], m["C"])


def test_contraction_reproduces_6j():
    g = six_j()
    for q in assignments(g, 2, admissible=True):
        assert contraction_oracle(g, q) == racah_6j(*(q.twice_j[x] for x in "ABCDEF"))


def test_contraction_budget():
    g = six_j()
    q = QuantumAssignment(dict.fromkeys("ABCDEF", 4))
    with pytest.raises(BudgetExceeded):
        contraction_oracle(g, q, budget=10)
    stats = {}
    contraction_oracle(g, q, stats=stats)
    assert stats["terms"] > 10


def test_assignment_validation():
    g = three_j()
    with pytest.raises(AssignmentError):
        QuantumAssignment({"A": 1, "B": 1}, {"A": 1, "B": 1}).validate(g)
    with pytest.raises(AssignmentError):
        QuantumAssignment({"A": 1, "B": 1, "C": 0}, {"A": 3, "B": 1, "C": 0}).validate(g)
    with pytest.raises(AssignmentError):
        QuantumAssignment({"A": -2, "B": 1, "C": 0}, {"A": 0, "B": 1, "C": 0}).validate(g)
    with pytest.raises(AssignmentError):
        QuantumAssignment({"A": 1, "B": 1, "C": 0}, {"A": 1, "B": 1}).validate(g)
