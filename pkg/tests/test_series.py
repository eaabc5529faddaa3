from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from loopgen.curves import MultilinearPolynomial
from loopgen.series import CapError, TruncatedSeries, glue_series

VARS = ("X", "Xbar", "Y")


def series_strategy(variables=VARS, caps=3, const=None, max_coeff=4):
    nv = len(variables)
    exps = st.tuples(*[st.integers(0, caps)] * nv)
    coeff = st.integers(-max_coeff, max_coeff)

    def build(terms, c0):
        terms.pop((0,) * nv, None)
        if const is not None:
            terms[(0,) * nv] = c0
        return TruncatedSeries(variables, caps, terms)

    return st.builds(build, st.dictionaries(exps, coeff, max_size=6), st.sampled_from(const or [0]))


def to_sympy(s: TruncatedSeries):
    syms = sympy.symbols(s.variables)
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod(x**e for x, e in zip(syms, k))
               if isinstance(c, Fraction) else c * sympy.prod(x**e for x, e in zip(syms, k))
               for k, c in s.terms.items()), syms


def from_sympy(expr, s: TruncatedSeries):
    syms = sympy.symbols(s.variables)
    poly = sympy.Poly(sympy.expand(expr), *syms)
    terms = {}
    for k, c in poly.terms():
        terms[k] = Fraction(int(c.p), int(c.q))
    return TruncatedSeries(s.variables, s.caps, terms, s.total)


def test_power_minus_two():
    s = TruncatedSeries.from_polynomial(MultilinearPolynomial([((), 1), (("X",), 1)]), caps=3)
    assert str(s.power(-2)) == "1 - 2*X + 3*X^2 - 4*X^3"


def test_coefficient_and_caps():
    s = TruncatedSeries(("A", "B"), {"A": 2, "B": 1}, {(1, 1): 5}, total=2)
    assert s.coefficient({"A": 1, "B": 1}) == 5
    assert s.coefficient((0, 0)) == 0
    with pytest.raises(CapError):
        s.coefficient({"B": 2})
    with pytest.raises(CapError):
        s.coefficient({"A": 2, "B": 1})
    with pytest.raises(KeyError):
        s.coefficient({"Z": 1})


@settings(max_examples=40, deadline=None)
@given(series_strategy(), series_strategy())
def test_product_matches_sympy(a, b):
    ea, _ = to_sympy(a)
    eb, _ = to_sympy(b)
    assert a * b == from_sympy(ea * eb, a)


@settings(max_examples=40, deadline=None)
@given(series_strategy(const=[1, -1, 2, 3]), st.integers(-4, 4))
def test_power_inverse_laws(s, n):
    assert s.power(n) * s.power(-n) == TruncatedSeries.constant(1, VARS, 3)


@settings(max_examples=30, deadline=None)
@given(series_strategy(const=[1, 2]), st.integers(0, 4))
def test_power_matches_repeated_product(s, n):
    want = TruncatedSeries.constant(1, VARS, 3)
    for _ in range(n):
        want = want * s
    assert s.power(n) == want


@settings(max_examples=30, deadline=None)
@given(series_strategy(), series_strategy())
def test_exp_is_a_homomorphism(a, b):
    assert (a + b).exp() == a.exp() * b.exp()


@settings(max_examples=20, deadline=None)
@given(series_strategy(const=[1, 2, 5]))
def test_reciprocal_matches_sympy_in_one_variable(s):
    one = TruncatedSeries(("X",), 5, {(k[0],): c for k, c in s.terms.items() if not k[1] and not k[2]})
    x = sympy.Symbol("X")
    expr, _ = to_sympy(one)
    want = sympy.series(1 / expr, x, 0, 6).removeO()
    assert one.reciprocal() == from_sympy(want, one)


def test_total_truncation():
    s = TruncatedSeries(("A", "B"), 3, {(0, 0): 1, (1, 0): 1, (0, 1): 1}, total=2)
    assert max(sum(k) for k in s.power(-1).terms) == 2


def test_exp_needs_zero_constant():
    with pytest.raises(ValueError):
        TruncatedSeries.constant(1, VARS, 2).exp()
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries(VARS, 2, {(1, 0, 0): 1}).power(-1)


def test_glue_residue_rule():
    # X1^p Xbar1^q X2^q Xbar2^p survives as (-1)^p N^(p+q)
    vars_ = ("X1", "X1bar", "X2", "X2bar", "R")
    F = TruncatedSeries(vars_, 3, {(1, 0, 0, 1, 0): 2, (1, 1, 1, 1, 1): 3, (1, 0, 1, 0, 0): 7, (2, 0, 0, 2, 0): 1})
    G = glue_series(F, ("X1", "X1bar"), ("X2", "X2bar"), "N")
    assert G.variables == ("N", "R")
    assert G.terms == {(1, 0): -2, (2, 1): -3, (2, 0): 1}


def _mixed():
    a_vars = ("P", "Pbar", "U")
    b_vars = ("Q", "Qbar", "W")
    ex = st.tuples(*[st.integers(0, 2)] * 3)
    mk = lambda vs: st.builds(lambda t: TruncatedSeries(vs, 2, t), st.dictionaries(ex, st.integers(-3, 3), max_size=6))
    return mk(a_vars), mk(b_vars)


@settings(max_examples=40, deadline=None)
@given(*_mixed())
def test_glue_of_product_equals_glue_with_other(a, b):
    whole = a * b
    one = glue_series(whole, ("P", "Pbar"), ("Q", "Qbar"), "N")
    two = glue_series(a, ("P", "Pbar"), ("Q", "Qbar"), "N", other=b)
    assert one.agrees_with(two)


@settings(max_examples=30, deadline=None)
@given(*_mixed())
def test_glue_commutes_with_multiplying_spectators(a, b):
    # multiplying by a series in untouched variables commutes with gluing
    spectator = TruncatedSeries(("Z",), 2, {(0,): 1, (1,): 2, (2,): -1})
    glued_then = glue_series(a * b, ("P", "Pbar"), ("Q", "Qbar"), "N") * spectator
    then_glued = glue_series(a * b * spectator, ("P", "Pbar"), ("Q", "Qbar"), "N")
    assert glued_then.agrees_with(then_glued)


def test_glue_errors():
    F = TruncatedSeries(("X1", "X1bar"), 2, {(0, 0): 1})
    with pytest.raises(KeyError):
        glue_series(F, ("X1", "X1bar"), ("X2", "X2bar"), "N")
