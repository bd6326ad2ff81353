"""Arithmetic layer: sparse Laurent polynomials and rational functions."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onsalg.exactalg import (
    LaurentPoly,
    RatFun,
    Variable,
    factor_canonical,
    parameter,
    rat,
    rfun_equal,
    rfun_substitute,
    spectral,
)

X = spectral("x")
Y = spectral("y")
A = parameter("a")

coeffs = st.integers(-9, 9)


def _exp_strategy(v):
    # exponents are stored doubled; parameters stay polynomial
    if v.kind == "spectral":
        return st.integers(-6, 6)
    return st.sampled_from([0, 2, 4])


@st.composite
def polys(draw, variables=(X, Y)):
    n = draw(st.integers(0, 5))
    terms = {}
    for _ in range(n):
        e = tuple(draw(_exp_strategy(v)) for v in variables)
        terms[e] = draw(coeffs)
    return LaurentPoly(variables, terms)


@st.composite
def nonzero_polys(draw, variables=(X, Y)):
    p = draw(polys(variables=variables))
    if p.is_zero():
        p = p + LaurentPoly.monomial(variables, (2,) + (0,) * (len(variables) - 1), 3)
    return p


def test_rat_is_exact():
    assert rat(1, 3) * 3 == 1
    assert rat(2, 4) == rat(1, 2)


def test_variable_kind_is_checked():
    with pytest.raises(ValueError):
        Variable("q", "imaginary")


def test_constructor_merges_and_drops_zeros():
    p = LaurentPoly((X,), {(2,): 1, (0,): 0})
    q = LaurentPoly((X,), {(2,): rat(1, 2)}) + LaurentPoly((X,), {(2,): rat(1, 2)})
    assert p == q
    assert not LaurentPoly((X,), {(4,): 1, (0,): 2}).is_zero()
    assert (p - q).is_zero()


def test_str_sorts_terms():
    assert str(LaurentPoly.var(X) - 1) == "-1 + x"
    assert str(LaurentPoly.monomial((X,), (-2,), 1)) == "x^-1"
    assert str(LaurentPoly.monomial((X,), (1,), 1)) == "x^(1/2)"


@given(polys(), polys())
def test_add_commutes(p, q):
    assert p + q == q + p


@given(polys(), polys(), polys())
def test_mul_distributes(p, q, r):
    assert p * (q + r) == p * q + p * r


@given(polys(), polys(), polys())
def test_mul_associates(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(polys())
def test_additive_inverse(p):
    assert (p - p).is_zero()
    assert (p + 0) == p
    assert (1 * p) == p


@given(polys(), polys())
def test_derivative_product_rule(p, q):
    lhs = (p * q).derivative(X)
    rhs = p.derivative(X) * q + p * q.derivative(X)
    assert lhs == rhs


def test_derivative_half_power():
    # d/dx x^(1/2) = (1/2) x^(-1/2)
    half = LaurentPoly.var(X, half_steps=1)
    assert half.derivative(X) == LaurentPoly.monomial((X,), (-1,), rat(1, 2))


def test_derivative_rejects_parameters():
    with pytest.raises(ValueError):
        LaurentPoly.var(A).derivative(A)


@given(polys(variables=(X,)))
def test_inversion_is_involutive(p):
    inv = LaurentPoly.monomial((X,), (-2,), 1)
    assert p.substitute({X: inv}).substitute({X: inv}) == p


def test_substitute_quotient():
    u = spectral("u")
    p = LaurentPoly.var(u) - 1
    q = p.substitute({u: LaurentPoly.monomial((X, Y), (2, -2), 1)})
    assert q == LaurentPoly((X, Y), {(2, -2): 1, (0, 0): -1})


def test_substitute_requires_monomial():
    p = LaurentPoly.var(X)
    with pytest.raises(AssertionError):
        p.substitute({X: LaurentPoly.var(Y) + 1})


def test_constant_value_reads_the_constant_term():
    p = LaurentPoly((X,), {(2,): 5, (0,): 7})
    assert p.constant_value() == 7
    assert LaurentPoly.var(X).constant_value() == 0


def test_degree_range_and_uses():
    p = LaurentPoly((X, Y), {(2, 0): 1, (-4, 2): 2})
    assert p.degree_range(X) == (-4, 2)
    assert p.uses(Y)
    assert not LaurentPoly((X, Y), {(2, 0): 1}).uses(Y)
    assert LaurentPoly.zero((X,)).degree_range(X) is None


def test_equality_ignores_context():
    p = LaurentPoly((X, Y), {(2, 0): 3})
    q = LaurentPoly((Y, X), {(0, 2): 3})
    r = LaurentPoly((X,), {(2,): 3})
    assert p == q == r
    assert hash(p) == hash(r)


def test_in_context_refuses_to_drop_used_variables():
    p = LaurentPoly((X, Y), {(0, 2): 1})
    with pytest.raises(ValueError):
        p.in_context((X,))


@given(nonzero_polys())
def test_factor_canonical_reassembles(p):
    inv_unit, factors = factor_canonical(p)
    prod = LaurentPoly.const(1, p.variables)
    for f in factors:
        prod = prod * f
    # p = unit * prod(factors), i.e. inv_unit * p = prod(factors)
    assert inv_unit * p == prod


@given(nonzero_polys())
def test_factor_canonical_ignores_context_order(p):
    q = p.in_context((Y, X))
    _, fp = factor_canonical(p)
    _, fq = factor_canonical(q)
    assert [f.canonical_key() for f in fp] == [f.canonical_key() for f in fq]


def test_factor_canonical_splits_parameter_monomials():
    p = LaurentPoly.monomial((A,), (4,), rat(3))
    inv_unit, factors = factor_canonical(p)
    assert inv_unit == LaurentPoly.const(rat(1, 3))
    assert factors == [LaurentPoly.var(A), LaurentPoly.var(A)]


def test_ratfun_absorbs_monomial_denominators():
    f = RatFun(LaurentPoly.const(1, (X,)), LaurentPoly.monomial((X,), (4,), 2))
    assert f.den == LaurentPoly.const(1)
    assert f.num == LaurentPoly.monomial((X,), (-4,), rat(1, 2))


@given(polys(variables=(X,)), nonzero_polys(variables=(X,)),
       polys(variables=(X,)), nonzero_polys(variables=(X,)))
def test_ratfun_field_laws(a, b, c, d):
    f = RatFun(a, b)
    g = RatFun(c, d)
    assert f + g == g + f
    assert f - f == RatFun(0)
    assert f * g == g * f
    if not g.is_zero():
        assert (f / g) * g == f


@given(polys(variables=(X,)), nonzero_polys(variables=(X,)))
def test_ratfun_derivative_quotient_rule(a, b):
    f = RatFun(a, b)
    manual = RatFun(a.derivative(X) * b - a * b.derivative(X), b * b)
    assert f.derivative(X) == manual


def test_ratfun_general_substitution():
    # x -> (1+y)/y in x^2 - 1
    f = RatFun(LaurentPoly((X,), {(4,): 1, (0,): -1}))
    val = RatFun(LaurentPoly.var(Y) + 1, LaurentPoly.var(Y))
    got = rfun_substitute(f, {X: val})
    yy = LaurentPoly.var(Y)
    want = RatFun((yy + 1) * (yy + 1) - yy * yy, yy * yy)
    assert got == want
    assert rfun_equal(got, want)


def test_ratfun_equality_by_cross_multiplication():
    one_x = RatFun(LaurentPoly.var(X) - 1, LaurentPoly((X,), {(4,): 1, (0,): -1}))
    other = RatFun(LaurentPoly.const(1, (X,)), LaurentPoly.var(X) + 1)
    assert one_x == other
