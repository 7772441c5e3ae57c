import itertools

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, strategies as st

from conftest import XY, XYZ, polynomials, to_sympy
from effalg.poly import (
    DEGREVLEX,
    INFINITY,
    LEX,
    LOCAL,
    Polynomial,
    VariableMismatch,
    block_ordering,
    format_polynomial,
    mono_divides,
    mono_lcm,
    rational_str,
    to_rational,
)

x, y = Polynomial.generators(XY)


@given(polynomials(), polynomials(), polynomials())
def test_ring_axioms(a, b, c):
    zero, one = Polynomial.zero(XY), Polynomial.constant(1, XY)
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + zero == a and a * one == a
    assert a - a == zero


@given(polynomials(max_terms=4), polynomials(max_terms=4))
def test_product_matches_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@given(polynomials())
def test_degree_and_order_of_product(a):
    b = x + y**2
    if a.is_zero():
        assert (a * b).degree() == a.degree()
        assert a.order() == INFINITY
    else:
        assert (a * b).degree() == a.degree() + 2
        assert (a * b).order() == a.order() + 1


monomials3 = st.tuples(*[st.integers(0, 4)] * 3)


@pytest.mark.parametrize("ordering", [DEGREVLEX, LEX, block_ordering(1), block_ordering(2)])
@given(a=monomials3, b=monomials3, c=monomials3)
def test_global_ordering_laws(ordering, a, b, c):
    cmp = ordering.compare
    assert cmp(a, b) == -cmp(b, a)
    assert (cmp(a, b) == 0) == (a == b)
    if cmp(a, b) > 0 and cmp(b, c) > 0:
        assert cmp(a, c) > 0
    shift = tuple(i + j for i, j in zip(a, c))
    shifted = tuple(i + j for i, j in zip(b, c))
    assert cmp(shift, shifted) == cmp(a, b)
    # a well-ordering: every monomial dominates 1
    assert cmp(a, (0, 0, 0)) >= 0


@given(a=monomials3, b=monomials3, c=monomials3)
def test_local_ordering_laws(a, b, c):
    cmp = LOCAL.compare
    assert cmp(a, b) == -cmp(b, a)
    shift = tuple(i + j for i, j in zip(a, c))
    shifted = tuple(i + j for i, j in zip(b, c))
    assert cmp(shift, shifted) == cmp(a, b)
    assert cmp((0, 0, 0), a) >= 0
    if sum(a) < sum(b):
        assert cmp(a, b) > 0


def test_degrevlex_ranks_small_examples():
    # x^2 > xy > y^2 > x > y > 1
    ordered = [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]
    for hi, lo in itertools.combinations(ordered, 2):
        assert DEGREVLEX.compare(hi, lo) > 0
    assert LEX.compare((1, 0), (0, 5)) > 0


def test_block_ordering_eliminates_front_block():
    order = block_ordering(1)
    assert order.compare((1, 0), (0, 9)) > 0
    assert order.compare((0, 2), (0, 1)) > 0


def test_monomial_helpers():
    assert mono_divides((1, 0), (2, 3))
    assert not mono_divides((0, 4), (2, 3))
    assert mono_lcm((1, 3), (2, 0)) == (2, 3)


def test_format_is_canonical():
    p = Polynomial(XY, {(2, 0): mpq(1, 2), (0, 1): -1, (0, 0): 3})
    assert format_polynomial(p) == "1/2*x^2 - y + 3"
    assert format_polynomial(Polynomial.zero(XY)) == "0"
    assert format_polynomial(-x) == "-x"


def test_rational_helpers():
    assert rational_str(mpq(6, 4)) == "3/2"
    assert rational_str(mpq(-2)) == "-2"
    assert to_rational("2/6") == mpq(1, 3)


def test_forms_and_order():
    p = x**3 + x * y + y**2
    assert p.order() == 2
    assert p.lowest_form() == x * y + y**2
    assert p.highest_form() == x**3
    assert not p.is_homogeneous()
    assert Polynomial.zero(XY).order() == INFINITY


def test_primitive_clears_content_and_sign():
    p = Polynomial(XY, {(1, 0): mpq(-2, 3), (0, 1): mpq(4, 3)})
    assert p.primitive() == x - 2 * y


def test_diff_substitute_evaluate():
    p = x**2 * y + 3 * y
    assert p.diff("x") == 2 * x * y
    assert p.diff("y") == x**2 + 3
    u, v, w = Polynomial.generators(XYZ)
    q = p.substitute({"x": u + w, "y": v})
    assert q == (u + w) ** 2 * v + 3 * v
    assert p.evaluate({"x": 2, "y": mpq(1, 3)}) == mpq(4, 3) + 1


def test_coefficients_in():
    p = x**2 * y + x * y + y**3
    parts = p.coefficients_in("x")
    assert parts[2] == y and parts[1] == y and parts[0] == y**3


def test_embed_reorders_variables():
    p = x * y**2
    q = p.embed(("y", "t", "x"))
    assert q.terms == {(2, 0, 1): 1}


def test_mixed_variable_lists_are_rejected():
    (u,) = Polynomial.generators(("u",))
    with pytest.raises(VariableMismatch):
        _ = x + u


def test_bad_exponent_rejected():
    with pytest.raises(ValueError):
        Polynomial(XY, {(1,): 1})
    with pytest.raises(ValueError):
        x ** -1
