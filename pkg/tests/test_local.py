import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import XY, XYZ, to_sympy
from effalg.groebner import buchberger, vanishes_only_at_origin
from effalg.local import INFINITE, colength, mora_standard_basis, staircase_size, tangent_cone_ideal
from effalg.parse import parse_polynomial
from effalg.poly import Polynomial

x, y = Polynomial.generators(XY)


def global_staircase(gens):
    """Independent oracle: monomials outside the leading ideal of a sympy Groebner basis."""
    syms = sympy.symbols(gens[0].vars)
    gb = sympy.groebner([to_sympy(g) for g in gens], *syms, order="grevlex")
    leads = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in gb.exprs]
    return staircase_size(leads, len(syms))


@pytest.mark.parametrize(
    "gens, expected",
    [
        (["z1", "z2"], 1),
        (["z1^2", "z2^3"], 6),
        (["z1^2"], INFINITE),
        (["z1*z2", "z1+z2"], 2),
        (["z1*z2", "z1^2*z2"], INFINITE),
        (["z1*(1-z1)", "z2"], 1),  # the second zero (1, 0) is not local
        (["z1^2 + z2^3", "z1*z2"], 5),
    ],
)
def test_colength_values(gens, expected):
    polys = [parse_polynomial(g, ("z1", "z2")) for g in gens]
    assert colength(polys) == expected


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_milnor_number_of_a_k_singularity(k):
    f = x**2 + y ** (k + 1)
    assert colength([f.diff("x"), f.diff("y")]) == k


def test_milnor_number_of_e6():
    f = x**3 + y**4
    assert colength([f.diff("x"), f.diff("y")]) == 6


def test_standard_basis_of_the_unit_ideal():
    sb = mora_standard_basis([1 + x, y])
    assert sb.is_unit()
    assert colength(sb) == 0


coeffs = st.integers(-3, 3)


@settings(max_examples=30)
@given(a=coeffs, b=coeffs, c=coeffs, p=st.integers(1, 3), q=st.integers(1, 3))
def test_colength_agrees_with_global_count_when_origin_is_the_only_zero(a, b, c, p, q):
    gens = [x**p + a * x * y + b * y**3, y**q + c * x**2 * y]
    if not vanishes_only_at_origin(gens):
        return
    assert colength(gens) == global_staircase(gens)


def test_staircase_counts():
    assert staircase_size([(2, 0), (0, 3)], 2) == 6
    assert staircase_size([(2, 0), (1, 1), (0, 2)], 2) == 3
    assert staircase_size([(2, 0)], 2) == INFINITE
    assert staircase_size([(0, 0)], 2) == 0


def test_tangent_cone_of_a_cusp():
    cone = tangent_cone_ideal([y**2 - x**3])
    assert list(cone) == [y**2]


def test_tangent_cone_of_a_node():
    cone = tangent_cone_ideal([y**2 - x**2 - x**3])
    assert [g.primitive() for g in cone] == [(x**2 - y**2).primitive()]


def test_tangent_cone_needs_a_standard_basis():
    # lowest forms of the generators alone give (x, x) and miss y^2
    u, v, w = Polynomial.generators(XYZ)
    gens = [u + v**2, u]
    cone = tangent_cone_ideal(gens)
    assert buchberger(list(cone)).contains(v**2)
