import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import XY, XYZ, polynomials, to_sympy
from effalg.groebner import (
    IdealBasis,
    buchberger,
    check_image_identity,
    elimination_generator,
    ideal_dimension,
    is_groebner,
    normal_form,
    s_polynomial,
    vanishes_only_at_origin,
)
from effalg.parse import parse_polynomial
from effalg.poly import DEGREVLEX, LEX, LOCAL, Polynomial, block_ordering

x, y, z = Polynomial.generators(XYZ)

BASES = [
    [x**2 + y * z - 2, x * y * z - 1, y**2 - z],
    [x**3 - 2 * x * y, x**2 * y - 2 * y**2 + x],
    [x * y - z, y * z - x, z * x - y],
    [x + y + z, x * y + y * z + z * x, x * y * z],
    [x**2 - y, x**3 - z],
]


@pytest.mark.parametrize("ordering", [DEGREVLEX, LEX, block_ordering(1)])
@pytest.mark.parametrize("gens", BASES)
def test_s_polynomials_reduce_to_zero(gens, ordering):
    gb = buchberger(gens, ordering)
    assert is_groebner(gb)
    for g in gens:
        assert gb.contains(g)


@pytest.mark.parametrize("gens", BASES)
def test_reduced_basis_matches_sympy(gens):
    theirs = sympy.groebner([to_sympy(g) for g in gens], *sympy.symbols(XYZ), order="grevlex")
    expected = {parse_polynomial(str(g).replace("**", "^"), XYZ).monic() for g in theirs.exprs}
    assert set(buchberger(gens, DEGREVLEX)) == expected


def test_reduced_basis_is_monic_and_interreduced():
    gb = buchberger(BASES[1], DEGREVLEX)
    leads = gb.leading_monomials
    for g in gb:
        assert g.leading_coefficient() == 1
        others = [m for m in leads if m != g.leading_monomial()]
        for mono in g.terms:
            assert not any(all(a <= b for a, b in zip(o, mono)) for o in others)


@settings(max_examples=25)
@given(st.lists(polynomials(XY, max_exp=3, max_terms=3), min_size=1, max_size=3))
def test_random_bases_are_groebner(gens):
    gens = [g for g in gens if g] or [Polynomial.variable("x", XY)]
    gb = buchberger(gens, DEGREVLEX, XY)
    assert is_groebner(gb)
    for g in gens:
        assert not normal_form(g, gb)


def test_s_polynomial_cancels_leads():
    f, g = x**2 * y - 1, x * y**2 - x
    s = s_polynomial(f, g)
    assert s == y * (x**2 * y - 1) - x * (x * y**2 - x)


def test_normal_form_rejects_local_ordering():
    with pytest.raises(ValueError):
        normal_form(x, IdealBasis((x,), LOCAL))


def test_unit_ideal():
    gb = buchberger([x, x + 1])
    assert gb.is_unit()
    assert ideal_dimension(gb) == -1


@pytest.mark.parametrize(
    "gens, dim",
    [([x, y, z], 0), ([x * y, x * z], 2), ([x - y**2], 2), ([x**2 + y**2 + z**2 - 1, z], 1), ([x * y * z], 2)],
)
def test_ideal_dimension(gens, dim):
    assert ideal_dimension(gens) == dim


@pytest.mark.parametrize(
    "gens, expected",
    [
        ([x, y, z], True),
        ([x**2, y**3 - x, z - x * y], True),
        ([x * y, y * z, z * x], False),
        ([x**2 + y**2, z], False),  # the complex lines x = +-iy
        ([x - 1, y, z], False),  # the single zero (1, 0, 0) lies off the origin
        ([x * (x - 1), y, z], False),
        ([x * (x - 1), y * (y - 1), z, x * y], False),
        ([x, y, z * (z + 1) - z], True),
        ([x + y + z, x * y + y * z + z * x, x * y * z], True),
    ],
)
def test_vanishes_only_at_origin(gens, expected):
    assert vanishes_only_at_origin(gens) is expected


def test_elimination_reproduces_bump_map():
    zs = ("z1", "z2")
    H = [parse_polynomial(s, zs) for s in ("z1*(1 - z1^2 - z2^2)", "z2*(1 - z1^2 - z2^2)")]
    N = Polynomial.variable("z1", zs)
    image = elimination_generator(H, N)
    expected = parse_polynomial("t^3*(y1^2 + y2^2) - t*y1^2 + y1^3", ("z1", "z2", "y1", "y2", "t"))
    ys = ("y1", "y2", "t")
    assert image.P.embed(ys) == expected.embed(ys) or image.P.embed(ys) == -expected.embed(ys)
    assert check_image_identity(image.P, H, N, image.y_names, image.t_name)
    assert image.regularity_order() is None


def test_elimination_of_a_finite_map_is_regular():
    zs = ("z1", "z2")
    H = [parse_polynomial(s, zs) for s in ("z1^2", "z2^2")]
    N = parse_polynomial("z1 + z2", zs)
    image = elimination_generator(H, N)
    assert check_image_identity(image.P, H, N, image.y_names, image.t_name)
    # P(0, t) = t^4 since N has multiplicity 4 on the fibre over 0
    assert image.regularity_order() == 4


def test_elimination_rejects_unknown_method():
    with pytest.raises(ValueError):
        elimination_generator([x, y, z], x, method="magic")
