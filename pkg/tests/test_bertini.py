import pytest
from gmpy2 import mpq

from effalg.bertini import (
    HypothesisError,
    LinearSection,
    SmoothConeSpec,
    check_transversal_smooth,
    count_bertini,
    count_bertini_multi,
    find_bertini_witness,
    hyperplane_family,
    jacobian,
    minors,
    polynomial_determinant,
    subspace_family,
)
from effalg.linear import ParameterError, rank, vandermonde_system
from effalg.poly import Polynomial

XYZ = ("x", "y", "z")
x, y, z = Polynomial.generators(XYZ)
QUADRIC = y**2 - 4 * x * z


def quadric_cone():
    return SmoothConeSpec((QUADRIC,), 2, 1)


def test_counts():
    assert count_bertini(2, 3, 2) == 10
    assert count_bertini(2, 2, 1) == 5
    assert count_bertini_multi(2, 4, 3) == 2 * (1 + 2) + 4 * 2 - 1
    with pytest.raises(ParameterError):
        count_bertini(2, 2, 3)


def test_jacobian_and_minors():
    J = jacobian([QUADRIC])
    assert J == [[-4 * z, 2 * y, -4 * x]]
    assert minors(J, 1) == [-4 * z, 2 * y, -4 * x]
    M = [[x, y], [z, x]]
    assert polynomial_determinant(M) == x**2 - y * z


def test_cone_hypotheses_are_checked():
    quadric_cone()
    with pytest.raises(HypothesisError, match="homogeneous"):
        SmoothConeSpec((QUADRIC + x,), 2, 1)
    with pytest.raises(HypothesisError, match="singular"):
        SmoothConeSpec((x * y,), 2, 1)  # two planes meeting along the z-axis
    with pytest.raises(HypothesisError, match="dimension"):
        SmoothConeSpec((QUADRIC,), 1, 1)


def test_hyperplane_family_uses_kernel_points():
    system = vandermonde_system(3, 10)
    family = hyperplane_family(system)
    assert len(family) == 45
    for section in family:
        (a,) = section.forms
        for i in section.tuple_index:
            assert sum(c * r for c, r in zip(a, system.rows[i - 1])) == 0


def test_tangent_plane_is_not_transversal():
    # the plane x = 0 is tangent to the cone along the line x = y = 0
    tangent = LinearSection(((1, 0, 0),))
    assert not check_transversal_smooth(quadric_cone(), tangent)
    generic = LinearSection(((0, 1, 0),))
    assert check_transversal_smooth(quadric_cone(), generic)


def test_witness_search_on_the_quadric_cone():
    family = hyperplane_family(vandermonde_system(3, count_bertini(2, 3, 2)))
    search = find_bertini_witness(quadric_cone(), family, full_table=True)
    assert search.witness is not None
    assert search.witness.tuple_index == (1, 2)
    assert len(search.table) == 45


def test_witness_search_stops_at_the_first_success():
    family = hyperplane_family(vandermonde_system(3, 10))
    search = find_bertini_witness(quadric_cone(), family)
    assert len(search.table) == 1


def test_subspace_family_marks_degenerate_entries():
    m, q, s = 2, 3, 2
    ambient = m * (q - 1)
    system = vandermonde_system(ambient, count_bertini_multi(1, 3, 3) + 3)
    family = subspace_family(system, m, q, s)
    for section in family:
        assert section.codim == s
        assert len(section.kernel) == q - 1
        assert section.degenerate == (rank(section.forms) < s)
    with pytest.raises(ParameterError):
        subspace_family(system, m, q, 3)


def test_degenerate_sections_are_skipped():
    cone = SmoothConeSpec((x, y), 1, 2)
    bad = LinearSection(((0, 0, 1), (0, 0, 2)), (1,), (), True)
    good = LinearSection(((0, 0, 1),), (2,))
    search = find_bertini_witness(cone, [bad, good])
    assert search.table[0] == ((1,), None)
    assert search.witness is good
    with pytest.raises(ParameterError):
        check_transversal_smooth(cone, bad)


def test_scaled_section():
    section = LinearSection(((1, 2, 3),), (1,))
    assert section.scaled([mpq(1, 2)]).forms == ((mpq(1, 2), 1, mpq(3, 2)),)
    assert section.polynomials(XYZ) == [x + 2 * y + 3 * z]
