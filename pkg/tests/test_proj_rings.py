import pytest

from fgl_cobord.core.errors import DepthError, FglCobordError, NotNilpotentError, ShapeError
from fgl_cobord.core.mishchenko import mishchenko_elements
from fgl_cobord.core.proj_rings import (
    ProjRing,
    chern_of_line_bundle,
    extract_fgl_coeffs,
    hyperplane_divisor_power,
    pushforward,
    pushforward_to_point,
    verify_geometric_associativity,
)
from fgl_cobord.core.rings import IntegerRing
from fgl_cobord.core.specialize import additive_table, multiplicative_table


def test_variable_names_and_shape(L3):
    assert ProjRing(L3, (2,)).variables == ("t",)
    assert ProjRing(L3, (1, 2)).variables == ("t1", "t2")
    with pytest.raises(ShapeError):
        ProjRing(L3, (-1,))
    with pytest.raises(ShapeError):
        ProjRing(L3, (1, 1), ("t",))


def test_chern_class_of_o_1_1(L3, F3):
    R = ProjRing(L3, (1, 1))
    c = chern_of_line_bundle(R, F3, (1, 1))
    t1, t2 = R.generator(0), R.generator(1)
    assert c == t1 + t2 + (t1 * t2).scale(L3.generator(1, 1))
    assert chern_of_line_bundle(R, F3, (0, 0)) == R.zero


@pytest.mark.parametrize("caps", [(6, 6), (3, 5)])
def test_extraction_recovers_the_table(L6, F6, caps):
    R = ProjRing(L6, caps)
    table = extract_fgl_coeffs(R, chern_of_line_bundle(R, F6, (1, 1)))
    n, m = caps
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            assert table.coeff(i, j) == F6.coeff(i, j)


def test_extraction_refuses_bad_input(L3):
    R = ProjRing(L3, (2, 2))
    with pytest.raises(NotNilpotentError, match="not a first Chern class"):
        extract_fgl_coeffs(R, R.one + R.generator(0))
    with pytest.raises(ShapeError):
        extract_fgl_coeffs(ProjRing(L3, (2,)), ProjRing(L3, (2,)).generator())
    with pytest.raises(ShapeError):
        extract_fgl_coeffs(R, ProjRing(L3, (2, 3)).generator(0))


def test_hyperplane_powers(L3):
    R = ProjRing(L3, (3,))
    assert hyperplane_divisor_power(R, 2) == R.generator() ** 2
    assert hyperplane_divisor_power(R, 4) == R.zero
    with pytest.raises(ShapeError):
        hyperplane_divisor_power(R, -1)


def test_pushforward_of_linear_subspaces(L6, cache6):
    R = ProjRing(L6, (2,))
    a11 = L6.generator(1, 1)
    assert pushforward_to_point(R, R.one, cache6) == cache6.element(2)
    assert pushforward_to_point(R, R.generator(), cache6) == -a11
    assert pushforward_to_point(R, hyperplane_divisor_power(R, 2), cache6) == 1


def test_pushforward_of_a_divisor_class(L6, F6, cache6):
    R = ProjRing(L6, (1, 1))
    c = chern_of_line_bundle(R, F6, (1, 1))
    assert pushforward_to_point(R, c, cache6) == cache6.element(1)
    partial = pushforward(R, c, cache6, factor=1)
    assert partial.variables == ("t1",)
    assert partial.coefficient(0) == 1
    assert partial.coefficient(1) == 0


def test_additive_pushforward():
    Z = IntegerRing()
    cache = mishchenko_elements(Z, additive_table(), 8)
    R = ProjRing(Z, (3,))
    assert pushforward_to_point(R, hyperplane_divisor_power(R, 3), cache) == 1
    assert pushforward_to_point(R, R.generator(), cache) == 0


def test_pushforward_needs_depth(L6, cache6):
    R = ProjRing(L6, (7,))
    with pytest.raises(DepthError):
        pushforward(R, R.one, cache6)


def test_parse_hyperplane_polynomials(L3):
    R = ProjRing(L3, (2,))
    t = R.generator()
    assert R.parse("t^2 + a11*t") == t * t + t.scale(L3.generator(1, 1))
    with pytest.raises(FglCobordError):
        R.parse("t +* 2")
    with pytest.raises(FglCobordError, match="not a polynomial"):
        R.parse("[t, 1]")


@pytest.mark.parametrize("n", range(1, 5))
def test_geometric_associativity(F6, n):
    assert verify_geometric_associativity(F6, n)
    assert verify_geometric_associativity(multiplicative_table(), n)


def test_pushforward_order_does_not_matter(L6, F6, cache6):
    R = ProjRing(L6, (2, 3))
    t1, t2 = R.generator(0), R.generator(1)
    samples = [
        R.one,
        chern_of_line_bundle(R, F6, (1, 1)),
        chern_of_line_bundle(R, F6, (2, -1)),
        (t1 * t2).scale(L6.parse("a11")) + t2**3 + R.one.scale(L6.parse("a12")),
    ]
    for e in samples:
        first_then_second = pushforward(R.drop(0), pushforward(R, e, cache6, 0), cache6, 0)
        second_then_first = pushforward(R.drop(1), pushforward(R, e, cache6, 1), cache6, 0)
        assert first_then_second == second_then_first
        assert first_then_second.constant_term == pushforward_to_point(R, e, cache6)
