from math import comb

import numpy as np
import pytest

from fgl_cobord.core.errors import DepthError, NotComputableError, ShapeError
from fgl_cobord.core.line_bundle import (
    EpsilonTable,
    LBElement,
    TowerClass,
    build_psi,
    coordinates,
    forget,
    kunneth_scale,
    product,
    psi0,
    shift,
)
from fgl_cobord.core.mishchenko import mishchenko_elements
from fgl_cobord.core.rings import IntegerRing
from fgl_cobord.core.specialize import (
    additive_morphism,
    additive_table,
    multiplicative_morphism,
    specialize,
)
from fgl_cobord.core.verify import random_element

Z = IntegerRing()


@pytest.fixture(scope="module")
def eps6(F6, psi6, cache6):
    return EpsilonTable(F6, psi6, cache6)


def e(ring, i):
    return LBElement.basis(ring, i)


def test_element_basics():
    x = LBElement(Z, {0: 2, 3: -1, 5: 0})
    assert x.support == (0, 3)
    assert x.top == 3
    assert LBElement(Z).top == -1
    assert x.format() == "-e_3 + 2*e_0"
    assert (x - x).format() == "0"
    assert 2 * x == x + x
    with pytest.raises(ShapeError):
        LBElement(Z, {-1: 1})
    with pytest.raises(ShapeError):
        LBElement.from_json(Z, {"basis": "tower", "terms": []})
    assert LBElement.from_json(Z, x.to_json()) == x


def test_shift_and_forget(L6, cache6):
    assert shift(e(L6, 3)) == e(L6, 2)
    assert not shift(e(L6, 0))
    assert forget(e(L6, 2), cache6) == cache6.element(2)
    assert forget(e(L6, 0) + e(L6, 1), cache6) == 1 + cache6.element(1)


def test_gamma_series(psi6, cache6):
    p1, p2 = cache6.element(1), cache6.element(2)
    assert psi6.depth == 6
    assert psi6.gamma[0] == 1
    assert psi6.gamma[1] == -p1
    assert psi6.gamma[2] == p1 * p1 - p2


def test_psi0_is_biorthogonal(L6, psi6, cache6):
    for j in range(7):
        current = e(L6, j)
        for i in range(7):
            assert psi0(current, psi6, cache6) == (1 if i == j else 0)
            current = shift(current)


def test_coordinates_recover_random_elements(L6, psi6, cache6):
    rng = np.random.default_rng(1)
    for _ in range(100):
        betas = [random_element(L6, rng) for _ in range(7)]
        x = LBElement.from_coordinates(L6, betas)
        recovered = coordinates(x, psi6, cache6)
        assert recovered + [L6.zero] * (7 - len(recovered)) == betas


def test_psi0_depth_exhaustion(L6, psi6, cache6):
    with pytest.raises(DepthError, match="depth exhaustion"):
        psi0(e(L6, 7), psi6, cache6)


def test_tower_classes_are_not_computed(L6, psi6, cache6):
    tower = TowerClass(2, L6)
    assert tower.tag() == "[P_2, M_2]"
    assert tower.to_json() == {"basis": "tower", "index": 2}
    with pytest.raises(NotComputableError):
        forget(tower, cache6)
    with pytest.raises(NotComputableError):
        psi0(tower, psi6, cache6)
    with pytest.raises(NotComputableError):
        coordinates(tower, psi6, cache6)


def test_e1_squared(L6, cache6, eps6):
    p1, p2 = cache6.element(1), cache6.element(2)
    expected = LBElement(L6, {2: 2, 1: -p1, 0: 2 * p1 * p1 - 2 * p2})
    assert eps6.epsilon(1, 1) == expected
    assert eps6.epsilon(1, 1).weight == 2


def test_products_are_homogeneous(eps6):
    for i in range(4):
        for j in range(i, 7 - i):
            assert eps6.epsilon(i, j).weight == i + j


def test_unit_and_depth(L6, eps6):
    assert eps6.epsilon(0, 4) == e(L6, 4)
    assert eps6.epsilon(5, 0) == e(L6, 5)
    with pytest.raises(DepthError, match="depth exhaustion"):
        eps6.epsilon(3, 4)


def test_additive_products_are_binomial():
    cache = mishchenko_elements(Z, additive_table(), 8)
    table = EpsilonTable(additive_table(), build_psi(cache, 8), cache)
    for i in range(9):
        for j in range(9 - i):
            assert table.epsilon(i, j) == LBElement(Z, {i + j: comb(i + j, i)})


def test_ring_axioms_on_random_triples(L6, eps6):
    rng = np.random.default_rng(2)

    def sample():
        return LBElement(L6, {i: random_element(L6, rng, max_weight=1, bound=2) for i in range(3)})

    one = e(L6, 0)
    for _ in range(5):
        a, b, c = sample(), sample(), sample()
        assert eps6.product(a, b) == eps6.product(b, a)
        assert eps6.product(one, a) == a
        assert eps6.product(eps6.product(a, b), c) == eps6.product(a, eps6.product(b, c))


def test_scalars_pull_out(L6, F6, psi6, cache6):
    alpha = L6.parse("a11^2 - 3*a12")
    x, y = e(L6, 1) + e(L6, 2), e(L6, 2)
    assert product(kunneth_scale(alpha, x), y, F6, psi6, cache6) == product(x, y, F6, psi6, cache6).scale(alpha)


@pytest.mark.parametrize("builder", [additive_morphism, multiplicative_morphism])
def test_products_commute_with_specialization(L6, F6, cache6, eps6, builder):
    m = builder(L6)
    pushed = cache6.specialize(m)
    table = EpsilonTable(specialize(L6, F6, m), build_psi(pushed, 6), pushed)
    for i in range(1, 4):
        for j in range(i, 7 - i):
            assert eps6.epsilon(i, j).map(m, m.target) == table.epsilon(i, j)
