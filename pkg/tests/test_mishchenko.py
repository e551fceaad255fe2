import logging
from fractions import Fraction

import pytest

from fgl_cobord.core.errors import DepthError, IntegralityError
from fgl_cobord.core.fgl_calculus import FGLTable
from fgl_cobord.core.mishchenko import MishchenkoCache, mishchenko_elements
from fgl_cobord.core.rings import IntegerRing
from fgl_cobord.core.specialize import additive_table, multiplicative_morphism, multiplicative_table


def test_low_classes(L6, cache6):
    a11 = L6.generator(1, 1)
    assert cache6.element(0) == 1
    assert cache6.element(1) == -a11
    assert cache6.m[1] == -a11 * Fraction(1, 2)
    assert cache6.element(2) == a11**2 - L6.generator(1, 2)


def test_universal_classes_are_certified(L6, cache6):
    assert cache6.depth == 6
    assert all(cache6.is_certified(n) for n in range(6))
    for n in range(6):
        assert L6.reduce(cache6.certificates[n]) == cache6.element(n)


def test_depth_exhaustion(cache6):
    with pytest.raises(DepthError, match="insufficient Mishchenko depth"):
        cache6.element(7)


def test_integral_mode_refuses_uncertified_classes():
    Z = IntegerRing()
    cache = MishchenkoCache(Z, (1, Fraction(1, 2)), (1, Fraction(1, 4)), {0: 1}, mode="integral")
    assert cache.element(0) == 1
    with pytest.raises(IntegralityError):
        cache.element(1)
    assert cache.with_mode("rational").element(1) == Fraction(1, 2)
    with pytest.raises(ValueError):
        cache.with_mode("real")


def test_rational_table_warns_but_computes(caplog):
    Z = IntegerRing()
    halves = FGLTable(Z, {(1, 1): Fraction(1, 2)})
    with caplog.at_level(logging.WARNING, logger="fgl_cobord"):
        cache = mishchenko_elements(Z, halves, 3)
    assert cache.element(1) == Fraction(-1, 2)
    assert not cache.is_certified(1)
    assert "not certified integral" in caplog.text


def test_additive_and_multiplicative_classes():
    additive = mishchenko_elements(IntegerRing(), additive_table(), 8)
    assert list(additive.p) == [1] + [0] * 8
    mult = multiplicative_table()
    beta = mult.ring.gen(0)
    cache = mishchenko_elements(mult.ring, mult, 8, mode="integral")
    assert [cache.element(n) for n in range(9)] == [beta**n for n in range(9)]


def test_specializing_the_universal_cache(L6, cache6):
    morphism = multiplicative_morphism(L6)
    beta = morphism.target.gen(0)
    pushed = cache6.specialize(morphism)
    assert [pushed.element(n) for n in range(7)] == [beta**n for n in range(7)]
    assert pushed.to_json()["certified"] == list(range(7))
