from fractions import Fraction

import numpy as np
import pytest

from fgl_cobord.core.errors import TruncationError
from fgl_cobord.core.lazard import (
    SCHEMA,
    LazardPresentation,
    generator_name,
    lazard_generators,
    parse_generator_name,
)
from fgl_cobord.core.oracle import rational_component_rank
from fgl_cobord.core.verify import random_element


def test_generator_names():
    assert generator_name(2, 1) == "a12"
    assert generator_name(12, 3) == "a3_12"
    assert parse_generator_name("a21") == (1, 2)
    assert parse_generator_name("a3_12") == (3, 12)
    assert parse_generator_name("b1") is None
    assert lazard_generators(3) == ((1, 1), (1, 2), (1, 3), (2, 2))


def test_ranks_through_weight_six(L6):
    assert L6.ranks() == [1, 1, 2, 3, 5, 7, 11]
    assert all(c.torsion == () for c in L6.components.values())


def test_small_truncations(L3):
    assert LazardPresentation.build(1).ranks() == [1, 1]
    assert L3.ranks() == [1, 1, 2, 3]
    weight3 = L3.component(3)
    assert len(weight3.monomials) == 4
    assert weight3.relation_count > 0


@pytest.mark.parametrize("w", range(4))
def test_ranks_agree_with_rational_logarithm_model(L3, w):
    assert rational_component_rank(L3, w) == L3.ranks()[w]


@pytest.mark.parametrize("w", range(7))
def test_certified_ranks_agree_with_rational_model_through_weight_six(L6, w):
    assert rational_component_rank(L6, w) == L6.ranks()[w]


def test_empty_truncation():
    with pytest.raises(TruncationError, match="empty truncation"):
        LazardPresentation.build(0)


def test_generators_are_symmetric_and_truncated(L3):
    assert L3.parse("a12 - a21") == L3.zero
    assert L3.generator(1, 1).weight == 1
    assert L3.generator(2, 3) == L3.zero
    with pytest.raises(TruncationError, match="beyond truncation"):
        L3.parse("a23")
    with pytest.raises(TruncationError, match="beyond truncation"):
        L3.component(4)


def test_products_above_the_truncation_vanish(L3):
    a11 = L3.generator(1, 1)
    assert a11**3 != L3.zero
    assert a11**4 == L3.zero
    assert L3.parse("a11*a12") == a11 * L3.generator(1, 2)


def test_lift_reduces_back(L6):
    rng = np.random.default_rng(3)
    for _ in range(25):
        x = random_element(L6, rng)
        assert L6.reduce(x.lift()) == x
        assert L6.parse(x.format()) == x


def test_multiplication_is_associative_and_commutative(L6):
    rng = np.random.default_rng(11)
    for _ in range(10):
        x, y, z = (random_element(L6, rng, bound=2) for _ in range(3))
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z


def test_certify_integral_and_rational_elements(L6):
    x = L6.parse("3*a11*a12 - a22 + 2")
    certificate = L6.certify(x)
    assert certificate is not None
    assert L6.reduce(certificate) == x
    assert L6.certify(L6.generator(1, 1).scale(Fraction(1, 2))) is None


def test_state_reload_keeps_normal_forms(L3):
    reloaded = LazardPresentation.from_state(L3.to_state())
    assert reloaded.ranks() == L3.ranks()
    x = L3.parse("a11^3 + a13 - a22")
    assert reloaded.parse("a11^3 + a13 - a22").coords == x.coords


def test_json_document(L3):
    doc = L3.to_json()
    assert doc["schema"] == SCHEMA
    assert doc["generators"] == ["a11", "a12", "a13", "a22"]
    assert doc["ranks"] == [1, 1, 2, 3]
    assert [c["rank"] for c in doc["components"]] == [1, 1, 2, 3]
    assert len(doc["components"][3]["basis"]) == 3
    assert {(entry["i"], entry["j"]) for entry in doc["fgl"]} == {(1, 1), (1, 2), (1, 3), (2, 2)}


def test_normal_forms_ignore_the_relation_ideal(L6):
    rng = np.random.default_rng(17)
    relations = [r for r in L6.relations if r and r.weight is not None]
    assert relations
    for _ in range(200):
        x = random_element(L6, rng).lift()
        r = relations[int(rng.integers(len(relations)))]
        multiplier = random_element(L6, rng, max_weight=L6.max_weight - r.weight, bound=2).lift()
        shifted = x + (r * multiplier).scale(int(rng.integers(-5, 6)))
        assert L6.reduce(shifted) == L6.reduce(x)
