import numpy as np
import pytest

from fgl_cobord.core.errors import NotNilpotentError, RingMismatchError, ShapeError, TruncationError
from fgl_cobord.core.rings import IntegerRing, PolynomialRing
from fgl_cobord.core.series import TruncatedSeries

Z = IntegerRing()


def univariate(coeffs, cap, ring=Z, name="t"):
    return TruncatedSeries(ring, (name,), {(k,): c for k, c in enumerate(coeffs)}, caps=(cap,))


def test_terms_beyond_caps_are_never_stored():
    s = univariate([1, 2, 3, 4, 5], cap=2)
    assert s.terms == {(0,): 1, (1,): 2, (2,): 3}
    assert (univariate([0, 1], 2) ** 3).is_zero()


def test_empty_truncation_errors():
    with pytest.raises(TruncationError, match="empty truncation"):
        TruncatedSeries(Z, ("t",), {}, caps=(-1,))
    with pytest.raises(TruncationError, match="empty truncation"):
        TruncatedSeries(Z, ("x", "y"), {}, caps=(2, None))
    with pytest.raises(ShapeError):
        TruncatedSeries(Z, ("x", "y"), {(1,): 1}, caps=(2, 2))


def test_binary_ops_take_pointwise_min_caps():
    a = univariate([0, 1, 1, 1], cap=3)
    b = univariate([0, 1], cap=1)
    assert (a + b).caps == (1,)
    assert (a + b).terms == {(1,): 2}


def test_product_with_total_cap():
    names = ("x", "y")
    x = TruncatedSeries.variable(Z, "x", names, total_cap=2)
    y = TruncatedSeries.variable(Z, "y", names, total_cap=2)
    assert (x + y) ** 2 == x * x + (x * y).scale(2) + y * y
    assert ((x + y) ** 3).is_zero()


def test_compose_geometric_series():
    t = univariate([0, 1], cap=4)
    geometric = univariate([1, 1, 1, 1, 1], cap=4, name="s")
    composed = geometric.compose([t.scale(2)])
    assert [composed.coefficient(k) for k in range(5)] == [1, 2, 4, 8, 16]


def test_compose_refuses_constant_terms():
    s = univariate([0, 1, 1], cap=2, name="s")
    with pytest.raises(NotNilpotentError, match="not nilpotent-like"):
        s.compose([univariate([1, 1], cap=2)])


def test_ring_mismatch_and_mixed_truncation():
    ring = PolynomialRing(("b",))
    with pytest.raises(RingMismatchError):
        univariate([0, 1], 2) + univariate([0, 1], 2, ring=ring)
    with pytest.raises(TruncationError, match="mixed truncation"):
        univariate([0, 1], 2, ring=ring) + univariate([0, 1], 2, ring=ring.truncated(3))


def test_c1_like_homogeneity():
    ring = PolynomialRing(("b",))
    b = ring.gen(0)
    good = univariate([0, 1, b, b * b], cap=3, ring=ring)
    bad = univariate([0, 1, 1], cap=3, ring=ring)
    assert good.is_c1_like()
    assert not bad.is_c1_like()


def test_json_document_shape():
    s = univariate([0, 3, -1], cap=2)
    doc = s.to_json()
    assert doc == {"vars": ["t"], "caps": [2], "terms": [{"exp": [1], "coeff": 3}, {"exp": [2], "coeff": -1}]}
    assert TruncatedSeries.from_json(Z, doc) == s
    with pytest.raises(ShapeError):
        TruncatedSeries.from_json(Z, {"vars": ["t"]})


def test_ring_axioms_on_random_triples():
    rng = np.random.default_rng(7)
    names = ("x", "y")

    def sample():
        terms = {(i, j): int(rng.integers(-3, 4)) for i in range(4) for j in range(4) if i + j <= 3}
        return TruncatedSeries(Z, names, terms, total_cap=3)

    for _ in range(100):
        a, b, c = sample(), sample(), sample()
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a + b) + c == a + (b + c)
