import numpy as np
import pytest

from fgl_cobord.core.errors import ShapeError
from fgl_cobord.core.line_bundle import LBElement, shift
from fgl_cobord.core.proj_rings import ProjRing
from fgl_cobord.core.verify import random_element
from fgl_cobord.core.wpbf import (
    WpbfDecomposition,
    decompose,
    decomposition_weights,
    injectivity_witness,
    iota,
    proj_map,
    wpbf_roundtrip,
)


def test_length_is_checked(L6):
    with pytest.raises(ShapeError, match="length mismatch"):
        WpbfDecomposition(2, (L6.one, L6.zero))
    d = WpbfDecomposition(1, (L6.one, L6.zero))
    with pytest.raises(ShapeError, match="length mismatch"):
        proj_map(d, ProjRing(L6, (2,)))


def test_proj_map_examples(L6, cache6):
    R = ProjRing(L6, (2,))
    t = R.generator()
    alpha = L6.parse("a11^2 + a12")
    p1 = cache6.element(1)
    assert proj_map(WpbfDecomposition(2, (alpha, 0, 0)), R) == R.one.scale(alpha)
    assert proj_map(WpbfDecomposition(2, (0, 1, 0)), R) == t
    assert proj_map(WpbfDecomposition(2, (1, p1, 0)), R) == R.one + t.scale(p1)


def test_iota_examples(L6):
    R = ProjRing(L6, (2,))
    t = R.generator()
    assert iota(t * t) == LBElement.basis(L6, 0)
    assert iota(R.one) == LBElement.basis(L6, 2)
    assert iota(t + t * t) == LBElement.basis(L6, 1) + LBElement.basis(L6, 0)


def test_decompose_examples(L6, psi6, cache6):
    R = ProjRing(L6, (2,))
    d = decompose(R.generator(), psi6, cache6)
    assert d.alphas == (0, 1, 0)
    assert d.to_json(L6) == {"n": 2, "alphas": [{}, {"0": [1]}, {}]}


def test_round_trips_for_every_dimension(L6, psi6, cache6):
    rng = np.random.default_rng(4)
    for n in range(7):
        R = ProjRing(L6, (n,))
        for k in range(100):
            d = WpbfDecomposition(n, tuple(random_element(L6, rng) for _ in range(n + 1)))
            assert decompose(proj_map(d, R), psi6, cache6) == d
            if k % 10 == 0:
                results = wpbf_roundtrip(R, d, psi6, cache6)
                assert [r.name for r in results] == ["decompose-proj", "proj-decompose", "shift-vanishing"]
                assert all(results)


def test_shift_vanishing(L6):
    R = ProjRing(L6, (3,))
    image = iota(R.one + R.generator())
    for _ in range(3):
        image = shift(image)
    assert image
    assert not shift(image)


def test_decomposition_weights(L6):
    d = WpbfDecomposition(2, (L6.parse("a11"), L6.zero, L6.one))
    assert decomposition_weights(d, L6) == [3, None, 0]


def test_injectivity_witness(L6, psi6, cache6):
    R = ProjRing(L6, (3,))
    t = R.generator()
    samples = [R.zero, R.one, t.scale(L6.parse("a12")) + t**3, R.one.scale(cache6.element(3))]
    assert injectivity_witness(R, samples, psi6, cache6)
    with pytest.raises(ShapeError):
        injectivity_witness(R, [ProjRing(L6, (2,)).one], psi6, cache6)


def test_json_reload(L6):
    d = WpbfDecomposition(1, (L6.parse("a11"), L6.one))
    assert WpbfDecomposition.from_json(L6, d.to_json(L6)) == d
    with pytest.raises(ShapeError):
        WpbfDecomposition.from_json(L6, {"alphas": []})
