"""
Ring morphisms out of L_{<=N} and the FGLs they carry.

A morphism is given by the images of the generators a_ij. It is accepted
only when every stored relation maps to zero in the target, which must
itself vanish above weight N.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from fgl_cobord.core.errors import FglCobordError, MorphismError, ShapeError
from fgl_cobord.core.fgl_calculus import FGLTable, series_reversion
from fgl_cobord.core.lazard import GradedElement, LazardPresentation, parse_generator_name
from fgl_cobord.core.rings import CoefficientRing, IntegerRing, PolynomialRing, is_scalar
from fgl_cobord.core.series import TruncatedSeries
from fgl_cobord.utils.logging import logger


@dataclass(frozen=True)
class RingMorphism:
    source: LazardPresentation
    target: CoefficientRing
    images: tuple
    name: str = "custom"

    def __post_init__(self):
        if len(self.images) != len(self.source.generators):
            raise ShapeError(
                f"shape: {len(self.images)} images for {len(self.source.generators)} generators"
            )
        object.__setattr__(self, "images", tuple(self.target.coerce(x) for x in self.images))

    def image(self, i: int, j: int):
        index = self.source.generators.index((min(i, j), max(i, j)))
        return self.images[index]

    def check(self) -> "RingMorphism":
        for relation in self.source.relations:
            value = relation.evaluate(self.images, self.target)
            if value:
                raise MorphismError(
                    f"not a ring morphism: {self.name} sends {relation.format()} to {self.target.format(value)}"
                )
        return self

    def apply(self, x):
        if is_scalar(x):
            return self.target.coerce(x)
        if not isinstance(x, GradedElement):
            raise FglCobordError(f"{self.name} morphism cannot map {x!r}")
        return x.lift().evaluate(self.images, self.target)

    __call__ = apply


def additive_morphism(L: LazardPresentation) -> RingMorphism:
    """All a_ij to 0; the target is Z in weight 0."""
    return RingMorphism(L, IntegerRing(), (0,) * len(L.generators), "additive")


def multiplicative_morphism(L: LazardPresentation, name: str = "beta") -> RingMorphism:
    """a_11 to -beta and everything else to 0, over Z[beta] truncated at N."""
    target = PolynomialRing((name,), (1,), max_weight=L.max_weight)
    beta = target.gen(0)
    images = tuple(-beta if g == (1, 1) else target.zero for g in L.generators)
    return RingMorphism(L, target, images, "multiplicative")


def logarithm_morphism(
    L: LazardPresentation, log_coefficients: Sequence[Any], target: CoefficientRing
) -> RingMorphism:
    """
    The morphism classifying F(x, y) = exp(log x + log y) for
    log(x) = x + sum m_k x^(k+1), with m_k = log_coefficients[k-1].
    """
    degree = L.max_weight + 1
    if len(log_coefficients) < L.max_weight:
        raise ShapeError(f"shape: need {L.max_weight} logarithm coefficients, got {len(log_coefficients)}")
    terms = {(1,): target.one}
    terms.update({(k + 1,): m for k, m in enumerate(log_coefficients[: L.max_weight], start=1)})
    log = TruncatedSeries(target, ("s",), terms, caps=(degree,))
    exp = series_reversion(log)
    names = ("x", "y")
    x, y = (TruncatedSeries.variable(target, v, names, total_cap=degree) for v in names)
    F = exp.compose([log.compose([x]) + log.compose([y])])
    images = tuple(F.coefficient((i, j)) for i, j in L.generators)
    return RingMorphism(L, target, images, "logarithm")


def morphism_from_json(L: LazardPresentation, data: Mapping) -> RingMorphism:
    """
    {"target": {"names": [...], "weights": [...]}, "images": {"a11": "-b", ...}};
    generators without an image go to zero.
    """
    try:
        spec = data["target"]
        target = PolynomialRing(tuple(spec["names"]), spec.get("weights"), max_weight=L.max_weight)
        raw = dict(data.get("images", {}))
    except (KeyError, TypeError) as exc:
        raise ShapeError(f"shape: malformed morphism document ({exc})") from exc
    images = {}
    for key, value in raw.items():
        pair = parse_generator_name(key)
        if pair is None or pair not in L.generators:
            raise ShapeError(f"shape: {key!r} is not a generator of {L}")
        images[pair] = target.element_from_json(value)
    return RingMorphism(
        L, target, tuple(images.get(g, target.zero) for g in L.generators), data.get("name", "custom")
    )


def specialize(L: LazardPresentation, F: FGLTable, m: RingMorphism) -> FGLTable:
    """The image of F under a checked morphism, truncated at N like its source."""
    if m.source != L:
        raise MorphismError(f"not a ring morphism: source {m.source} is not {L}")
    m.check()
    logger.debug(f"specializing {L} along the {m.name} morphism into {m.target}")
    coefficients = {g: m.apply(F.coeff(*g)) for g in L.generators}
    return FGLTable(m.target, coefficients, max_weight=L.max_weight)


def additive_table() -> FGLTable:
    """F(x, y) = x + y over Z, to every degree."""
    return FGLTable(IntegerRing(), {})


def multiplicative_table(ring: PolynomialRing | None = None) -> FGLTable:
    """F(x, y) = x + y - beta*x*y, to every degree."""
    ring = ring or PolynomialRing(("beta",))
    return FGLTable(ring, {(1, 1): -ring.gen(0)})
