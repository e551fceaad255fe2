"""
The free module B^{*,1}(pt) on e_i = [P^i -> pt, O(1)].

shift is the operator d_{c1} (e_i -> e_(i-1)); forget sends e_i to p_i;
psi0 = sum_k gamma_k * forget * shift^k projects onto the e_0 coordinate,
where gamma = (sum p_i s^i)^(-1). Products e_i * e_j are computed by the
recursion d(e_i * e_j) = sum f_ab e_(i-a) * e_(j-b) over the coefficients
f_ab of F, with the e_0 coordinate fixed by forget(e_i * e_j) = p_i p_j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Mapping, Sequence

from fgl_cobord.core.errors import DepthError, FglCobordError, NotComputableError, ShapeError
from fgl_cobord.core.fgl_calculus import FGLTable
from fgl_cobord.core.mishchenko import MishchenkoCache
from fgl_cobord.core.rings import CoefficientRing, is_scalar, join_terms, scaled_term
from fgl_cobord.core.series import check_same_ring
from fgl_cobord.utils.logging import logger


class LBElement:
    """Finite combination sum_i c_i e_i with coefficients in a coefficient ring."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: CoefficientRing, coords: Mapping[int, Any] | None = None):
        stored = {}
        for i, c in (coords or {}).items():
            if i < 0:
                raise ShapeError(f"shape: negative basis index {i}")
            c = ring.coerce(c)
            if c:
                stored[i] = c
        self.ring = ring
        self.coords = dict(sorted(stored.items()))

    @classmethod
    def basis(cls, ring: CoefficientRing, i: int) -> "LBElement":
        return cls(ring, {i: ring.one})

    @classmethod
    def from_coordinates(cls, ring: CoefficientRing, betas: Sequence[Any]) -> "LBElement":
        return cls(ring, dict(enumerate(betas)))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.coords)

    @property
    def top(self) -> int:
        """Largest index in the support, -1 for zero."""
        return max(self.coords, default=-1)

    def coefficient(self, i: int):
        return self.coords.get(i, self.ring.zero)

    def items(self) -> Iterator[tuple[int, Any]]:
        return iter(self.coords.items())

    @property
    def weight(self) -> int | None:
        weights = set()
        for i, c in self.coords.items():
            w = self.ring.weight(c)
            if w is None:
                return None
            weights.add(w + i)
        return weights.pop() if len(weights) == 1 else None

    def _other(self, other) -> "LBElement":
        if not isinstance(other, LBElement):
            raise TypeError(f"cannot combine LBElement with {type(other).__name__}")
        check_same_ring(self.ring, other.ring)
        return other

    def __add__(self, other) -> "LBElement":
        other = self._other(other)
        coords = dict(self.coords)
        for i, c in other.coords.items():
            coords[i] = coords[i] + c if i in coords else c
        return LBElement(self.ring, coords)

    def __neg__(self) -> "LBElement":
        return LBElement(self.ring, {i: -c for i, c in self.coords.items()})

    def __sub__(self, other) -> "LBElement":
        return self + (-self._other(other))

    def scale(self, alpha) -> "LBElement":
        alpha = alpha if is_scalar(alpha) else self.ring.coerce(alpha)
        return LBElement(self.ring, {i: c * alpha for i, c in self.coords.items()})

    def __mul__(self, alpha) -> "LBElement":
        if isinstance(alpha, LBElement):
            return NotImplemented
        return self.scale(alpha)

    __rmul__ = __mul__

    def map(self, fn: Callable[[Any], Any], target: CoefficientRing) -> "LBElement":
        """Apply a coefficient map, e.g. a specialization morphism."""
        return LBElement(target, {i: fn(c) for i, c in self.coords.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LBElement):
            return NotImplemented
        return self.ring == other.ring and self.coords == other.coords

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.coords)

    def format(self) -> str:
        terms = [scaled_term(self.ring.format(c), f"e_{i}") for i, c in reversed(self.coords.items())]
        return join_terms(terms)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LBElement({self.format()!r})"

    def to_json(self) -> dict:
        return {
            "basis": "e",
            "terms": [{"i": i, "coeff": self.ring.element_to_json(c)} for i, c in self.coords.items()],
        }

    @classmethod
    def from_json(cls, ring: CoefficientRing, data: Mapping) -> "LBElement":
        try:
            if data.get("basis", "e") != "e":
                raise ShapeError(f"shape: unknown basis {data['basis']!r}")
            return cls(ring, {int(t["i"]): ring.element_from_json(t["coeff"]) for t in data["terms"]})
        except (KeyError, TypeError, AttributeError) as exc:
            raise ShapeError(f"shape: malformed module element ({exc})") from exc


@dataclass(frozen=True)
class TowerClass:
    """
    The Bott tower class [P_i, M_i]. It is a legitimate element of the
    module, but its coordinates in the e-basis are not computed here.
    """

    index: int
    ring: CoefficientRing

    def tag(self) -> str:
        return f"[P_{self.index}, M_{self.index}]"

    def to_json(self) -> dict:
        return {"basis": "tower", "index": self.index}


def shift(e: LBElement) -> LBElement:
    return LBElement(e.ring, {i - 1: c for i, c in e.coords.items() if i})


def forget(e: LBElement, cache: MishchenkoCache):
    if isinstance(e, TowerClass):
        raise NotComputableError(f"forget of {e.tag()} is not computed")
    check_same_ring(e.ring, cache.ring)
    total = e.ring.zero
    for i, c in e.coords.items():
        total = total + c * cache.element(i)
    return total


@dataclass(frozen=True)
class PsiSeries:
    ring: CoefficientRing
    gamma: tuple

    @property
    def depth(self) -> int:
        return len(self.gamma) - 1

    def require(self, k: int):
        if k > self.depth:
            raise DepthError(f"depth exhaustion: psi series holds gamma_0..gamma_{self.depth}, need {k}")

    def to_json(self) -> dict:
        return {"depth": self.depth, "gamma": [self.ring.element_to_json(g) for g in self.gamma]}


def build_psi(cache: MishchenkoCache, depth: int) -> PsiSeries:
    """gamma = (sum_i p_i s^i)^(-1) through s^depth."""
    cache.require(depth)
    ring = cache.ring
    p = [cache.element(i) for i in range(depth + 1)]
    gamma = [ring.one]
    for k in range(1, depth + 1):
        acc = ring.zero
        for i in range(1, k + 1):
            acc = acc + p[i] * gamma[k - i]
        gamma.append(-acc)
    return PsiSeries(ring, tuple(gamma))


def psi0(e: LBElement, psi: PsiSeries, cache: MishchenkoCache):
    """The e_0 coordinate of e."""
    if isinstance(e, TowerClass):
        raise NotComputableError(f"coordinates of {e.tag()} are not computed")
    psi.require(e.top)
    total = e.ring.zero
    current = e
    for k in range(e.top + 1):
        value = forget(current, cache)
        if value:
            total = total + psi.gamma[k] * value
        current = shift(current)
    return total


def coordinates(e: LBElement, psi: PsiSeries, cache: MishchenkoCache) -> list:
    """(beta_0, ..., beta_M) with e = sum beta_i e_i, read off as psi0(shift^i e)."""
    if isinstance(e, TowerClass):
        raise NotComputableError(f"coordinates of {e.tag()} are not computed")
    out = []
    current = e
    for _ in range(e.top + 1):
        out.append(psi0(current, psi, cache))
        current = shift(current)
    return out


def kunneth_scale(alpha, e: LBElement) -> LBElement:
    return e.scale(alpha)


@dataclass
class EpsilonTable:
    """Memoized classes epsilon_ij = e_i * e_j for one FGL."""

    F: FGLTable
    psi: PsiSeries
    cache: MishchenkoCache
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        check_same_ring(self.F.ring, self.cache.ring)
        check_same_ring(self.psi.ring, self.cache.ring)

    @property
    def ring(self) -> CoefficientRing:
        return self.cache.ring

    def _f(self, a: int, b: int):
        if a and b:
            return self.F.coeff(a, b)
        return self.ring.one if a + b == 1 else self.ring.zero

    def epsilon(self, i: int, j: int) -> LBElement:
        if i > j:
            i, j = j, i
        if i == 0:
            return LBElement.basis(self.ring, j)
        key = (i, j)
        if key in self._memo:
            return self._memo[key]
        if i + j > self.psi.depth or i + j > self.cache.depth:
            raise DepthError(
                f"depth exhaustion: e_{i} * e_{j} needs depth {i + j}, "
                f"have psi {self.psi.depth} and cache {self.cache.depth}"
            )
        derivative = LBElement(self.ring)
        for a in range(i + 1):
            for b in range(j + 1):
                if a == b == 0:
                    continue
                f = self._f(a, b)
                if f:
                    derivative = derivative + self.epsilon(i - a, j - b).scale(f)
        # e_0 coordinate: psi0(eps) with forget(eps) = p_i p_j and shift(eps) = derivative
        head = self.cache.element(i) * self.cache.element(j)
        current = derivative
        for k in range(1, i + j + 1):
            value = forget(current, self.cache)
            if value:
                head = head + self.psi.gamma[k] * value
            current = shift(current)
        coords = {m + 1: c for m, c in derivative.coords.items()}
        coords[0] = head
        result = LBElement(self.ring, coords)
        weight = result.weight
        if weight is not None and weight != i + j:
            raise FglCobordError(f"e_{i} * e_{j} is not homogeneous of weight {i + j}: got {weight}")
        logger.debug(f"e_{i} * e_{j} = {result}")
        return self._memo.setdefault(key, result)

    def product(self, a: LBElement, b: LBElement) -> LBElement:
        check_same_ring(a.ring, self.ring)
        check_same_ring(b.ring, self.ring)
        total = LBElement(self.ring)
        for i, x in a.items():
            for j, y in b.items():
                total = total + self.epsilon(i, j).scale(x * y)
        return total


def product(a: LBElement, b: LBElement, F: FGLTable, psi: PsiSeries, cache: MishchenkoCache) -> LBElement:
    return EpsilonTable(F, psi, cache).product(a, b)
