"""
Classes p_n = [P^n -> pt] from the rational logarithm of an FGL.

log_F(x) = sum m_n x^(n+1) with log_F'(x) = 1 / (dF/dy)(x, 0), and
p_n = (n+1) m_n. The m_n are computed over Q; each p_n is then certified
integral by exhibiting an integral polynomial representative.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from fgl_cobord.core.errors import DepthError, IntegralityError
from fgl_cobord.core.fgl_calculus import FGLTable, invariant_differential
from fgl_cobord.core.lazard import LazardPresentation
from fgl_cobord.core.rings import CoefficientRing
from fgl_cobord.utils.logging import logger

MODES = ("integral", "rational")


@dataclass(frozen=True)
class MishchenkoCache:
    ring: CoefficientRing
    p: tuple
    m: tuple
    certificates: Mapping[int, Any] = field(default_factory=dict)
    mode: str = "rational"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def depth(self) -> int:
        return len(self.p) - 1

    def require(self, n: int):
        if n > self.depth:
            raise DepthError(f"insufficient Mishchenko depth: need p_{n}, cache holds up to p_{self.depth}")

    def element(self, n: int):
        """p_n; in integral mode only certified classes are handed out."""
        self.require(n)
        if self.mode == "integral" and n not in self.certificates:
            raise IntegralityError(f"p_{n} has no integrality certificate")
        return self.p[n]

    def is_certified(self, n: int) -> bool:
        return n in self.certificates

    def with_mode(self, mode: str) -> "MishchenkoCache":
        return MishchenkoCache(self.ring, self.p, self.m, self.certificates, mode)

    def specialize(self, morphism) -> "MishchenkoCache":
        """Push every p_n and m_n through a ring morphism out of L."""
        target = morphism.target
        p = tuple(morphism.apply(x) for x in self.p)
        m = tuple(morphism.apply(x) for x in self.m)
        certificates = {n: x for n, x in enumerate(p) if target.is_integral(x)}
        return MishchenkoCache(target, p, m, certificates, self.mode)

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "p": [self.ring.element_to_json(x) for x in self.p],
            "certified": sorted(self.certificates),
        }


def mishchenko_elements(
    L: CoefficientRing, F: FGLTable, n_max: int, mode: str = "rational"
) -> MishchenkoCache:
    """p_0..p_{n_max} for the table F over L, with integrality certificates."""
    q = invariant_differential(F, n_max)
    m = tuple(q[n] * Fraction(1, n + 1) for n in range(n_max + 1))
    p = tuple(m[n] * (n + 1) for n in range(n_max + 1))
    certificates = {}
    for n, x in enumerate(p):
        if isinstance(L, LazardPresentation):
            witness = L.certify(x)
            if witness is not None:
                certificates[n] = witness
        elif L.is_integral(x):
            certificates[n] = x
    missing = [n for n in range(n_max + 1) if n not in certificates]
    if missing:
        logger.warning(f"p_n not certified integral for n in {missing}")
    else:
        logger.debug(f"p_0..p_{n_max} certified integral")
    return MishchenkoCache(L, p, m, certificates, mode)
