"""
Weak projective bundle formula over a point.

B*(P^n) = R[t]/(t^(n+1)) decomposes as n+1 copies of R via
(alpha_0, ..., alpha_n) -> sum t^a alpha_a. The embedding iota into the
line-bundle module sends t^a (the class of P^(n-a) carrying O(1)) to
e_(n-a); the decomposition inverts it with the psi0 coordinate functionals.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from fgl_cobord.core.errors import ShapeError
from fgl_cobord.core.fgl_calculus import CheckResult
from fgl_cobord.core.line_bundle import LBElement, PsiSeries, coordinates, kunneth_scale, shift
from fgl_cobord.core.mishchenko import MishchenkoCache
from fgl_cobord.core.proj_rings import ProjRing
from fgl_cobord.core.rings import CoefficientRing
from fgl_cobord.core.series import TruncatedSeries, check_same_ring


@dataclass(frozen=True)
class WpbfDecomposition:
    n: int
    alphas: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        if self.n < 0 or len(self.alphas) != self.n + 1:
            raise ShapeError(f"length mismatch: {len(self.alphas)} components for n = {self.n}")

    def to_json(self, ring: CoefficientRing) -> dict:
        return {"n": self.n, "alphas": [ring.element_to_json(a) for a in self.alphas]}

    @classmethod
    def from_json(cls, ring: CoefficientRing, data) -> "WpbfDecomposition":
        try:
            return cls(int(data["n"]), tuple(ring.element_from_json(a) for a in data["alphas"]))
        except (KeyError, TypeError) as exc:
            raise ShapeError(f"shape: malformed decomposition ({exc})") from exc


def _single_cap(e: TruncatedSeries) -> int:
    if len(e.variables) != 1 or e.caps[0] is None:
        raise ShapeError(f"shape: expected a series on one projective factor, got {e.variables}")
    return e.caps[0]


def proj_map(d: WpbfDecomposition, R: ProjRing) -> TruncatedSeries:
    """sum_a t^a alpha_a in B*(P^n)."""
    if R.factors != 1 or R.caps[0] != d.n:
        raise ShapeError(f"length mismatch: decomposition for n = {d.n} into {R}")
    return R.element({(a,): alpha for a, alpha in enumerate(d.alphas)})


def iota(e: TruncatedSeries) -> LBElement:
    """sum_a c_a t^a -> sum_a c_a e_(n-a)."""
    n = _single_cap(e)
    total = LBElement(e.ring)
    for (a,), c in e.items():
        total = total + kunneth_scale(c, LBElement.basis(e.ring, n - a))
    return total


def decompose(e: TruncatedSeries, psi: PsiSeries, cache: MishchenkoCache) -> WpbfDecomposition:
    """alpha_a = beta_(n-a), where beta are the e-coordinates of iota(e)."""
    n = _single_cap(e)
    check_same_ring(e.ring, cache.ring)
    betas = coordinates(iota(e), psi, cache)
    betas += [e.ring.zero] * (n + 1 - len(betas))
    return WpbfDecomposition(n, tuple(betas[n - a] for a in range(n + 1)))


def decomposition_weights(d: WpbfDecomposition, ring: CoefficientRing) -> list[int | None]:
    """Homological weight of each summand t^a alpha_a: weight(alpha_a) + n - a."""
    out = []
    for a, alpha in enumerate(d.alphas):
        w = ring.weight(alpha) if alpha else None
        out.append(None if w is None else w + d.n - a)
    return out


def injectivity_witness(
    R: ProjRing, elements: Sequence[TruncatedSeries], psi: PsiSeries, cache: MishchenkoCache
) -> CheckResult:
    """iota is injective on B*(P^n): nonzero inputs have nonzero coordinates and decompose back exactly."""
    for e in elements:
        R.require(e)
        d = decompose(e, psi, cache)
        if bool(e) != any(bool(a) for a in d.alphas):
            return CheckResult("wpbf-injectivity", False, e, "nonzero element with zero coordinates")
        residual = proj_map(d, R) - e
        if residual:
            return CheckResult("wpbf-injectivity", False, residual, "decomposition does not recompose")
    return CheckResult("wpbf-injectivity", True)


def wpbf_roundtrip(
    R: ProjRing, d: WpbfDecomposition, psi: PsiSeries, cache: MishchenkoCache
) -> list[CheckResult]:
    """decompose . proj_map = id, proj_map . decompose = id and shift^(n+1) . iota = 0 on one sample."""
    e = proj_map(d, R)
    back = decompose(e, psi, cache)
    mismatch = [a for a, (x, y) in enumerate(zip(back.alphas, d.alphas)) if x != y]
    image = iota(e)
    for _ in range(d.n + 1):
        image = shift(image)
    residual = proj_map(back, R) - e
    return [
        CheckResult("decompose-proj", not mismatch, None, f"components {mismatch} differ" if mismatch else ""),
        CheckResult("proj-decompose", residual.is_zero(), residual),
        CheckResult("shift-vanishing", not image, image.format() if image else None),
    ]


