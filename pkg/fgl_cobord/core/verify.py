"""
Named identity checks run by ``fgl-cobord verify``.

Each runner takes a VerifyContext and returns CheckResults; randomized
checks draw from numpy's default_rng seeded by the context, so a run is
reproducible from its flags.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from fgl_cobord.core.fgl_calculus import (
    CheckResult,
    FGLTable,
    verify_dpc_split,
    verify_fgl_axioms,
    verify_inverse_identity,
)
from fgl_cobord.core.lazard import GradedElement, LazardPresentation, universal_table
from fgl_cobord.core.line_bundle import LBElement, PsiSeries, build_psi, coordinates, psi0, shift
from fgl_cobord.core.mishchenko import MishchenkoCache, mishchenko_elements
from fgl_cobord.core.proj_rings import ProjRing, chern_of_line_bundle, extract_fgl_coeffs
from fgl_cobord.core.specialize import additive_table, multiplicative_table
from fgl_cobord.core.wpbf import WpbfDecomposition, wpbf_roundtrip
from fgl_cobord.utils.logging import logger


def random_element(
    L: LazardPresentation, rng: np.random.Generator, max_weight: int | None = None, bound: int = 3
) -> GradedElement:
    """Integral element with coordinates drawn uniformly from [-bound, bound]."""
    top = L.max_weight if max_weight is None else min(max_weight, L.max_weight)
    coords = {}
    for w in range(top + 1):
        c = L.component(w)
        coords[w] = tuple(int(v) for v in rng.integers(-bound, bound + 1, size=c.size))
    return GradedElement(L, coords)


@dataclass
class VerifyContext:
    L: LazardPresentation
    mode: str = "integral"
    cap: int | None = None
    caps: tuple[int, int] | None = None
    depth: int | None = None
    n: int | None = None
    samples: int = 100
    seed: int = 0

    @cached_property
    def F(self) -> FGLTable:
        return universal_table(self.L)

    @cached_property
    def cache(self) -> MishchenkoCache:
        return mishchenko_elements(self.L, self.F, self.L.max_weight, self.mode)

    @cached_property
    def psi(self) -> PsiSeries:
        return build_psi(self.cache, self.L.max_weight)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def _tagged(result: CheckResult, tag: str) -> CheckResult:
    return CheckResult(f"{result.name}[{tag}]", result.passed, result.residual, result.detail)


def check_inverse_identity(ctx: VerifyContext) -> list[CheckResult]:
    cap = ctx.cap or ctx.L.max_weight
    return [
        _tagged(verify_inverse_identity(ctx.F, cap), "universal"),
        _tagged(verify_inverse_identity(additive_table(), cap), "additive"),
        _tagged(verify_inverse_identity(multiplicative_table(), cap), "multiplicative"),
    ]


def check_dpc_split(ctx: VerifyContext) -> list[CheckResult]:
    return [verify_dpc_split(ctx.F, ctx.cap or ctx.L.max_weight)]


def check_fgl_axioms(ctx: VerifyContext) -> list[CheckResult]:
    return verify_fgl_axioms(ctx.F, ctx.cap or ctx.L.max_weight + 1)


def check_fgl_roundtrip(ctx: VerifyContext) -> list[CheckResult]:
    """Extract a_ij from c1(O(1,1)) and compare with the table; two cap choices must agree."""
    n, m = ctx.caps or (ctx.L.max_weight, ctx.L.max_weight)
    small_caps = (min(n, 3), min(m, 5))
    results = []
    extracted = []
    for caps in ((n, m), small_caps):
        R = ProjRing(ctx.F.ring, caps)
        table = extract_fgl_coeffs(R, chern_of_line_bundle(R, ctx.F, (1, 1)))
        extracted.append(table)
        bad = [
            (i, j) for i in range(1, caps[0] + 1) for j in range(1, caps[1] + 1)
            if table.coeff(i, j) != ctx.F.coeff(i, j)
        ]
        results.append(
            CheckResult(f"fgl-roundtrip[{caps[0]},{caps[1]}]", not bad, None, f"a_ij differ at {bad}" if bad else "")
        )
    big, small = extracted
    overlap = [
        (i, j) for i in range(1, small_caps[0] + 1) for j in range(1, small_caps[1] + 1)
        if big.coeff(i, j) != small.coeff(i, j)
    ]
    results.append(
        CheckResult("fgl-roundtrip[overlap]", not overlap, None, f"extractions differ at {overlap}" if overlap else "")
    )
    return results


def check_psi_biorthogonality(ctx: VerifyContext) -> list[CheckResult]:
    """psi0(shift^i e_j) = delta_ij for i, j <= depth, plus the coordinate round trip."""
    depth = min(ctx.depth or ctx.L.max_weight, ctx.psi.depth)
    ring = ctx.L
    bad = []
    for j in range(depth + 1):
        current = LBElement.basis(ring, j)
        for i in range(depth + 1):
            expected = ring.one if i == j else ring.zero
            if psi0(current, ctx.psi, ctx.cache) != expected:
                bad.append((i, j))
            current = shift(current)
    results = [CheckResult("psi-biorthogonality", not bad, None, f"fails at (i, j) = {bad}" if bad else "")]

    rng = ctx.rng()
    failures = 0
    for _ in range(ctx.samples):
        betas = [random_element(ctx.L, rng) for _ in range(depth + 1)]
        e = LBElement.from_coordinates(ring, betas)
        recovered = coordinates(e, ctx.psi, ctx.cache)
        recovered += [ring.zero] * (depth + 1 - len(recovered))
        if recovered != betas:
            failures += 1
    results.append(
        CheckResult("coordinates-roundtrip", not failures, None, f"{failures}/{ctx.samples} samples" if failures else "")
    )
    return results


def check_wpbf_roundtrip(ctx: VerifyContext) -> list[CheckResult]:
    rng = ctx.rng()
    dimensions = [ctx.n] if ctx.n is not None else list(range(ctx.psi.depth + 1))
    failures: dict[str, int] = {}
    for n in dimensions:
        R = ProjRing(ctx.L, (n,))
        for _ in range(ctx.samples):
            d = WpbfDecomposition(n, tuple(random_element(ctx.L, rng) for _ in range(n + 1)))
            for result in wpbf_roundtrip(R, d, ctx.psi, ctx.cache):
                failures.setdefault(result.name, 0)
                if not result:
                    failures[result.name] += 1
    return [
        CheckResult(f"wpbf-{name}", not count, None, f"{count} failing samples" if count else "")
        for name, count in failures.items()
    ]


CHECKS: dict[str, Callable[[VerifyContext], list[CheckResult]]] = {
    "inverse-identity": check_inverse_identity,
    "dpc-split": check_dpc_split,
    "fgl-axioms": check_fgl_axioms,
    "fgl-roundtrip": check_fgl_roundtrip,
    "psi-biorthogonality": check_psi_biorthogonality,
    "wpbf-roundtrip": check_wpbf_roundtrip,
}


def run_check(name: str, ctx: VerifyContext) -> list[CheckResult]:
    if name not in CHECKS:
        raise KeyError(name)
    logger.info(f"running {name} on {ctx.L}")
    results = CHECKS[name](ctx)
    failed = [r.name for r in results if not r]
    if failed:
        logger.warning(f"{name}: {len(failed)} failing checks: {failed}")
    return results
