"""
Cobordism rings of products of projective spaces over a point,
R[t_1, ..., t_k] / (t_i^(n_i + 1)), with t_i the pulled-back hyperplane class.
"""
from __future__ import annotations

from dataclasses import dataclass
from tokenize import TokenError
from typing import Sequence

import sympy
from sympy.parsing.sympy_parser import parse_expr

from fgl_cobord.core.errors import FglCobordError, ShapeError
from fgl_cobord.core.fgl_calculus import CheckResult, FGLTable, formal_sum, n_series
from fgl_cobord.core.mishchenko import MishchenkoCache
from fgl_cobord.core.rings import PARSE_TRANSFORMS, CoefficientRing, sympy_rational
from fgl_cobord.core.series import TruncatedSeries, check_same_ring


@dataclass(frozen=True)
class ProjRing:
    ring: CoefficientRing
    caps: tuple[int, ...]
    variables: tuple[str, ...] | None = None

    def __post_init__(self):
        caps = tuple(self.caps)
        if any(n < 0 for n in caps):
            raise ShapeError(f"shape: negative projective dimension in {caps}")
        variables = self.variables
        if variables is None:
            variables = ("t",) if len(caps) == 1 else tuple(f"t{k + 1}" for k in range(len(caps)))
        if len(variables) != len(caps):
            raise ShapeError(f"shape: {len(variables)} variables for {len(caps)} factors")
        object.__setattr__(self, "caps", caps)
        object.__setattr__(self, "variables", tuple(variables))

    @property
    def factors(self) -> int:
        return len(self.caps)

    @property
    def zero(self) -> TruncatedSeries:
        return self.element({})

    @property
    def one(self) -> TruncatedSeries:
        return self.element({(0,) * self.factors: self.ring.one})

    def element(self, terms) -> TruncatedSeries:
        return TruncatedSeries(self.ring, self.variables, terms, self.caps)

    def generator(self, factor: int = 0) -> TruncatedSeries:
        exp = tuple(1 if k == factor else 0 for k in range(self.factors))
        return self.element({exp: self.ring.one})

    def contains(self, e: TruncatedSeries) -> bool:
        return e.ring == self.ring and e.variables == self.variables and e.caps == self.caps

    def require(self, e: TruncatedSeries):
        check_same_ring(self.ring, e.ring)
        if e.variables != self.variables or e.caps != self.caps:
            raise ShapeError(f"shape: series over {e.variables} caps {e.caps} is not in {self}")

    def drop(self, factor: int) -> "ProjRing":
        keep = [k for k in range(self.factors) if k != factor]
        return ProjRing(self.ring, tuple(self.caps[k] for k in keep), tuple(self.variables[k] for k in keep))

    def parse(self, text: str) -> TruncatedSeries:
        """Read a polynomial such as "t^2 + a11*t" in the hyperplane variables."""
        symbols = {name: sympy.Symbol(name) for name in self.variables}
        try:
            expr = parse_expr(text, local_dict=symbols, transformations=PARSE_TRANSFORMS)
            if not isinstance(expr, sympy.Expr):
                raise FglCobordError(f"cannot parse {text!r} in {self}: not a polynomial")
            poly = sympy.Poly(sympy.expand(expr), *symbols.values())
        except (SyntaxError, TypeError, sympy.SympifyError, sympy.PolynomialError, TokenError) as exc:
            raise FglCobordError(f"cannot parse {text!r} in {self}: {exc}") from exc
        terms = {}
        for exp, c in poly.terms():
            terms[exp] = self.ring.coerce(sympy_rational(c) if c.is_Rational else str(c))
        return self.element(terms)

    def to_json(self, e: TruncatedSeries) -> dict:
        return {"caps": list(self.caps), **e.to_json()}

    def from_json(self, data) -> TruncatedSeries:
        e = TruncatedSeries.from_json(self.ring, {"vars": list(self.variables), "caps": list(self.caps), **data})
        self.require(e)
        return e

    def __str__(self) -> str:
        return " x ".join(f"P^{n}" for n in self.caps) + f" over {self.ring}"


def chern_of_line_bundle(R: ProjRing, F: FGLTable, d: Sequence[int]) -> TruncatedSeries:
    """c1(O(d_1, ..., d_k)) = [d_1](t_1) +_F ... +_F [d_k](t_k)."""
    if len(d) != R.factors:
        raise ShapeError(f"shape: {len(d)} degrees for {R.factors} factors")
    total = R.zero
    for k, (degree, cap) in enumerate(zip(d, R.caps)):
        if not degree or not cap:
            continue
        term = n_series(F, degree, cap, R.variables[k]).embed(R.variables, R.caps)
        total = formal_sum(F, total, term)
    return total


def extract_fgl_coeffs(R: ProjRing, c: TruncatedSeries) -> FGLTable:
    """Read a_ij (i <= n, j <= m) off c1(O(1,1)) on P^n x P^m."""
    if R.factors != 2:
        raise ShapeError(f"shape: extraction needs two factors, got {R.factors}")
    R.require(c)
    c.require_nilpotent("not a first Chern class")
    n, m = R.caps
    coefficients = {(i, j): c.coefficient((i, j)) for i in range(1, n + 1) for j in range(1, m + 1)}
    positions = [(i, j) for i in range(1, n + 1) for j in range(1, m + 1)]
    return FGLTable(R.ring, coefficients, positions=positions)


def hyperplane_divisor_power(R: ProjRing, a: int, factor: int = 0) -> TruncatedSeries:
    """t^a, the class of a codimension-a linear subspace; zero past the cap."""
    if a < 0:
        raise ShapeError(f"shape: negative power {a}")
    exp = tuple(a if k == factor else 0 for k in range(R.factors))
    return R.element({exp: R.ring.one})


def pushforward(R: ProjRing, e: TruncatedSeries, cache: MishchenkoCache, factor: int = 0) -> TruncatedSeries:
    """Push forward along the projection forgetting one factor: t^a -> p_(n - a)."""
    R.require(e)
    check_same_ring(R.ring, cache.ring)
    n = R.caps[factor]
    cache.require(n)
    rest = R.drop(factor)
    terms: dict = {}
    for exp, c in e.items():
        image = c * cache.element(n - exp[factor])
        key = exp[:factor] + exp[factor + 1:]
        terms[key] = terms[key] + image if key in terms else image
    return rest.element(terms)


def pushforward_to_point(R: ProjRing, e: TruncatedSeries, cache: MishchenkoCache):
    """Iterated single-factor pushforward, first factor first."""
    while R.factors:
        e = pushforward(R, e, cache, 0)
        R = R.drop(0)
    return e.constant_term


def verify_geometric_associativity(F: FGLTable, n: int) -> CheckResult:
    """c1(O(1,1,0)) +_F t3 = t1 +_F c1(O(0,1,1)) on P^n x P^n x P^n."""
    R = ProjRing(F.ring, (n, n, n))
    t1, _, t3 = (R.generator(k) for k in range(3))
    left = formal_sum(F, chern_of_line_bundle(R, F, (1, 1, 0)), t3)
    right = formal_sum(F, t1, chern_of_line_bundle(R, F, (0, 1, 1)))
    residual = left - right
    return CheckResult("geometric-associativity", residual.is_zero(), residual)
