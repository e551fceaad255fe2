"""
Formal group law calculus.

FGLTable stores the coefficients a_ij of F(x, y) = x + y + sum a_ij x^i y^j
over some coefficient ring. The functions here substitute Chern-class-like
series into F: formal sum, formal inverse, n-series, the projective bundle
class P(u), and the identity checkers built on them. Checkers never raise on
failure; they return a CheckResult carrying the residual series.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Iterator, Mapping

from fgl_cobord.core.errors import NotNilpotentError, ShapeError, TruncationError
from fgl_cobord.core.rings import CoefficientRing
from fgl_cobord.core.series import TruncatedSeries, check_same_ring


def canonical_pair(i: int, j: int) -> tuple[int, int]:
    if i < 1 or j < 1:
        raise ShapeError(f"shape: a_{i}{j} needs i, j >= 1")
    return (i, j) if i <= j else (j, i)


class FGLTable:
    """
    Coefficient table {a_ij} of a commutative one-dimensional FGL.

    Only i <= j is stored. Coefficients missing from the table are zero when
    the table is complete (``max_weight`` None), when their weight is within
    ``max_weight``, or when the ring itself vanishes in that weight. A table
    with explicit ``positions`` (a partial read-off) knows nothing else.
    """

    def __init__(
        self,
        ring: CoefficientRing,
        coefficients: Mapping[tuple[int, int], Any] | None = None,
        max_weight: int | None = None,
        positions: Iterable[tuple[int, int]] | None = None,
    ):
        self.ring = ring
        self.max_weight = max_weight
        stored: dict[tuple[int, int], Any] = {}
        for (i, j), c in (coefficients or {}).items():
            key = canonical_pair(i, j)
            c = ring.coerce(c)
            if key in stored and stored[key] != c:
                raise ShapeError(f"shape: a_{i}{j} and a_{j}{i} differ")
            stored[key] = c
        self._coefficients = {k: v for k, v in sorted(stored.items()) if v}
        self.positions = (
            frozenset(canonical_pair(i, j) for i, j in positions) if positions is not None else None
        )

    def coeff(self, i: int, j: int):
        key = canonical_pair(i, j)
        if key in self._coefficients:
            return self._coefficients[key]
        if self.positions is not None:
            if key in self.positions:
                return self.ring.zero
            raise TruncationError(f"beyond truncation: a_{i}{j} was not recorded")
        weight = i + j - 1
        if self.max_weight is None or weight <= self.max_weight:
            return self.ring.zero
        ring_cut = self.ring.max_weight
        if ring_cut is not None and weight > ring_cut:
            return self.ring.zero
        raise TruncationError(f"beyond truncation: a_{i}{j} has weight {weight} > {self.max_weight}")

    def items(self) -> Iterator[tuple[tuple[int, int], Any]]:
        return iter(self._coefficients.items())

    def with_coefficient(self, i: int, j: int, value) -> "FGLTable":
        coefficients = dict(self._coefficients)
        coefficients[canonical_pair(i, j)] = value
        return FGLTable(self.ring, coefficients, self.max_weight, self.positions)

    @cached_property
    def is_graded(self) -> bool:
        return all(self.ring.weight(c) == i + j - 1 for (i, j), c in self._coefficients.items())

    def series(self, caps=None, total_cap=None, variables=("x", "y")) -> TruncatedSeries:
        x = TruncatedSeries.variable(self.ring, variables[0], variables, caps, total_cap)
        y = TruncatedSeries.variable(self.ring, variables[1], variables, caps, total_cap)
        return formal_sum(self, x, y)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FGLTable):
            return NotImplemented
        return self.ring == other.ring and self._coefficients == other._coefficients

    __hash__ = None

    def to_json(self) -> list[dict]:
        return [
            {"i": i, "j": j, "coeff": self.ring.element_to_json(c)}
            for (i, j), c in self._coefficients.items()
        ]

    def __repr__(self) -> str:
        body = ", ".join(f"a{i}{j}={self.ring.format(c)}" for (i, j), c in self._coefficients.items())
        return f"FGLTable({self.ring}, {{{body}}})"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def residual_text(self) -> str:
        if self.residual is None:
            return "0"
        if isinstance(self.residual, TruncatedSeries):
            return self.residual.format()
        return str(self.residual)

    def to_json(self) -> dict:
        document = {"check": self.name, "status": self.status, "residual": self.residual_text()}
        if self.detail:
            document["detail"] = self.detail
        return document


def _variable(ring, name: str, cap: int, minimum: int = 1) -> TruncatedSeries:
    if cap < minimum:
        raise TruncationError(f"empty truncation: cap {cap}")
    return TruncatedSeries.variable(ring, name, (name,), caps=(cap,))


def formal_sum(F: FGLTable, p: TruncatedSeries, q: TruncatedSeries) -> TruncatedSeries:
    """F(p, q) truncated to the common caps of p and q."""
    check_same_ring(F.ring, p.ring)
    p.require_nilpotent()
    q.require_nilpotent()
    base = p + q
    bound = base.degree_bound
    p_powers = p.restrict(base.caps, base.total_cap).powers(bound)
    q_powers = q.restrict(base.caps, base.total_cap).powers(bound)
    result = base
    for i in range(1, len(p_powers)):
        if not p_powers[i]:
            break
        inner = base.zero_like()
        for j in range(1, min(len(q_powers), bound - i + 1)):
            if not q_powers[j]:
                break
            a = F.coeff(i, j)
            if a:
                inner = inner + q_powers[j].scale(a)
        if inner:
            result = result + p_powers[i] * inner
    return result


def formal_inverse(F: FGLTable, cap: int, variable: str = "t") -> TruncatedSeries:
    """The series iota(t) with F(t, iota(t)) = 0 mod t^(cap+1), solved degree by degree."""
    t = _variable(F.ring, variable, cap)
    inverse = -t
    for k in range(2, cap + 1):
        residual = formal_sum(F, t.restrict((k,)), inverse.restrict((k,)))
        correction = residual.coefficient(k)
        if correction:
            inverse = inverse - t.like({(k,): correction})
    return inverse


def n_series(F: FGLTable, n: int, cap: int, variable: str = "t") -> TruncatedSeries:
    """[n]_F(t): [0] = 0, [n+1] = F(t, [n]), [-n] = iota([n])."""
    t = _variable(F.ring, variable, cap)
    result = t.zero_like()
    for _ in range(abs(n)):
        result = formal_sum(F, t, result)
    if n < 0:
        result = formal_inverse(F, cap, variable).compose([result])
    return result


def pbundle_class(
    F: FGLTable, cap: int, variable: str = "u", dual: TruncatedSeries | None = None
) -> TruncatedSeries:
    """P(u) = -sum a_ij u^(i-1) iota(u)^(j-1), the class of P(L + O) as a series in u = c1(L)."""
    u = _variable(F.ring, variable, cap, minimum=0)
    iota = dual if dual is not None else formal_inverse(F, max(cap, 1), variable).restrict((cap,))
    u_powers = u.powers(cap)
    dual_powers = iota.restrict(u.caps).powers(cap)
    total = u.zero_like()
    for i in range(1, len(u_powers) + 1):
        for j in range(1, cap + 3 - i):
            if j - 1 >= len(dual_powers):
                break
            a = F.coeff(i, j)
            if a:
                total = total + (u_powers[i - 1] * dual_powers[j - 1]).scale(a)
    return -total


def verify_inverse_identity(F: FGLTable, cap: int, dual: TruncatedSeries | None = None) -> CheckResult:
    """
    Check u + iota(u) - u*iota(u)*P(u) = 0 through u^cap.

    ``dual`` replaces the formal inverse of F as the class c1(L^v); passing
    the dual class of a trusted table makes the check sensitive to
    corruption of F.
    """
    u = _variable(F.ring, "u", cap)
    iota = dual if dual is not None else formal_inverse(F, cap, "u")
    P = pbundle_class(F, cap, "u", dual=iota)
    residual = u + iota - u * iota * P
    return CheckResult("inverse-identity", residual.is_zero(), residual)


def dpc_expand(F: FGLTable, caps: tuple[int, int], variables=("x", "y")) -> TruncatedSeries:
    """S(x, y) = sum a_ij x^(i-1) y^(j-1), so that F(x, y) = x + y + x*y*S(x, y)."""
    n, m = caps
    terms = {(i - 1, j - 1): F.coeff(i, j) for i in range(1, n + 2) for j in range(1, m + 2)}
    return TruncatedSeries(F.ring, variables, terms, caps=(n, m))


def verify_dpc_split(F: FGLTable, cap: int) -> CheckResult:
    """F = x + y + xyS exactly, and S(x, iota(x)) + P(x) = 0 through the cap."""
    S = dpc_expand(F, (cap, cap))
    x = TruncatedSeries.variable(F.ring, "x", ("x", "y"), caps=(cap, cap))
    y = TruncatedSeries.variable(F.ring, "y", ("x", "y"), caps=(cap, cap))
    split = formal_sum(F, x, y) - x - y - x * y * S

    t = _variable(F.ring, "x", cap)
    iota = formal_inverse(F, cap, "x")
    bridge = S.compose([t, iota]) + pbundle_class(F, cap, "x", dual=iota)

    if split:
        return CheckResult("dpc-split", False, split, "F - x - y - xyS is nonzero")
    if bridge:
        return CheckResult("dpc-split", False, bridge, "S(x, iota(x)) + P(x) is nonzero")
    return CheckResult("dpc-split", True, split)


def associativity_residual(F: FGLTable, cap: int) -> TruncatedSeries:
    """F(F(x,y),z) - F(x,F(y,z)) through total degree cap."""
    names = ("x", "y", "z")
    x, y, z = (TruncatedSeries.variable(F.ring, v, names, total_cap=cap) for v in names)
    return formal_sum(F, formal_sum(F, x, y), z) - formal_sum(F, x, formal_sum(F, y, z))


def verify_fgl_axioms(F: FGLTable, cap: int) -> list[CheckResult]:
    names = ("x", "y")
    x, y = (TruncatedSeries.variable(F.ring, v, names, total_cap=cap) for v in names)
    zero = x.zero_like()
    unit = formal_sum(F, x, zero) - x
    sum_xy = formal_sum(F, x, y)
    commutativity = sum_xy - sum_xy.compose([y, x])
    associativity = associativity_residual(F, cap)
    return [
        CheckResult("unit", unit.is_zero(), unit),
        CheckResult("commutativity", commutativity.is_zero(), commutativity),
        CheckResult("associativity", associativity.is_zero(), associativity),
    ]


def series_reversion(f: TruncatedSeries, cap: int | None = None) -> TruncatedSeries:
    """The compositional inverse g of f = t + ..., with f(g(t)) = t."""
    if len(f.variables) != 1:
        raise ShapeError(f"shape: reversion needs a univariate series, got {f.variables}")
    f.require_nilpotent()
    cap = f.caps[0] if cap is None else cap
    linear = f.coefficient(1)
    if linear != f.ring.one:
        raise NotNilpotentError(f"not invertible: linear coefficient {f.ring.format(linear)}")
    t = _variable(f.ring, f.variables[0], cap)
    g = t
    for k in range(2, cap + 1):
        correction = f.compose([g.restrict((k,))]).coefficient(k)
        if correction:
            g = g - t.like({(k,): correction})
    return g


def invariant_differential(F: FGLTable, depth: int) -> list:
    """Coefficients q_0..q_depth of 1 / (dF/dy)(x, 0) = 1 / (1 + sum a_i1 x^i)."""
    ring = F.ring
    q = [ring.one]
    for k in range(1, depth + 1):
        acc = ring.zero
        for i in range(1, k + 1):
            a = F.coeff(i, 1)
            if a:
                acc = acc + a * q[k - i]
        q.append(-acc)
    return q


def logarithm(F: FGLTable, cap: int, variable: str = "x") -> TruncatedSeries:
    """log_F(x) = sum q_k x^(k+1) / (k+1); coefficients are rational."""
    t = _variable(F.ring, variable, cap)
    q = invariant_differential(F, cap - 1)
    return t.like({(k + 1,): q[k] * Fraction(1, k + 1) for k in range(cap)})


def verify_logarithm(F: FGLTable, cap: int) -> CheckResult:
    """log(F(x, y)) = log(x) + log(y) through total degree cap."""
    names = ("x", "y")
    x, y = (TruncatedSeries.variable(F.ring, v, names, total_cap=cap) for v in names)
    log = logarithm(F, cap, "s")
    residual = log.compose([formal_sum(F, x, y)]) - log.compose([x]) - log.compose([y])
    return CheckResult("logarithm", residual.is_zero(), residual)


def verify_dual_class_symmetry(F: FGLTable, cap: int) -> CheckResult:
    """P(iota(u)) = P(u): the bundles P(L + O) and P(L^v + O) have the same class."""
    iota = formal_inverse(F, cap, "u")
    P = pbundle_class(F, cap, "u", dual=iota)
    residual = P.compose([iota]) - P
    return CheckResult("dual-class-symmetry", residual.is_zero(), residual)
