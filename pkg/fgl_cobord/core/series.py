"""
Truncated multivariate power series over a coefficient ring.

A series carries per-variable caps and/or a total-degree cap; terms outside
them are never stored. Binary operations take the pointwise minimum of the
caps and refuse operands over different rings.
"""
from __future__ import annotations

from typing import Any, Iterator, Mapping, Sequence

from fgl_cobord.core.errors import (
    NotNilpotentError,
    RingMismatchError,
    ShapeError,
    TruncationError,
)
from fgl_cobord.core.rings import CoefficientRing, Exponent, is_scalar, join_terms, scaled_term

Cap = int | None


def _min_cap(a: Cap, b: Cap) -> Cap:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def check_same_ring(left: CoefficientRing, right: CoefficientRing):
    if left is right or left == right:
        return
    lw, rw = getattr(left, "max_weight", None), getattr(right, "max_weight", None)
    if type(left) is type(right) and lw != rw:
        raise TruncationError(f"mixed truncation: weights {lw} and {rw}")
    raise RingMismatchError(f"ring mismatch: {left} and {right}")


class TruncatedSeries:
    """Sparse map exponent tuple -> ring element, truncated by caps."""

    __slots__ = ("ring", "variables", "caps", "total_cap", "terms")

    def __init__(
        self,
        ring: CoefficientRing,
        variables: Sequence[str],
        terms: Mapping[Exponent, Any] | None = None,
        caps: Sequence[Cap] | None = None,
        total_cap: Cap = None,
    ):
        variables = tuple(variables)
        caps = tuple(caps) if caps is not None else (None,) * len(variables)
        if len(caps) != len(variables):
            raise ShapeError(f"shape: {len(caps)} caps for {len(variables)} variables")
        if any(c is not None and c < 0 for c in caps) or (total_cap is not None and total_cap < 0):
            raise TruncationError("empty truncation: negative cap")
        if total_cap is None and any(c is None for c in caps):
            raise TruncationError("empty truncation: every variable needs a cap")
        self.ring = ring
        self.variables = variables
        self.caps = caps
        self.total_cap = total_cap
        stored = {}
        for exp, c in (terms or {}).items():
            exp = (exp,) if isinstance(exp, int) else tuple(exp)
            if len(exp) != len(variables):
                raise ShapeError(f"shape: exponent {exp} for variables {variables}")
            if not self.fits(exp):
                continue
            c = ring.coerce(c)
            if c:
                stored[exp] = c
        self.terms = stored

    # construction helpers

    @classmethod
    def constant(cls, ring, value, variables, caps=None, total_cap=None) -> "TruncatedSeries":
        return cls(ring, variables, {(0,) * len(variables): value}, caps, total_cap)

    @classmethod
    def variable(cls, ring, name: str, variables, caps=None, total_cap=None) -> "TruncatedSeries":
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        if sum(exp) != 1:
            raise ShapeError(f"shape: unknown variable {name!r}")
        return cls(ring, variables, {exp: ring.one}, caps, total_cap)

    def like(self, terms: Mapping[Exponent, Any]) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.variables, terms, self.caps, self.total_cap)

    def zero_like(self) -> "TruncatedSeries":
        return self.like({})

    def one_like(self) -> "TruncatedSeries":
        return self.like({(0,) * len(self.variables): self.ring.one})

    def fits(self, exp: Exponent) -> bool:
        if self.total_cap is not None and sum(exp) > self.total_cap:
            return False
        return all(cap is None or e <= cap for e, cap in zip(exp, self.caps))

    @property
    def degree_bound(self) -> int:
        """Largest total degree a stored term can have"""
        if all(c is not None for c in self.caps):
            bound = sum(self.caps)
            return bound if self.total_cap is None else min(bound, self.total_cap)
        return self.total_cap

    # access

    def coefficient(self, exp: Exponent | int):
        exp = (exp,) if isinstance(exp, int) else tuple(exp)
        return self.terms.get(exp, self.ring.zero)

    @property
    def constant_term(self):
        return self.coefficient((0,) * len(self.variables))

    def items(self) -> Iterator[tuple[Exponent, Any]]:
        return iter(sorted(self.terms.items(), key=lambda item: (sum(item[0]), tuple(-e for e in item[0]))))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def require_nilpotent(self, message: str = "not nilpotent-like"):
        if self.constant_term:
            raise NotNilpotentError(f"{message}: constant term {self.ring.format(self.constant_term)}")

    # arithmetic

    def _align(self, other: "TruncatedSeries") -> tuple[tuple[Cap, ...], Cap]:
        check_same_ring(self.ring, other.ring)
        if self.variables != other.variables:
            raise ShapeError(f"shape: variables {self.variables} and {other.variables}")
        caps = tuple(_min_cap(a, b) for a, b in zip(self.caps, other.caps))
        return caps, _min_cap(self.total_cap, other.total_cap)

    def _promote(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(self.ring, other, self.variables, self.caps, self.total_cap)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._promote(other)
        caps, total = self._align(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            terms[exp] = terms[exp] + c if exp in terms else c
        return TruncatedSeries(self.ring, self.variables, terms, caps, total)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return self.like({exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._promote(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def scale(self, factor) -> "TruncatedSeries":
        factor = factor if is_scalar(factor) else self.ring.coerce(factor)
        return self.like({exp: c * factor for exp, c in self.terms.items()})

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        caps, total = self._align(other)
        probe = TruncatedSeries(self.ring, self.variables, None, caps, total)
        product: dict[Exponent, Any] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                if not probe.fits(exp):
                    continue
                term = c1 * c2
                product[exp] = product[exp] + term if exp in product else term
        return TruncatedSeries(self.ring, self.variables, product, caps, total)

    def __rmul__(self, other) -> "TruncatedSeries":
        return self.scale(other)

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise ShapeError("shape: negative power of a series")
        result = self.one_like()
        for _ in range(n):
            if not result:
                break
            result = result * self
        return result

    def powers(self, limit: int) -> list["TruncatedSeries"]:
        """[1, s, s^2, ...] up to s^limit, stopping early once a power vanishes"""
        out = [self.one_like()]
        while len(out) <= limit and out[-1]:
            out.append(out[-1] * self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries) and not is_scalar(other):
            return NotImplemented
        try:
            return (self - other).is_zero()
        except (ShapeError, RingMismatchError, TruncationError):
            return False

    __hash__ = None

    # substitution

    def compose(self, substitutions: Sequence["TruncatedSeries"] | Mapping[str, "TruncatedSeries"]) -> "TruncatedSeries":
        """
        Substitute a series for every variable. All substitutes live in one
        common series space and must have zero constant term; the result
        lives in that space. Terms of self beyond its caps count as zero.
        """
        if isinstance(substitutions, Mapping):
            substitutions = [substitutions[v] for v in self.variables]
        substitutions = list(substitutions)
        if len(substitutions) != len(self.variables):
            raise ShapeError(f"shape: {len(substitutions)} substitutes for {self.variables}")
        if not substitutions:
            return self
        head = substitutions[0]
        caps, total = head.caps, head.total_cap
        for sub in substitutions:
            check_same_ring(self.ring, sub.ring)
            if sub.variables != head.variables:
                raise ShapeError(f"shape: substitutes over {head.variables} and {sub.variables}")
            sub.require_nilpotent()
            caps = tuple(_min_cap(a, b) for a, b in zip(caps, sub.caps))
            total = _min_cap(total, sub.total_cap)
        space = TruncatedSeries(self.ring, head.variables, None, caps, total)
        bound = space.degree_bound
        tables = []
        for k, sub in enumerate(substitutions):
            needed = max((exp[k] for exp in self.terms), default=0)
            tables.append(sub.restrict(caps, total).powers(min(needed, bound)))
        result = space.zero_like()
        for exp, c in self.terms.items():
            term = space.one_like()
            for k, e in enumerate(exp):
                if e >= len(tables[k]):
                    term = None
                    break
                if e:
                    term = term * tables[k][e]
                if not term:
                    break
            if term:
                result = result + term.scale(c)
        return result

    def restrict(self, caps: Sequence[Cap] | None = None, total_cap: Cap = None) -> "TruncatedSeries":
        caps = tuple(_min_cap(a, b) for a, b in zip(self.caps, caps)) if caps is not None else self.caps
        return TruncatedSeries(self.ring, self.variables, self.terms, caps, _min_cap(self.total_cap, total_cap))

    def embed(self, variables: Sequence[str], caps: Sequence[Cap] | None = None, total_cap: Cap = None) -> "TruncatedSeries":
        """Reinterpret in a larger variable set (matched by name)."""
        variables = tuple(variables)
        missing = [v for v in self.variables if v not in variables]
        if missing:
            raise ShapeError(f"shape: variables {missing} not in {variables}")
        index = [variables.index(v) for v in self.variables]
        if caps is None:
            caps = [None] * len(variables)
            for k, position in enumerate(index):
                caps[position] = self.caps[k]
        terms = {}
        for exp, c in self.terms.items():
            target = [0] * len(variables)
            for k, position in enumerate(index):
                target[position] = exp[k]
            terms[tuple(target)] = c
        return TruncatedSeries(self.ring, variables, terms, caps, _min_cap(self.total_cap, total_cap))

    # homogeneity

    def is_c1_like(self, degree: int = 1) -> bool:
        """Coefficient of x^E has weight |E| - degree for every stored term."""
        for exp, c in self.terms.items():
            if self.ring.weight(c) != sum(exp) - degree:
                return False
        return True

    # output

    def format(self) -> str:
        rendered = []
        for exp, c in self.items():
            monomial = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exp) if e
            ) or "1"
            rendered.append(scaled_term(self.ring.format(c), monomial))
        return join_terms(rendered)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.format()!r}, vars={self.variables}, caps={self.caps}, total_cap={self.total_cap})"

    def to_json(self) -> dict:
        document = {
            "vars": list(self.variables),
            "caps": list(self.caps),
            "terms": [
                {"exp": list(exp), "coeff": self.ring.element_to_json(c)} for exp, c in self.items()
            ],
        }
        if self.total_cap is not None:
            document["total_cap"] = self.total_cap
        return document

    @classmethod
    def from_json(cls, ring: CoefficientRing, data: Mapping) -> "TruncatedSeries":
        try:
            terms = {tuple(t["exp"]): ring.element_from_json(t["coeff"]) for t in data["terms"]}
            return cls(ring, data["vars"], terms, data.get("caps"), data.get("total_cap"))
        except (KeyError, TypeError) as exc:
            raise ShapeError(f"shape: malformed series document ({exc})") from exc
