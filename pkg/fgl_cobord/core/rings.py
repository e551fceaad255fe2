"""
Coefficient rings for series, formal group laws and specializations.

Every coefficient ring exposes the same small surface: ``zero``/``one``,
``coerce``, ``weight`` (homogeneous homological weight or None),
``max_weight`` (truncation, None when untruncated), ``format``,
``element_to_json``/``element_from_json`` and ``is_integral``. Elements
support ``+ - *`` among themselves and with Python ints and Fractions.
"""
from __future__ import annotations

import numbers
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from tokenize import TokenError
from typing import Any, Mapping, Protocol, Sequence

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from fgl_cobord.core.errors import FglCobordError, RingMismatchError, ShapeError, TruncationError

Scalar = int | Fraction
Exponent = tuple[int, ...]

PARSE_TRANSFORMS = standard_transformations + (convert_xor,)


def normalize_scalar(value) -> Scalar:
    """Return an int when the value is integral, a Fraction otherwise."""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Rational):
        return normalize_scalar(Fraction(value.numerator, value.denominator))
    raise TypeError(f"not an exact scalar: {value!r}")


def is_scalar(value) -> bool:
    return isinstance(value, numbers.Rational)


def scalar_to_json(value: Scalar):
    value = normalize_scalar(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return value


def scalar_from_json(data) -> Scalar:
    if isinstance(data, bool):
        raise FglCobordError(f"not a scalar: {data!r}")
    if isinstance(data, int):
        return data
    if isinstance(data, str):
        try:
            return normalize_scalar(Fraction(data))
        except (ValueError, ZeroDivisionError) as exc:
            raise FglCobordError(f"not a scalar: {data!r}") from exc
    raise FglCobordError(f"not a scalar: {data!r}")


def sympy_rational(value) -> Scalar:
    value = sympy.sympify(value)
    if not value.is_Rational:
        raise FglCobordError(f"coefficient {value} is not rational")
    return normalize_scalar(Fraction(int(value.p), int(value.q)))


class CoefficientRing(Protocol):
    max_weight: int | None

    @property
    def zero(self) -> Any: ...

    @property
    def one(self) -> Any: ...

    def coerce(self, value) -> Any: ...

    def weight(self, element) -> int | None: ...

    def format(self, element) -> str: ...

    def element_to_json(self, element) -> Any: ...

    def element_from_json(self, data) -> Any: ...

    def is_integral(self, element) -> bool: ...


@dataclass(frozen=True)
class IntegerRing:
    """Z (and Q when Fractions appear), concentrated in weight 0."""

    max_weight: int | None = field(default=0, init=False)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def coerce(self, value) -> Scalar:
        try:
            return normalize_scalar(value)
        except TypeError as exc:
            raise RingMismatchError(f"cannot coerce {value!r} into the integers") from exc

    def weight(self, element) -> int | None:
        return 0 if element else None

    def format(self, element) -> str:
        return str(normalize_scalar(element))

    def element_to_json(self, element):
        return scalar_to_json(element)

    def element_from_json(self, data) -> Scalar:
        return scalar_from_json(data)

    def is_integral(self, element) -> bool:
        return isinstance(normalize_scalar(element), int)

    def __str__(self) -> str:
        return "Z"


@dataclass(frozen=True)
class PolynomialRing:
    """
    Graded polynomial ring over Z (or Q) on named variables.

    With ``max_weight`` set, terms of weight above it are dropped on
    construction: the ring is the quotient by everything of larger weight.
    """

    names: tuple[str, ...]
    weights: tuple[int, ...] | None = None
    max_weight: int | None = None

    def __post_init__(self):
        names = tuple(self.names)
        weights = tuple(self.weights) if self.weights is not None else (1,) * len(names)
        if len(weights) != len(names):
            raise ShapeError(f"shape: {len(names)} names but {len(weights)} weights")
        if any(w < 1 for w in weights):
            raise ShapeError("shape: variable weights must be positive")
        if len(set(names)) != len(names):
            raise ShapeError(f"shape: repeated variable names {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "weights", weights)

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self)

    @property
    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * len(self.names): 1})

    def gen(self, name: str | int) -> "Polynomial":
        index = self.names.index(name) if isinstance(name, str) else name
        exp = [0] * len(self.names)
        exp[index] = 1
        return Polynomial(self, {tuple(exp): 1})

    def truncated(self, max_weight: int | None) -> "PolynomialRing":
        return PolynomialRing(self.names, self.weights, max_weight)

    def exponent_weight(self, exp: Exponent) -> int:
        return sum(e * w for e, w in zip(exp, self.weights))

    @lru_cache(maxsize=None)
    def monomials(self, weight: int) -> tuple[Exponent, ...]:
        """Exponent vectors of the given weight, in descending lexicographic order"""
        out: list[Exponent] = []

        def extend(k: int, remaining: int, prefix: list[int]):
            if k == len(self.names):
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            w = self.weights[k]
            for e in range(remaining // w, -1, -1):
                extend(k + 1, remaining - e * w, prefix + [e])

        if weight >= 0:
            extend(0, weight, [])
        return tuple(out)

    def coerce(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring == self:
                return value
            if value.ring.names == self.names and value.ring.weights == self.weights:
                raise TruncationError(
                    f"mixed truncation: weights {value.ring.max_weight} and {self.max_weight}"
                )
            raise RingMismatchError(f"polynomial over {value.ring} used in {self}")
        if isinstance(value, str):
            return self.parse(value)
        try:
            return Polynomial(self, {(0,) * len(self.names): normalize_scalar(value)})
        except TypeError as exc:
            raise RingMismatchError(f"cannot coerce {value!r} into {self}") from exc

    def weight(self, element: "Polynomial") -> int | None:
        weights = {self.exponent_weight(exp) for exp in element.terms}
        return weights.pop() if len(weights) == 1 else None

    def format(self, element: "Polynomial") -> str:
        return element.format()

    def element_to_json(self, element: "Polynomial") -> str:
        return element.format()

    def element_from_json(self, data) -> "Polynomial":
        if isinstance(data, str):
            return self.parse(data)
        return self.coerce(scalar_from_json(data))

    def is_integral(self, element: "Polynomial") -> bool:
        return all(isinstance(c, int) for c in element.terms.values())

    def parse(self, text: str) -> "Polynomial":
        symbols = {name: sympy.Symbol(name) for name in self.names}
        try:
            expr = parse_expr(text, local_dict=symbols, transformations=PARSE_TRANSFORMS)
        except (SyntaxError, TypeError, sympy.SympifyError, TokenError) as exc:
            raise FglCobordError(f"cannot parse polynomial {text!r}: {exc}") from exc
        return self.from_sympy(expr)

    def from_sympy(self, expr) -> "Polynomial":
        gens = [sympy.Symbol(name) for name in self.names]
        try:
            expr = sympy.sympify(expr)
        except sympy.SympifyError as exc:
            raise FglCobordError(f"not a polynomial: {expr!r}") from exc
        if not isinstance(expr, sympy.Expr):
            raise FglCobordError(f"not a polynomial: {expr!r}")
        unknown = expr.free_symbols - set(gens)
        if unknown:
            raise FglCobordError(f"unknown symbols {sorted(map(str, unknown))} for {self}")
        poly = sympy.Poly(sympy.expand(expr), *gens)
        return Polynomial(self, {exp: sympy_rational(c) for exp, c in poly.terms()})

    def __str__(self) -> str:
        body = ", ".join(self.names)
        return f"Z[{body}]" + (f"<={self.max_weight}" if self.max_weight is not None else "")


def _monomial_string(names: Sequence[str], exp: Exponent) -> str:
    parts = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, exp) if e]
    return "*".join(parts) or "1"


def join_terms(terms: Sequence[str]) -> str:
    """Join signed term strings into "a - b + c" form."""
    if not terms:
        return "0"
    out = terms[0]
    for term in terms[1:]:
        out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return out


def scaled_term(coefficient: str, monomial: str) -> str:
    """Render coefficient*monomial, dropping unit coefficients and monomials."""
    if monomial == "1":
        return coefficient
    if coefficient == "1":
        return monomial
    if coefficient == "-1":
        return f"-{monomial}"
    if re.search(r"[\s+]|.-", coefficient):
        return f"({coefficient})*{monomial}"
    return f"{coefficient}*{monomial}"


class Polynomial:
    """Sparse polynomial: exponent tuple -> int or Fraction; zero terms never stored."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolynomialRing, terms: Mapping[Exponent, Scalar] | None = None):
        cut = ring.max_weight
        size = len(ring.names)
        stored: dict[Exponent, Scalar] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != size:
                raise ShapeError(f"shape: exponent {exp} for {size} variables")
            c = normalize_scalar(c)
            if c and (cut is None or ring.exponent_weight(exp) <= cut):
                stored[exp] = c
        self.ring = ring
        self.terms = stored

    def _lift(self, other) -> "Polynomial":
        return self.ring.coerce(other)

    @property
    def weight(self) -> int | None:
        return self.ring.weight(self)

    def coefficient(self, exp: Exponent) -> Scalar:
        return self.terms.get(tuple(exp), 0)

    def scale(self, factor: Scalar) -> "Polynomial":
        factor = normalize_scalar(factor)
        return Polynomial(self.ring, {exp: c * factor for exp, c in self.terms.items()})

    def __add__(self, other) -> "Polynomial":
        try:
            other = self._lift(other)
        except RingMismatchError:
            return NotImplemented
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            terms[exp] = terms.get(exp, 0) + c
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        try:
            other = self._lift(other)
        except RingMismatchError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if is_scalar(other):
            return self.scale(other)
        try:
            other = self._lift(other)
        except RingMismatchError:
            return NotImplemented
        ring = self.ring
        cut = ring.max_weight
        product: dict[Exponent, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                if cut is not None and ring.exponent_weight(exp) > cut:
                    continue
                product[exp] = product.get(exp, 0) + c1 * c2
        return Polynomial(ring, product)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise FglCobordError("negative power of a polynomial")
        result = self.ring.one
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if is_scalar(other):
            return self.terms == self.ring.coerce(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring, tuple(sorted(self.terms.items()))))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def evaluate(self, images: Sequence[Any], target: CoefficientRing):
        """Substitute images[k] for the k-th variable, computing in target."""
        if len(images) != len(self.ring.names):
            raise ShapeError(f"shape: {len(images)} images for {len(self.ring.names)} variables")
        powers: list[list[Any]] = [[target.one] for _ in images]
        result = target.zero
        for exp, c in self.terms.items():
            term = target.coerce(c)
            for k, e in enumerate(exp):
                if e:
                    while len(powers[k]) <= e:
                        powers[k].append(powers[k][-1] * images[k])
                    term = term * powers[k][e]
            result = result + term
        return result

    def sorted_terms(self) -> list[tuple[Exponent, Scalar]]:
        """Ascending weight; descending lexicographic within a weight."""
        key = lambda item: (self.ring.exponent_weight(item[0]), tuple(-e for e in item[0]))
        return sorted(self.terms.items(), key=key)

    def format(self) -> str:
        rendered = [
            scaled_term(str(c), _monomial_string(self.ring.names, exp))
            for exp, c in self.sorted_terms()
        ]
        return join_terms(rendered)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({self.format()!r})"
