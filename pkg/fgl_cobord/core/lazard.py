"""
The truncated Lazard ring L_{<=N}.

Generators are a_ij with i <= j and weight i + j - 1 <= N, ordered by
(weight, i, j). Relations are the coefficients of
F(F(x,y),z) - F(x,F(y,z)) through total degree N+1 for the generic table,
computed in the polynomial ring truncated above weight N. Each weight
component is then presented by its relation matrix:

- free coordinates are the Hermite normal form of the lattice of integral
  functionals that vanish on the relations, so they do not depend on pivot
  choices;
- torsion coordinates (if any) come from the Smith normal form.

Products landing above weight N are zero: this is the ring structure of
the quotient, not a truncation of operands.
"""
from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from fgl_cobord.core.errors import FglCobordError, ShapeError, TruncationError
from fgl_cobord.core.exact_linear import (
    ExactMatrix,
    hermite_normal_form,
    lattice_member,
    smith_normal_form,
)
from fgl_cobord.core.fgl_calculus import FGLTable, associativity_residual, canonical_pair
from fgl_cobord.core.rings import (
    Exponent,
    Polynomial,
    PolynomialRing,
    Scalar,
    is_scalar,
    normalize_scalar,
    scalar_from_json,
    scalar_to_json,
)
from fgl_cobord.utils.logging import logger

SCHEMA = "fgl-cobord/1"

_GENERATOR_TOKEN = re.compile(r"\ba(\d+)_(\d+)\b|\ba(\d)(\d)\b")


def generator_name(i: int, j: int) -> str:
    i, j = canonical_pair(i, j)
    return f"a{i}{j}" if i < 10 and j < 10 else f"a{i}_{j}"


def parse_generator_name(name: str) -> tuple[int, int] | None:
    match = _GENERATOR_TOKEN.fullmatch(name)
    if not match:
        return None
    digits = [g for g in match.groups() if g is not None]
    return canonical_pair(int(digits[0]), int(digits[1]))


def lazard_generators(max_weight: int) -> tuple[tuple[int, int], ...]:
    return tuple(
        (i, w + 1 - i) for w in range(1, max_weight + 1) for i in range(1, w + 1) if i <= w + 1 - i
    )


@dataclass(frozen=True)
class WeightComponent:
    """
    Presentation data of one weight. Functionals are dense over the
    component's monomials; representatives give, for each coordinate, an
    integral combination of monomials reducing to that basis vector.
    """

    weight: int
    monomials: tuple[Exponent, ...]
    free: tuple[tuple[int, ...], ...]
    torsion_functionals: tuple[tuple[int, ...], ...]
    torsion: tuple[int, ...]
    representatives: tuple[tuple[int, ...], ...]
    relation_count: int = 0

    @property
    def rank(self) -> int:
        return len(self.free)

    @property
    def size(self) -> int:
        return len(self.free) + len(self.torsion)

    def normalize(self, coords: Sequence[Scalar]) -> tuple[Scalar, ...]:
        if len(coords) != self.size:
            raise ShapeError(f"shape: {len(coords)} coordinates in weight {self.weight} (size {self.size})")
        free = [normalize_scalar(c) for c in coords[: self.rank]]
        torsion = []
        for c, d in zip(coords[self.rank:], self.torsion):
            c = normalize_scalar(c)
            # torsion vanishes rationally
            torsion.append(c % d if isinstance(c, int) else 0)
        return tuple(free + torsion)

    def coordinates_of(self, vector: Mapping[int, Scalar]) -> tuple[Scalar, ...]:
        """Coordinates of the class of sum vector[j] * monomial_j"""
        functionals = self.free + self.torsion_functionals
        return self.normalize(
            [sum(f[j] * c for j, c in vector.items() if f[j]) for f in functionals]
        )

    def image_matrix(self) -> ExactMatrix:
        """Columns: coordinates of each monomial, then the torsion moduli."""
        m = len(self.monomials)
        entries = {}
        for row, f in enumerate(self.free + self.torsion_functionals):
            for j, v in enumerate(f):
                if v:
                    entries[(row, j)] = v
        for k, d in enumerate(self.torsion):
            entries[(self.rank + k, m + k)] = d
        return ExactMatrix(self.size, m + len(self.torsion), entries)

    def to_state(self) -> dict:
        return {
            "weight": self.weight,
            "monomials": [list(e) for e in self.monomials],
            "free": [list(f) for f in self.free],
            "torsion_functionals": [list(f) for f in self.torsion_functionals],
            "torsion": list(self.torsion),
            "representatives": [list(r) for r in self.representatives],
            "relation_count": self.relation_count,
        }

    @classmethod
    def from_state(cls, state: Mapping) -> "WeightComponent":
        return cls(
            weight=state["weight"],
            monomials=tuple(tuple(e) for e in state["monomials"]),
            free=tuple(tuple(f) for f in state["free"]),
            torsion_functionals=tuple(tuple(f) for f in state["torsion_functionals"]),
            torsion=tuple(state["torsion"]),
            representatives=tuple(tuple(r) for r in state["representatives"]),
            relation_count=state.get("relation_count", 0),
        )


def solve_component(weight: int, monomials: tuple[Exponent, ...], rows: list[dict[int, int]]) -> WeightComponent:
    """Normal-form data for Z^monomials / span(rows)."""
    m = len(monomials)
    torsion: list[int] = []
    torsion_functionals: list[tuple[int, ...]] = []
    if rows:
        relations = ExactMatrix(len(rows), m, {(r, c): v for r, row in enumerate(rows) for c, v in row.items()})
        snf = smith_normal_form(relations)
        rank = snf.rank
        right = snf.right_transform
        kernel = ExactMatrix(m - rank, m, {(k - rank, j): right[j, k] for k in range(rank, m) for j in range(m)})
        for k, d in enumerate(snf.diagonal[:rank]):
            if d > 1:
                torsion.append(d)
                torsion_functionals.append(tuple(right[j, k] for j in range(m)))
    else:
        rank = 0
        kernel = ExactMatrix.identity(m)
    hnf = hermite_normal_form(kernel)
    free = tuple(tuple(hnf.matrix.row(r)) for r in range(hnf.rank))

    component = WeightComponent(
        weight=weight,
        monomials=monomials,
        free=free,
        torsion_functionals=tuple(torsion_functionals),
        torsion=tuple(torsion),
        representatives=(),
        relation_count=len(rows),
    )
    return replace(component, representatives=_representatives(component))


def _representatives(component: WeightComponent) -> tuple[tuple[int, ...], ...]:
    m = len(component.monomials)
    images = component.image_matrix()
    columns = [images.column(j) for j in range(m)]
    out = []
    for c in range(component.size):
        unit = [1 if k == c else 0 for k in range(component.size)]
        exact = next((j for j, col in enumerate(columns) if component.normalize(col) == tuple(unit)), None)
        if exact is not None:
            out.append(tuple(1 if j == exact else 0 for j in range(m)))
            continue
        membership = lattice_member(images, unit)
        if not membership:
            raise FglCobordError(f"weight {component.weight}: basis vector {c} has no integral representative")
        out.append(tuple(membership.coords[:m]))
    return tuple(out)


def _relation_rows(
    weight: int,
    monomials: tuple[Exponent, ...],
    ring: PolynomialRing,
    relations: Sequence[Polynomial],
) -> list[dict[int, int]]:
    index = {mon: k for k, mon in enumerate(monomials)}
    rows = []
    for relation in relations:
        shift = weight - relation.weight
        if shift < 0:
            continue
        for mon in ring.monomials(shift):
            row: dict[int, int] = {}
            for exp, c in relation.terms.items():
                col = index[tuple(a + b for a, b in zip(exp, mon))]
                row[col] = row.get(col, 0) + c
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    return rows


def lazard_relations(max_weight: int) -> list[Polynomial]:
    """Nonzero coefficients of the associativity defect of the generic table."""
    generators = lazard_generators(max_weight)
    names = tuple(generator_name(i, j) for i, j in generators)
    weights = tuple(i + j - 1 for i, j in generators)
    truncated = PolynomialRing(names, weights, max_weight)
    raw = PolynomialRing(names, weights)
    generic = FGLTable(truncated, {g: truncated.gen(k) for k, g in enumerate(generators)}, max_weight)
    residual = associativity_residual(generic, max_weight + 1)
    seen: set = set()
    relations = []
    for _, c in residual.items():
        relation = Polynomial(raw, c.terms)
        key = tuple(sorted(relation.terms.items()))
        negated = tuple(sorted((-relation).terms.items()))
        if key in seen or negated in seen:
            continue
        seen.add(key)
        relations.append(relation)
    relations.sort(key=lambda r: (r.weight, r.format()))
    return relations


class LazardPresentation:
    """
    L_{<=N} with canonical per-weight normal forms. Also acts as the
    coefficient ring of its elements (``zero``, ``one``, ``coerce``, ...).
    """

    def __init__(self, max_weight: int, components: Mapping[int, WeightComponent], relations: Sequence[Polynomial]):
        if max_weight < 1:
            raise TruncationError("empty truncation: N must be at least 1")
        self.max_weight = max_weight
        self.generators = lazard_generators(max_weight)
        self.names = tuple(generator_name(i, j) for i, j in self.generators)
        self.generator_ring = PolynomialRing(self.names, tuple(i + j - 1 for i, j in self.generators))
        self.components = {w: components[w] for w in range(max_weight + 1)}
        self.relations = tuple(Polynomial(self.generator_ring, r.terms) for r in relations)
        self._generator_index = {g: k for k, g in enumerate(self.generators)}
        self._monomial_index = {
            w: {mon: k for k, mon in enumerate(c.monomials)} for w, c in self.components.items()
        }
        self._structure: dict[tuple[int, int], tuple] = {}

    # construction

    @classmethod
    def build(cls, max_weight: int, parallel: bool = False) -> "LazardPresentation":
        if max_weight < 1:
            raise TruncationError("empty truncation: N must be at least 1")
        relations = lazard_relations(max_weight)
        generators = lazard_generators(max_weight)
        ring = PolynomialRing(
            tuple(generator_name(i, j) for i, j in generators), tuple(i + j - 1 for i, j in generators)
        )
        logger.info(f"Lazard presentation N={max_weight}: {len(generators)} generators, {len(relations)} relations")
        jobs = []
        for w in range(max_weight + 1):
            monomials = ring.monomials(w)
            rows = _relation_rows(w, monomials, ring, [r for r in relations if r.weight <= w]) if w else []
            logger.debug(f"weight {w}: {len(rows)}x{len(monomials)} relation matrix")
            jobs.append((w, monomials, rows))
        if parallel and max_weight > 1:
            with ProcessPoolExecutor() as pool:
                solved = list(pool.map(solve_component, *zip(*jobs)))
        else:
            solved = [solve_component(*job) for job in jobs]
        return cls(max_weight, {c.weight: c for c in solved}, relations)

    def to_state(self) -> dict:
        return {
            "schema": SCHEMA,
            "max_weight": self.max_weight,
            "relations": [r.format() for r in self.relations],
            "components": [c.to_state() for c in self.components.values()],
        }

    @classmethod
    def from_state(cls, state: Mapping) -> "LazardPresentation":
        try:
            max_weight = state["max_weight"]
            components = {c["weight"]: WeightComponent.from_state(c) for c in state["components"]}
            generators = lazard_generators(max_weight)
            raw = PolynomialRing(
                tuple(generator_name(i, j) for i, j in generators), tuple(i + j - 1 for i, j in generators)
            )
            relations = [raw.parse(text) for text in state["relations"]]
        except (KeyError, TypeError) as exc:
            raise ShapeError(f"shape: malformed presentation state ({exc})") from exc
        return cls(max_weight, components, relations)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LazardPresentation):
            return NotImplemented
        return self.max_weight == other.max_weight

    def __hash__(self) -> int:
        return hash(("lazard", self.max_weight))

    def __str__(self) -> str:
        return f"L<={self.max_weight}"

    # structure

    def component(self, w: int) -> WeightComponent:
        if not 0 <= w <= self.max_weight:
            raise TruncationError(f"beyond truncation: weight {w} outside 0..{self.max_weight}")
        return self.components[w]

    def graded_component(self, w: int) -> tuple[int, tuple[int, ...]]:
        c = self.component(w)
        return c.rank, c.torsion

    def ranks(self) -> list[int]:
        return [c.rank for c in self.components.values()]

    def representative(self, w: int, k: int) -> Polynomial:
        c = self.component(w)
        return Polynomial(self.generator_ring, dict(zip(c.monomials, c.representatives[k])))

    def structure(self, w1: int, w2: int) -> tuple:
        """table[a][b] = coordinates of basis_a(w1) * basis_b(w2) in weight w1 + w2"""
        key = (w1, w2)
        if key not in self._structure:
            left = [self.representative(w1, a) for a in range(self.components[w1].size)]
            right = [self.representative(w2, b) for b in range(self.components[w2].size)]
            table = tuple(
                tuple(self._reduce_homogeneous(w1 + w2, l * r) for r in right) for l in left
            )
            self._structure.setdefault(key, table)
        return self._structure[key]

    # reduction

    def _exponent_map(self, ring: PolynomialRing) -> list[tuple[int, int] | None]:
        positions = []
        for name in ring.names:
            pair = parse_generator_name(name)
            if pair is None:
                raise FglCobordError(f"{name!r} is not a Lazard generator")
            positions.append(pair)
        return positions

    def _reduce_homogeneous(self, w: int, poly: Polynomial) -> tuple[Scalar, ...]:
        index = self._monomial_index[w]
        vector = {index[exp]: c for exp, c in poly.terms.items()}
        return self.components[w].coordinates_of(vector)

    def reduce(self, poly: Polynomial) -> "GradedElement":
        """Normal form of a raw polynomial in the a_ij (a_ji allowed)."""
        pairs = self._exponent_map(poly.ring)
        size = len(self.generators)
        vectors: dict[int, dict[int, Scalar]] = {}
        for exp, c in poly.terms.items():
            ours = [0] * size
            weight = 0
            for (i, j), e in zip(pairs, exp):
                if not e:
                    continue
                weight += e * (i + j - 1)
                if weight > self.max_weight:
                    break
                ours[self._generator_index[(i, j)]] += e
            if weight > self.max_weight:
                raise TruncationError(f"beyond truncation: monomial of weight {weight} > {self.max_weight}")
            col = self._monomial_index[weight][tuple(ours)]
            bucket = vectors.setdefault(weight, {})
            bucket[col] = bucket.get(col, 0) + c
        coords = {w: self.components[w].coordinates_of(v) for w, v in vectors.items()}
        return GradedElement(self, coords)

    def parse(self, text: str) -> "GradedElement":
        """Reduce a polynomial string such as "a11^2*a12 - a21"."""

        def canonical(match: re.Match) -> str:
            pair = parse_generator_name(match.group(0))
            if pair[0] + pair[1] - 1 > self.max_weight:
                raise TruncationError(f"beyond truncation: {match.group(0)} has weight {pair[0] + pair[1] - 1}")
            return generator_name(*pair)

        return self.reduce(self.generator_ring.parse(_GENERATOR_TOKEN.sub(canonical, text)))

    def generator(self, i: int, j: int) -> "GradedElement":
        """Class of a_ij; zero above the truncation."""
        pair = canonical_pair(i, j)
        if pair[0] + pair[1] - 1 > self.max_weight:
            return self.zero
        return self.reduce(self.generator_ring.gen(self._generator_index[pair]))

    def certify(self, element: "GradedElement") -> Polynomial | None:
        """An integral polynomial reducing to element, or None when there is none."""
        total = self.generator_ring.zero
        for w, coords in element.coords.items():
            c = self.components[w]
            membership = lattice_member(c.image_matrix(), list(coords))
            if not membership:
                return None
            total = total + Polynomial(self.generator_ring, dict(zip(c.monomials, membership.coords)))
        return total

    # coefficient-ring surface

    @property
    def zero(self) -> "GradedElement":
        return GradedElement(self, {})

    @property
    def one(self) -> "GradedElement":
        return GradedElement(self, {0: (1,)})

    def coerce(self, value) -> "GradedElement":
        if isinstance(value, GradedElement):
            if value.presentation is self:
                return value
            if value.presentation.max_weight != self.max_weight:
                raise TruncationError(
                    f"mixed truncation: weights {value.presentation.max_weight} and {self.max_weight}"
                )
            return GradedElement(self, value.coords)
        if isinstance(value, Polynomial):
            return self.reduce(value)
        if isinstance(value, str):
            return self.parse(value)
        if is_scalar(value):
            return GradedElement(self, {0: (normalize_scalar(value),)})
        raise FglCobordError(f"cannot coerce {value!r} into {self}")

    def weight(self, element: "GradedElement") -> int | None:
        return element.weight

    def format(self, element: "GradedElement") -> str:
        return element.format()

    def element_to_json(self, element: "GradedElement") -> dict:
        return {str(w): [scalar_to_json(c) for c in coords] for w, coords in sorted(element.coords.items())}

    def element_from_json(self, data) -> "GradedElement":
        if isinstance(data, Mapping):
            try:
                coords = {int(w): tuple(scalar_from_json(c) for c in cs) for w, cs in data.items()}
            except ValueError as exc:
                raise ShapeError(f"shape: bad weight key ({exc})") from exc
            for w in coords:
                self.component(w)
            return GradedElement(self, coords)
        if isinstance(data, str):
            try:
                return self.coerce(scalar_from_json(data))
            except FglCobordError:
                return self.parse(data)
        return self.coerce(scalar_from_json(data))

    def is_integral(self, element: "GradedElement") -> bool:
        return element.is_integral()

    def to_json(self) -> dict:
        components = []
        for w, c in self.components.items():
            components.append(
                {
                    "weight": w,
                    "rank": c.rank,
                    "torsion": list(c.torsion),
                    "basis": [self.representative(w, k).format() for k in range(c.size)],
                }
            )
        fgl = [
            {"i": i, "j": j, "coords": self.element_to_json(self.generator(i, j))}
            for i, j in self.generators
        ]
        return {
            "schema": SCHEMA,
            "max_weight": self.max_weight,
            "generators": list(self.names),
            "ranks": self.ranks(),
            "components": components,
            "fgl": fgl,
        }


class GradedElement:
    """Element of L_{<=N}: weight -> coordinates over that weight's canonical basis."""

    __slots__ = ("presentation", "coords")

    def __init__(self, presentation: LazardPresentation, coords: Mapping[int, Sequence[Scalar]]):
        stored = {}
        for w, values in coords.items():
            values = presentation.component(w).normalize(values)
            if any(values):
                stored[w] = values
        self.presentation = presentation
        self.coords = dict(sorted(stored.items()))

    def _other(self, other) -> "GradedElement | None":
        if isinstance(other, GradedElement) or is_scalar(other) or isinstance(other, Polynomial):
            return self.presentation.coerce(other)
        return None

    @property
    def weight(self) -> int | None:
        return next(iter(self.coords)) if len(self.coords) == 1 else None

    def component(self, w: int) -> tuple[Scalar, ...]:
        return self.coords.get(w, (0,) * self.presentation.component(w).size)

    def homogeneous_part(self, w: int) -> "GradedElement":
        return GradedElement(self.presentation, {w: self.coords[w]} if w in self.coords else {})

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for values in self.coords.values() for c in values)

    def scale(self, factor: Scalar) -> "GradedElement":
        factor = normalize_scalar(factor)
        return GradedElement(
            self.presentation, {w: tuple(c * factor for c in values) for w, values in self.coords.items()}
        )

    def __add__(self, other) -> "GradedElement":
        other = self._other(other)
        if other is None:
            return NotImplemented
        coords = {w: list(values) for w, values in self.coords.items()}
        for w, values in other.coords.items():
            acc = coords.setdefault(w, [0] * len(values))
            for k, c in enumerate(values):
                acc[k] += c
        return GradedElement(self.presentation, coords)

    __radd__ = __add__

    def __neg__(self) -> "GradedElement":
        return self.scale(-1)

    def __sub__(self, other) -> "GradedElement":
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "GradedElement":
        return (-self) + other

    def __mul__(self, other) -> "GradedElement":
        if is_scalar(other):
            return self.scale(other)
        other = self._other(other)
        if other is None:
            return NotImplemented
        L = self.presentation
        out: dict[int, list] = {}
        for w1, c1 in self.coords.items():
            for w2, c2 in other.coords.items():
                w = w1 + w2
                if w > L.max_weight:
                    continue
                table = L.structure(w1, w2)
                acc = out.setdefault(w, [0] * L.components[w].size)
                for a, x in enumerate(c1):
                    if not x:
                        continue
                    for b, y in enumerate(c2):
                        if not y:
                            continue
                        xy = x * y
                        for k, v in enumerate(table[a][b]):
                            if v:
                                acc[k] += xy * v
        return GradedElement(L, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "GradedElement":
        if n < 0:
            raise FglCobordError("negative power in L")
        result = self.presentation.one
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        try:
            other = self._other(other)
        except TruncationError:
            return False
        if other is None:
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.presentation.max_weight, tuple(self.coords.items())))

    def __bool__(self) -> bool:
        return bool(self.coords)

    def lift(self) -> Polynomial:
        """A raw polynomial in the a_ij reducing to this element."""
        L = self.presentation
        total = L.generator_ring.zero
        for w, values in self.coords.items():
            for k, c in enumerate(values):
                if c:
                    total = total + L.representative(w, k).scale(c)
        return total

    def format(self) -> str:
        return self.lift().format()

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"GradedElement({self.format()!r}, N={self.presentation.max_weight})"


def build_universal_fgl(max_weight: int, parallel: bool = False) -> tuple[LazardPresentation, FGLTable]:
    """The presentation of L_{<=N} and the universal table over it."""
    L = LazardPresentation.build(max_weight, parallel=parallel)
    return L, universal_table(L)


def universal_table(L: LazardPresentation) -> FGLTable:
    return FGLTable(L, {g: L.generator(*g) for g in L.generators}, max_weight=L.max_weight)


def graded_component(L: LazardPresentation, w: int) -> tuple[int, tuple[int, ...]]:
    return L.graded_component(w)


def reduce(L: LazardPresentation, poly: Polynomial | str) -> GradedElement:
    return L.parse(poly) if isinstance(poly, str) else L.reduce(poly)
