"""
Exact integer linear algebra.

Sparse integer matrices, Smith and Hermite normal forms with unimodular
transforms, and integer lattice membership. Entries are Python ints
throughout; no machine-word fast path.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from fgl_cobord.core.errors import ShapeError

Scalar = int | Fraction


def _as_int(value) -> int:
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise ShapeError(f"shape: non-integral matrix entry {value}")
        return value.numerator
    return int(value)


class ExactMatrix:
    """Sparse integer matrix. Absent entries are zero; stored entries never are."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], int] | None = None):
        if rows < 0 or cols < 0:
            raise ShapeError(f"shape: negative dimensions {rows}x{cols}")
        stored = {}
        for (r, c), value in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ShapeError(f"shape: entry ({r}, {c}) outside {rows}x{cols}")
            value = _as_int(value)
            if value:
                stored[(r, c)] = value
        self.rows = rows
        self.cols = cols
        self._entries = dict(sorted(stored.items()))

    @classmethod
    def from_dense(cls, data) -> "ExactMatrix":
        """Build from nested lists or a 2-d numpy array"""
        array = np.asarray(data, dtype=object)
        if array.size == 0:
            return cls(*(array.shape if array.ndim == 2 else (0, 0)))
        if array.ndim != 2:
            raise ShapeError(f"shape: expected a 2-d array, got {array.ndim}-d")
        entries = {
            (r, c): array[r, c]
            for r in range(array.shape[0])
            for c in range(array.shape[1])
            if array[r, c] != 0
        }
        return cls(array.shape[0], array.shape[1], entries)

    @classmethod
    def _from_rows(cls, rows: list[list[int]], cols: int) -> "ExactMatrix":
        entries = {(r, c): v for r, row in enumerate(rows) for c, v in enumerate(row) if v}
        return cls(len(rows), cols, entries)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, {(k, k): 1 for k in range(n)})

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self._entries.get(key, 0)

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return iter(self._entries.items())

    def row(self, r: int) -> list[int]:
        return [self._entries.get((r, c), 0) for c in range(self.cols)]

    def column(self, c: int) -> list[int]:
        return [self._entries.get((r, c), 0) for r in range(self.rows)]

    def to_dense(self) -> list[list[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), value in self._entries.items():
            dense[r][c] = value
        return dense

    def to_numpy(self) -> np.ndarray:
        return np.array(self.to_dense(), dtype=object).reshape(self.rows, self.cols)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._entries.items()})

    def apply(self, vector: Sequence[Scalar]) -> list[Scalar]:
        """Matrix times column vector"""
        if len(vector) != self.cols:
            raise ShapeError(f"shape: vector of length {len(vector)} against {self.rows}x{self.cols}")
        out = [0] * self.rows
        for (r, c), value in self._entries.items():
            out[r] += value * vector[c]
        return out

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"shape: cannot multiply {self.shape} by {other.shape}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (r, c), value in other._entries.items():
            by_row.setdefault(r, []).append((c, value))
        product: dict[tuple[int, int], int] = {}
        for (r, k), left in self._entries.items():
            for c, right in by_row.get(k, ()):
                product[(r, c)] = product.get((r, c), 0) + left * right
        return ExactMatrix(self.rows, other.cols, product)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self._entries.items())))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}, {self.cols}, {self.to_dense()})"


@dataclass(frozen=True)
class SNFResult:
    """left_transform @ original @ right_transform == diagonal matrix"""

    diagonal: tuple[int, ...]
    left_transform: ExactMatrix
    right_transform: ExactMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)

    def diagonal_matrix(self) -> ExactMatrix:
        rows, cols = self.left_transform.rows, self.right_transform.rows
        return ExactMatrix(rows, cols, {(k, k): d for k, d in enumerate(self.diagonal)})


@dataclass(frozen=True)
class HNFResult:
    """transform @ original == matrix, matrix in row Hermite normal form"""

    matrix: ExactMatrix
    transform: ExactMatrix
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


@dataclass(frozen=True)
class LatticeMembership:
    member: bool
    coords: tuple[int, ...] | None = None
    unique: bool = False

    def __bool__(self) -> bool:
        return self.member


def _identity_rows(n: int) -> list[list[int]]:
    return [[1 if r == c else 0 for c in range(n)] for r in range(n)]


def _add_row(a: list[list[int]], target: int, source: int, factor: int):
    if not factor:
        return
    src, tgt = a[source], a[target]
    for k, value in enumerate(src):
        if value:
            tgt[k] += factor * value


def _add_col(a: list[list[int]], target: int, source: int, factor: int):
    if not factor:
        return
    for row in a:
        if row[source]:
            row[target] += factor * row[source]


def _swap_rows(a: list[list[int]], i: int, j: int):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a: list[list[int]], i: int, j: int):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _negate_row(a: list[list[int]], i: int):
    a[i] = [-v for v in a[i]]


def _move_pivot(a, left, right, t: int, at: tuple[int, int]):
    i, j = at
    if i != t:
        _swap_rows(a, i, t)
        _swap_rows(left, i, t)
    if j != t:
        _swap_cols(a, j, t)
        _swap_cols(right, j, t)


def smith_normal_form(m: ExactMatrix) -> SNFResult:
    """
    Smith normal form with unimodular transforms.

    Pivot rule: smallest absolute value among the nonzero entries of the
    active block, ties broken by (row, col). The output is a function of the
    matrix alone.
    """
    rows, cols = m.rows, m.cols
    a = m.to_dense()
    left = _identity_rows(rows)
    right = _identity_rows(cols)
    size = min(rows, cols)

    for t in range(size):
        block = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not block:
            break
        _, i, j = min(block)
        _move_pivot(a, left, right, t, (i, j))

        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    _add_row(a, i, t, -q)
                    _add_row(left, i, t, -q)
                    clean = clean and not a[i][t]
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    _add_col(a, j, t, -q)
                    _add_col(right, j, t, -q)
                    clean = clean and not a[t][j]
            if not clean:
                candidates = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
                candidates += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
                _, i, j = min(candidates)
                _move_pivot(a, left, right, t, (i, j))
                continue
            # pivot must divide the rest of the block
            offender = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if offender is None:
                break
            _add_row(a, t, offender, 1)
            _add_row(left, t, offender, 1)

        if a[t][t] < 0:
            _negate_row(a, t)
            _negate_row(left, t)

    return SNFResult(
        diagonal=tuple(a[k][k] for k in range(size)),
        left_transform=ExactMatrix._from_rows(left, rows),
        right_transform=ExactMatrix._from_rows(right, cols),
    )


def hermite_normal_form(m: ExactMatrix) -> HNFResult:
    """Row-style HNF: echelon, positive pivots, entries above a pivot in [0, pivot)."""
    rows, cols = m.rows, m.cols
    a = m.to_dense()
    u = _identity_rows(rows)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nonzero = [i for i in range(r, rows) if a[i][c]]
            if not nonzero:
                break
            p = min(nonzero, key=lambda i: (abs(a[i][c]), i))
            if p != r:
                _swap_rows(a, p, r)
                _swap_rows(u, p, r)
            clean = True
            for i in range(r + 1, rows):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    _add_row(a, i, r, -q)
                    _add_row(u, i, r, -q)
                    clean = clean and not a[i][c]
            if clean:
                break
        if not a[r][c]:
            continue
        if a[r][c] < 0:
            _negate_row(a, r)
            _negate_row(u, r)
        for i in range(r):
            q = a[i][c] // a[r][c]
            _add_row(a, i, r, -q)
            _add_row(u, i, r, -q)
        pivots.append(c)
        r += 1
    return HNFResult(
        matrix=ExactMatrix._from_rows(a, cols),
        transform=ExactMatrix._from_rows(u, rows),
        pivots=tuple(pivots),
    )


def unimodular_inverse(u: ExactMatrix) -> ExactMatrix:
    if u.rows != u.cols:
        raise ShapeError(f"shape: {u.shape} is not square")
    hnf = hermite_normal_form(u)
    if hnf.matrix != ExactMatrix.identity(u.rows):
        raise ShapeError("shape: matrix is not unimodular")
    return hnf.transform


def lattice_member(basis: ExactMatrix, v: Sequence[Scalar]) -> LatticeMembership:
    """
    Decide whether v lies in the integer span of the columns of basis.

    Coordinates are returned for members; they are unique exactly when the
    basis has full column rank.
    """
    if len(v) != basis.rows:
        raise ShapeError(f"shape: vector of length {len(v)} against {basis.rows} rows")
    values = [Fraction(x) for x in v]
    if any(x.denominator != 1 for x in values):
        return LatticeMembership(False)
    snf = smith_normal_form(basis)
    # B x = v  <=>  D y = U v  with  x = V y
    uv = snf.left_transform.apply([x.numerator for x in values])
    y = [0] * basis.cols
    for k, d in enumerate(snf.diagonal):
        if d == 0:
            if uv[k]:
                return LatticeMembership(False)
        elif uv[k] % d:
            return LatticeMembership(False)
        else:
            y[k] = uv[k] // d
    if any(uv[k] for k in range(len(snf.diagonal), basis.rows)):
        return LatticeMembership(False)
    coords = snf.right_transform.apply(y)
    return LatticeMembership(True, tuple(coords), unique=snf.rank == basis.cols)
