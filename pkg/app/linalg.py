"""
Exact rational linear algebra

Matrices are dense, immutable grids of Fractions. Row reduction runs on sparse
integer rows (fraction-free elimination with gcd normalisation) and only turns
back into Fractions for the final reduced row-echelon form. Every subspace is
stored by its unique reduced row-echelon basis, so equal subspaces compare
equal field by field.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.errors import DimensionMismatch

Rational = Fraction
Vector = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce an int/Fraction/str to a Fraction; floats are refused"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, float)):
        raise TypeError(f"refusing inexact or boolean value {value!r}")
    return Fraction(value)


def _clean(value: Fraction) -> Fraction:
    # share one zero object across all grids
    return value if value else ZERO


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def vec_add(x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)} differ")
    return tuple(_clean(a + b) for a, b in zip(x, y))


def vec_sub(x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)} differ")
    return tuple(_clean(a - b) for a, b in zip(x, y))


def vec_scale(c, x: Sequence[Fraction]) -> Vector:
    c = as_rational(c)
    return tuple(_clean(c * a) for a in x)


def is_zero_vector(x: Sequence[Fraction]) -> bool:
    return not any(x)


def linear_combination(coefficients: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], length: int) -> Vector:
    """Sum of c_i * v_i; `length` is used when there are no vectors"""
    acc = [ZERO] * length
    for c, v in zip(coefficients, vectors):
        if not c:
            continue
        for k, a in enumerate(v):
            if a:
                acc[k] += c * a
    return tuple(_clean(a) for a in acc)


@dataclass(frozen=True)
class Matrix:
    """Dense rational matrix stored row-major"""
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [tuple(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch(f"row of length {len(r)} in a matrix with {cols} columns")
        entries = tuple(_clean(as_rational(v)) for r in rows for v in r)
        return cls(len(rows), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise DimensionMismatch(f"column of length {len(c)} in a matrix with {rows} rows")
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], cols=len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[Vector]:
        return [self.row(i) for i in range(self.rows)]

    @cached_property
    def _sparse_rows(self) -> List[Tuple[Tuple[int, Fraction], ...]]:
        return [tuple((j, v) for j, v in enumerate(self.row(i)) if v) for i in range(self.rows)]

    @cached_property
    def _sparse_columns(self) -> List[Tuple[Tuple[int, Fraction], ...]]:
        cols: List[list] = [[] for _ in range(self.cols)]
        for i, items in enumerate(self._sparse_rows):
            for j, v in items:
                cols[j].append((i, v))
        return [tuple(c) for c in cols]

    def row_items(self, i: int) -> Tuple[Tuple[int, Fraction], ...]:
        """Nonzero (column, value) pairs of row i"""
        return self._sparse_rows[i]

    def column_items(self, j: int) -> Tuple[Tuple[int, Fraction], ...]:
        """Nonzero (row, value) pairs of column j"""
        return self._sparse_columns[j]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(
            self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)
        ))

    def apply(self, vector: Sequence[Fraction]) -> Vector:
        """Matrix-vector product M x"""
        if len(vector) != self.cols:
            raise DimensionMismatch(f"cannot apply a {self.rows}x{self.cols} matrix to a vector of length {len(vector)}")
        out = []
        for items in self._sparse_rows:
            acc = ZERO
            for j, v in items:
                x = vector[j]
                if x:
                    acc += v * x
            out.append(_clean(acc))
        return tuple(out)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        entries: List[Fraction] = []
        for items in self._sparse_rows:
            acc = [ZERO] * other.cols
            for k, v in items:
                for j, w in other._sparse_rows[k]:
                    acc[j] += v * w
            entries.extend(_clean(a) for a in acc)
        return Matrix(self.rows, other.cols, tuple(entries))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, tuple(_clean(a + b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, tuple(_clean(a - b) for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> "Matrix":
        return Matrix(self.rows, self.cols, vec_scale(c, self.entries))

    def _check_same_shape(self, other: "Matrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"shapes {self.rows}x{self.cols} and {other.rows}x{other.cols} differ")

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.rows)

    def rank(self) -> int:
        return _echelon_from_rows(self._sparse_rows, self.cols).rank


# ---------------------------------------------------------------------------
# Row reduction
# ---------------------------------------------------------------------------

def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _integer_row(items: Iterable[Tuple[int, Fraction]]) -> Dict[int, int]:
    pairs = [(c, Fraction(v)) for c, v in items if v]
    if not pairs:
        return {}
    den = lcm(*(v.denominator for _, v in pairs))
    return _primitive({c: v.numerator * (den // v.denominator) for c, v in pairs})


class _Echelon:
    """
    Incremental row reduction over sparse integer rows

    `pivots` maps each leading column to its row; rows are kept primitive
    (content 1) and are only fully reduced when `rref_rows` is asked for.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: Dict[int, Dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Dict[int, int]) -> Dict[int, int]:
        col = -1
        while row:
            hits = [c for c in row if c > col and c in self.pivots]
            if not hits:
                break
            col = min(hits)
            prow = self.pivots[col]
            a, b = row[col], prow[col]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {c: v * fa for c, v in row.items()}
            for c, v in prow.items():
                x = new.get(c, 0) - fb * v
                if x:
                    new[c] = x
                else:
                    new.pop(c, None)
            row = _primitive(new)
        return row

    def insert(self, row: Dict[int, int]) -> bool:
        """Add a row; returns False when it was already in the row space"""
        reduced = self.reduce(row)
        if not reduced:
            return False
        self.pivots[min(reduced)] = reduced
        return True

    def rref_rows(self) -> List[Dict[int, Fraction]]:
        """Fully reduced rows, leading entry 1, sorted by leading column"""
        done: Dict[int, Dict[int, int]] = {}
        for lead in sorted(self.pivots, reverse=True):
            row = self.pivots[lead]
            # rows in `done` carry no other pivot column, so order does not matter here
            for c in [k for k in row if k != lead and k in done]:
                if c not in row:
                    continue
                other = done[c]
                a, b = row[c], other[c]
                g = gcd(a, b)
                fa, fb = b // g, a // g
                new = {k: v * fa for k, v in row.items()}
                for k, v in other.items():
                    x = new.get(k, 0) - fb * v
                    if x:
                        new[k] = x
                    else:
                        new.pop(k, None)
                row = _primitive(new)
            done[lead] = row
        out = []
        for lead in sorted(done):
            row = done[lead]
            p = row[lead]
            out.append({c: Fraction(v, p) for c, v in sorted(row.items())})
        return out


def _echelon_from_rows(rows: Iterable[Iterable[Tuple[int, Fraction]]], ncols: int) -> _Echelon:
    ech = _Echelon(ncols)
    for items in rows:
        row = _integer_row(items)
        if row:
            ech.insert(row)
    return ech


def _dense(row: Dict[int, Fraction], n: int) -> Vector:
    out = [ZERO] * n
    for c, v in row.items():
        out[c] = v
    return tuple(out)


def _items(vector: Sequence) -> List[Tuple[int, Fraction]]:
    return [(i, as_rational(v)) for i, v in enumerate(vector) if v]


def rref(m: Matrix) -> Matrix:
    """Unique reduced row-echelon form of m, zero rows at the bottom"""
    rows = _echelon_from_rows(m._sparse_rows, m.cols).rref_rows()
    dense = [_dense(r, m.cols) for r in rows]
    dense.extend([zero_vector(m.cols)] * (m.rows - len(dense)))
    return Matrix.from_rows(dense, cols=m.cols)


def rank(m: Matrix) -> int:
    return m.rank()


def nullspace_of_rows(rows: Iterable[Iterable[Tuple[int, Fraction]]], ncols: int) -> "Subspace":
    """
    Kernel of the linear system whose rows are given sparsely as (column, value) pairs

    This is the workhorse behind every Hom-space, polar and annihilator.
    """
    reduced = _echelon_from_rows(rows, ncols).rref_rows()
    pivot_of = {min(r): r for r in reduced}
    free = [c for c in range(ncols) if c not in pivot_of]
    vectors = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for p, r in pivot_of.items():
            v = r.get(f)
            if v:
                x[p] = -v
        vectors.append(x)
    return Subspace.span(vectors, ncols)


def nullspace(m: Matrix) -> "Subspace":
    """{x : m x = 0} as a canonical subspace"""
    return nullspace_of_rows(m._sparse_rows, m.cols)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^ambient_dim held by its reduced row-echelon basis"""
    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise DimensionMismatch(f"basis has {self.basis.cols} columns, ambient dimension is {self.ambient_dim}")

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        item_rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            item_rows.append(_items(v))
        rows = _echelon_from_rows(item_rows, ambient_dim).rref_rows()
        return cls(ambient_dim, Matrix.from_rows([_dense(r, ambient_dim) for r in rows], cols=ambient_dim))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, Matrix.zeros(0, n))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> List[Vector]:
        return self.basis.to_rows()

    @cached_property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(items[0][0] for items in self.basis._sparse_rows)

    def coordinates(self, vector: Sequence[Fraction]) -> Optional[Vector]:
        """
        Coefficients of `vector` in the canonical basis, or None if it lies outside

        With a reduced basis the coefficient of row t is the vector's entry at
        that row's pivot column; the residual check decides membership.
        """
        if len(vector) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(vector)} in ambient dimension {self.ambient_dim}")
        coords = tuple(as_rational(vector[p]) for p in self.pivots)
        residual = [as_rational(v) for v in vector]
        for c, items in zip(coords, self.basis._sparse_rows):
            if c:
                for j, v in items:
                    residual[j] -= c * v
        if any(residual):
            return None
        return tuple(_clean(c) for c in coords)

    def contains_vector(self, vector: Sequence[Fraction]) -> bool:
        return self.coordinates(vector) is not None

    def combine(self, coordinates: Sequence[Fraction]) -> Vector:
        """The vector with the given coordinates in the canonical basis"""
        if len(coordinates) != self.dim:
            raise DimensionMismatch(f"{len(coordinates)} coordinates for a {self.dim}-dimensional subspace")
        return linear_combination(coordinates, self.vectors(), self.ambient_dim)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(a.vectors() + b.vectors(), a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """
    a ∩ b via the kernel of [A^T | -B^T]: pairs (x, y) with xA = yB
    """
    _check_ambient(a, b)
    if a.is_zero() or b.is_zero():
        return Subspace.zero(a.ambient_dim)
    k = a.dim
    rows = []
    for c in range(a.ambient_dim):
        items = [(i, v) for i, v in enumerate(a.basis.column(c)) if v]
        items.extend((k + i, -v) for i, v in enumerate(b.basis.column(c)) if v)
        rows.append(items)
    kernel = nullspace_of_rows(rows, k + b.dim)
    vectors = [linear_combination(z[:k], a.vectors(), a.ambient_dim) for z in kernel.vectors()]
    return Subspace.span(vectors, a.ambient_dim)


def contains(a: Subspace, b: Subspace) -> bool:
    """True when b ⊆ a"""
    _check_ambient(a, b)
    return all(a.contains_vector(v) for v in b.vectors())


def equals(a: Subspace, b: Subspace) -> bool:
    _check_ambient(a, b)
    return a.basis == b.basis


def solve_in_span(basis: Matrix, target: Sequence[Fraction]) -> Optional[Vector]:
    """
    Coefficients c with sum_i c_i * basis.row(i) == target, or None

    Rows of `basis` need not be independent; free coefficients are set to 0.
    """
    if len(target) != basis.cols:
        raise DimensionMismatch(f"target of length {len(target)} for {basis.cols} columns")
    k = basis.rows
    rows = []
    for c in range(basis.cols):
        items = list(basis.column_items(c))
        t = as_rational(target[c])
        if t:
            items.append((k, t))
        rows.append(items)
    reduced = _echelon_from_rows(rows, k + 1).rref_rows()
    coeffs = [ZERO] * k
    for r in reduced:
        lead = min(r)
        if lead == k:
            return None
        coeffs[lead] = r.get(k, ZERO)
    return tuple(_clean(c) for c in coeffs)


def column_space(m: Matrix) -> Subspace:
    return Subspace.span([m.column(j) for j in range(m.cols)], m.rows)


def determinant(m: Matrix) -> Fraction:
    if m.rows != m.cols:
        raise DimensionMismatch(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    a = [list(r) for r in m.to_rows()]
    n = m.rows
    det = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionMismatch(f"inverse of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    augmented = Matrix.from_rows([m.row(i) + unit_vector(n, i) for i in range(n)], cols=2 * n)
    reduced = rref(augmented)
    left = Matrix.from_rows([reduced.row(i)[:n] for i in range(n)], cols=n)
    if not left.is_identity():
        raise ValueError("matrix is singular")
    return Matrix.from_rows([reduced.row(i)[n:] for i in range(n)], cols=n)


def quotient_map(space: Subspace) -> Matrix:
    """
    Projection Q^N -> Q^N / space in coordinates given by the non-pivot columns

    Column l is the image of e_l: e_l itself for a free column, minus the
    basis row owning l for a pivot column.
    """
    n = space.ambient_dim
    pivot_row = {p: t for t, p in enumerate(space.pivots)}
    free = [c for c in range(n) if c not in pivot_row]
    columns = []
    for l in range(n):
        if l in pivot_row:
            row = space.basis.row(pivot_row[l])
            columns.append(tuple(_clean(-row[f]) for f in free))
        else:
            columns.append(tuple(ONE if f == l else ZERO for f in free))
    return Matrix.from_columns(columns, len(free))
