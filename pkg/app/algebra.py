"""
Finite-dimensional associative unital algebras given by structure constants
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from app.errors import DimensionMismatch, ParentMismatch
from app.linalg import (
    Matrix,
    Subspace,
    Vector,
    ZERO,
    _clean,
    as_rational,
    nullspace_of_rows,
    unit_vector,
    vec_add,
    vec_scale,
    vec_sub,
)

StructureConstants = Tuple[Tuple[Tuple[Fraction, ...], ...], ...]


@dataclass(frozen=True)
class Algebra:
    """
    c[i][j][k] is the coefficient of e_k in e_i * e_j; the unit is stored
    explicitly as a coordinate vector and need not be e_0
    """
    dim: int
    basis_names: Tuple[str, ...]
    structure_constants: StructureConstants
    unit: Vector

    def __post_init__(self):
        n = self.dim
        if len(self.basis_names) != n or len(self.unit) != n:
            raise DimensionMismatch(f"basis names/unit do not match dimension {n}")
        if len(self.structure_constants) != n or any(
            len(row) != n or any(len(cell) != n for cell in row) for row in self.structure_constants
        ):
            raise DimensionMismatch(f"structure constants are not a {n}x{n}x{n} array")

    @classmethod
    def from_table(cls, basis_names: Sequence[str], table: Sequence[Sequence[Sequence]], unit: Sequence) -> "Algebra":
        """Build from nested lists of anything Fraction accepts"""
        constants = tuple(
            tuple(tuple(_clean(as_rational(v)) for v in cell) for cell in row) for row in table
        )
        return cls(
            dim=len(basis_names),
            basis_names=tuple(basis_names),
            structure_constants=constants,
            unit=tuple(_clean(as_rational(v)) for v in unit),
        )

    @cached_property
    def _sparse_table(self) -> List[List[Tuple[Tuple[int, Fraction], ...]]]:
        return [
            [tuple((k, v) for k, v in enumerate(cell) if v) for cell in row]
            for row in self.structure_constants
        ]

    def product(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        """Coordinates of x*y"""
        acc = [ZERO] * self.dim
        table = self._sparse_table
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in enumerate(x):
            if not a:
                continue
            row = table[i]
            for j, b in ys:
                ab = a * b
                for k, c in row[j]:
                    acc[k] += ab * c
        return tuple(_clean(v) for v in acc)

    def basis_vector(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def element(self, coords: Sequence) -> "AlgebraElement":
        return AlgebraElement(self, tuple(_clean(as_rational(v)) for v in coords))

    def basis_element(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, self.basis_vector(i))

    def index_of(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise KeyError(f"no basis element named {name!r}") from None

    @property
    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit)

    def left_matrix(self, x: Sequence[Fraction]) -> Matrix:
        """Matrix of b -> x*b"""
        return Matrix.from_columns([self.product(x, self.basis_vector(j)) for j in range(self.dim)], self.dim)

    def right_matrix(self, x: Sequence[Fraction]) -> Matrix:
        """Matrix of b -> b*x"""
        return Matrix.from_columns([self.product(self.basis_vector(j), x) for j in range(self.dim)], self.dim)

    @cached_property
    def left_basis_matrices(self) -> Tuple[Matrix, ...]:
        return tuple(self.left_matrix(self.basis_vector(i)) for i in range(self.dim))

    @cached_property
    def right_basis_matrices(self) -> Tuple[Matrix, ...]:
        return tuple(self.right_matrix(self.basis_vector(i)) for i in range(self.dim))


@dataclass(frozen=True)
class AlgebraElement:
    algebra: Algebra
    coords: Vector

    def __post_init__(self):
        if len(self.coords) != self.algebra.dim:
            raise DimensionMismatch(f"{len(self.coords)} coordinates for a {self.algebra.dim}-dimensional algebra")

    def _same_parent(self, other: "AlgebraElement"):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise ParentMismatch("elements belong to different algebras")

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return AlgebraElement(self.algebra, vec_scale(other, self.coords))

    def __rmul__(self, scalar):
        return AlgebraElement(self.algebra, vec_scale(scalar, self.coords))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same_parent(other)
        return AlgebraElement(self.algebra, vec_add(self.coords, other.coords))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same_parent(other)
        return AlgebraElement(self.algebra, vec_sub(self.coords, other.coords))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, vec_scale(-1, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        terms = [f"{c}*{name}" for c, name in zip(self.coords, self.algebra.basis_names) if c]
        return " + ".join(terms) if terms else "0"


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._same_parent(b)
    return AlgebraElement(a.algebra, a.algebra.product(a.coords, b.coords))


def validate(alg: Algebra) -> Dict[str, Any]:
    """
    Check associativity on every basis triple, then the two-sided unit law

    Returns {"valid": True} or a structured violation naming the first failing
    triple (lexicographic) or basis index; never raises on bad constants.
    """
    n = alg.dim
    e = [alg.basis_vector(i) for i in range(n)]
    products = [[alg.product(e[i], e[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = alg.product(products[i][j], e[k])
                rhs = alg.product(e[i], products[j][k])
                if lhs != rhs:
                    return {
                        "valid": False,
                        "violation": "associativity",
                        "triple": [i, j, k],
                        "names": [alg.basis_names[i], alg.basis_names[j], alg.basis_names[k]],
                        "lhs": [str(v) for v in lhs],
                        "rhs": [str(v) for v in rhs],
                    }
    for i in range(n):
        left = alg.product(alg.unit, e[i])
        right = alg.product(e[i], alg.unit)
        if left != e[i] or right != e[i]:
            return {
                "valid": False,
                "violation": "unit",
                "index": i,
                "name": alg.basis_names[i],
                "unit_times_e": [str(v) for v in left],
                "e_times_unit": [str(v) for v in right],
            }
    return {"valid": True}


def commutant(alg: Algebra, subset: Subspace) -> Subspace:
    """{x : x*s = s*x for every s in subset}"""
    rows = []
    for s in subset.vectors():
        # x*s - s*x = (R_s - L_s) x
        diff = alg.right_matrix(s) - alg.left_matrix(s)
        rows.extend(diff.row_items(k) for k in range(alg.dim))
    return nullspace_of_rows(rows, alg.dim)


def center(alg: Algebra) -> Subspace:
    rows = []
    for i in range(alg.dim):
        diff = alg.right_basis_matrices[i] - alg.left_basis_matrices[i]
        rows.extend(diff.row_items(k) for k in range(alg.dim))
    return nullspace_of_rows(rows, alg.dim)


def trace_form(alg: Algebra) -> Matrix:
    """Gram matrix T[i][j] = trace(L_{e_i} L_{e_j})"""
    n = alg.dim
    left = alg.left_basis_matrices
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = left[i] @ left[j]
            row.append(sum((prod[k, k] for k in range(n)), ZERO))
        rows.append(row)
    return Matrix.from_rows(rows, cols=n)


def radical(alg: Algebra) -> Subspace:
    """Kernel of the trace form; equals the Jacobson radical in characteristic 0"""
    form = trace_form(alg)
    return nullspace_of_rows((form.row_items(i) for i in range(form.rows)), alg.dim)


def is_semisimple(alg: Algebra) -> bool:
    return radical(alg).is_zero()


def is_subalgebra(alg: Algebra, space: Subspace) -> bool:
    """Contains the unit and is closed under products of basis vectors"""
    if not space.contains_vector(alg.unit):
        return False
    vectors = space.vectors()
    return all(space.contains_vector(alg.product(x, y)) for x in vectors for y in vectors)


def subalgebra_closure(alg: Algebra, gens: Iterable[Any] = ()) -> Subspace:
    """
    Smallest unital subalgebra containing gens (AlgebraElements or coordinate vectors)

    Iterates span-and-multiply until the dimension stops growing.
    """
    vectors = [alg.unit]
    for g in gens:
        if isinstance(g, AlgebraElement):
            if g.algebra != alg:
                raise ParentMismatch("generator belongs to a different algebra")
            vectors.append(g.coords)
        else:
            vectors.append(tuple(as_rational(v) for v in g))
    space = Subspace.span(vectors, alg.dim)
    while True:
        basis = space.vectors()
        grown = Subspace.span(basis + [alg.product(x, y) for x in basis for y in basis], alg.dim)
        if grown.dim == space.dim:
            return space
        space = grown


def is_commutative(alg: Algebra) -> bool:
    return center(alg).is_full()
