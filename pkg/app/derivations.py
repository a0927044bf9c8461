"""
Derivations, polars and differential algebras

A linear self-map of the algebra is stored as an n x n matrix whose column i
holds the coordinates of the image of e_i; flattened row-major it is a vector
in Q^(n*n), and every space of derivations is a Subspace of that.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import List, Optional, Sequence, Tuple

from app.algebra import Algebra, AlgebraElement, center
from app.errors import ConsistencyError, DimensionMismatch, NotADerivation, ParentMismatch
from app.linalg import (
    Matrix,
    Subspace,
    Vector,
    as_rational,
    contains,
    intersect,
    nullspace_of_rows,
    vec_add,
)
from app.logger import log_error, log_pipeline_step


@dataclass(frozen=True)
class LinearEndo:
    algebra: Algebra
    matrix: Matrix

    def __post_init__(self):
        n = self.algebra.dim
        if (self.matrix.rows, self.matrix.cols) != (n, n):
            raise DimensionMismatch(f"{self.matrix.rows}x{self.matrix.cols} matrix for a {n}-dimensional algebra")

    @classmethod
    def from_flat(cls, alg: Algebra, coords: Sequence) -> "LinearEndo":
        return cls(alg, Matrix(alg.dim, alg.dim, tuple(as_rational(v) for v in coords)))

    def flat(self) -> Vector:
        return self.matrix.entries

    def apply(self, x: Sequence) -> Vector:
        return self.matrix.apply(x)

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        if a.algebra != self.algebra:
            raise ParentMismatch("map and element belong to different algebras")
        return AlgebraElement(self.algebra, self.apply(a.coords))

    def compose(self, other: "LinearEndo") -> "LinearEndo":
        """self after other"""
        return LinearEndo(self.algebra, self.matrix @ other.matrix)

    def leibniz_violation(self) -> Optional[Tuple[int, int]]:
        """First basis pair (i, j) with v(e_i e_j) != v(e_i) e_j + e_i v(e_j)"""
        alg = self.algebra
        n = alg.dim
        images = [self.matrix.column(i) for i in range(n)]
        for i in range(n):
            ei = alg.basis_vector(i)
            for j in range(n):
                ej = alg.basis_vector(j)
                lhs = self.apply(alg.structure_constants[i][j])
                rhs = vec_add(alg.product(images[i], ej), alg.product(ei, images[j]))
                if lhs != rhs:
                    return (i, j)
        return None

    def is_derivation(self) -> bool:
        return self.leibniz_violation() is None

    def as_derivation(self) -> "Derivation":
        return Derivation(self.algebra, self.matrix)


@dataclass(frozen=True)
class Derivation(LinearEndo):
    """A LinearEndo that satisfies the Leibniz rule, checked at construction"""

    def __post_init__(self):
        super().__post_init__()
        pair = self.leibniz_violation()
        if pair is not None:
            names = self.algebra.basis_names
            raise NotADerivation(
                f"Leibniz rule fails on ({names[pair[0]]}, {names[pair[1]]})", pair
            )


@lru_cache(maxsize=64)
def der_basis(alg: Algebra) -> Subspace:
    """
    Der A as the nullspace of v(e_i e_j) - v(e_i) e_j - e_i v(e_j) = 0

    Unknown x[k*n + l] is the coefficient of e_k in v(e_l); one equation per (i, j, k).
    """
    n = alg.dim
    table = alg._sparse_table
    rows = []
    for i in range(n):
        for j in range(n):
            acc = [dict() for _ in range(n)]
            for l, c in table[i][j]:
                for k in range(n):
                    idx = k * n + l
                    acc[k][idx] = acc[k].get(idx, 0) + c
            for l in range(n):
                # v(e_i) e_j: sum_l x[l*n + i] c[l][j][k]
                for k, c in table[l][j]:
                    idx = l * n + i
                    acc[k][idx] = acc[k].get(idx, 0) - c
                # e_i v(e_j): sum_l x[l*n + j] c[i][l][k]
                for k, c in table[i][l]:
                    idx = l * n + j
                    acc[k][idx] = acc[k].get(idx, 0) - c
            rows.extend(acc[k].items() for k in range(n))
    return nullspace_of_rows(rows, n * n)


def endos_of(alg: Algebra, space: Subspace) -> List[LinearEndo]:
    return [LinearEndo.from_flat(alg, v) for v in space.vectors()]


def inner_derivation(x: AlgebraElement) -> Derivation:
    """ad_x : b -> x*b - b*x"""
    alg = x.algebra
    return Derivation(alg, alg.left_matrix(x.coords) - alg.right_matrix(x.coords))


def bracket(u: LinearEndo, v: LinearEndo) -> Derivation:
    """[u, v] = uv - vu; the result is checked against the Leibniz rule"""
    if u.algebra != v.algebra:
        raise ParentMismatch("derivations of different algebras")
    return Derivation(u.algebra, (u.matrix @ v.matrix) - (v.matrix @ u.matrix))


def element_action(a: AlgebraElement, v: LinearEndo) -> LinearEndo:
    """The map b -> a * v(b); a derivation only when a is central"""
    if a.algebra != v.algebra:
        raise ParentMismatch("element and map belong to different algebras")
    return LinearEndo(v.algebra, a.algebra.left_matrix(a.coords) @ v.matrix)


def polar_of_elements(alg: Algebra, subset: Subspace) -> Subspace:
    """{v in Der A : v b = 0 for all b in subset}"""
    n = alg.dim
    rows = []
    for b in subset.vectors():
        for k in range(n):
            rows.append([(k * n + i, c) for i, c in enumerate(b) if c])
    killers = nullspace_of_rows(rows, n * n)
    return intersect(der_basis(alg), killers)


def polar_of_derivations(alg: Algebra, space: Subspace) -> Subspace:
    """{a in A : v a = 0 for all v in space}"""
    n = alg.dim
    rows = []
    for w in space.vectors():
        m = Matrix(n, n, w)
        rows.extend(m.row_items(k) for k in range(n))
    return nullspace_of_rows(rows, n)


@dataclass(frozen=True)
class DiffAlgebra:
    """
    A pair (A, V) with V = V^cc, plus the centre Z, the constants C = V^c and
    z_action_table[alpha][i] = coordinates of s_alpha * v_i in the basis of V
    """
    algebra: Algebra
    vspace: Subspace
    center: Subspace
    constants: Subspace
    z_action_table: Tuple[Tuple[Vector, ...], ...]

    @property
    def dim(self) -> int:
        return self.vspace.dim

    @cached_property
    def vectors(self) -> Tuple[LinearEndo, ...]:
        return tuple(endos_of(self.algebra, self.vspace))

    @cached_property
    def center_basis(self) -> Tuple[Vector, ...]:
        return tuple(self.center.vectors())

    def coordinates(self, endo: LinearEndo) -> Optional[Vector]:
        """Coordinates of a map in the basis of V, or None if it is not in V"""
        return self.vspace.coordinates(endo.flat())


def _z_action_table(alg: Algebra, vspace: Subspace, z: Subspace) -> Tuple[Tuple[Vector, ...], ...]:
    vectors = endos_of(alg, vspace)
    table = []
    for alpha, s in enumerate(z.vectors()):
        left = alg.left_matrix(s)
        row = []
        for i, v in enumerate(vectors):
            coords = vspace.coordinates((left @ v.matrix).entries)
            if coords is None:
                witness = {"center_index": alpha, "vector_index": i}
                log_error("Central multiple of a vector left V", "Z-module closure", witness)
                raise ConsistencyError("Z-module", f"s_{alpha} * v_{i} is not in V", witness)
            row.append(coords)
        table.append(tuple(row))
    return tuple(table)


def make_diff_algebra(alg: Algebra, seed: Subspace) -> DiffAlgebra:
    """
    Close a seed space of derivations under the double polar and cache Z, C
    and the Z-action on V
    """
    n = alg.dim
    der = der_basis(alg)
    if not contains(der, seed):
        for w in seed.vectors():
            endo = LinearEndo.from_flat(alg, w)
            pair = endo.leibniz_violation()
            if pair is not None:
                names = alg.basis_names
                raise NotADerivation(f"seed map fails the Leibniz rule on ({names[pair[0]]}, {names[pair[1]]})", pair)
    constants_of_seed = polar_of_derivations(alg, seed)
    vspace = polar_of_elements(alg, constants_of_seed)
    constants = polar_of_derivations(alg, vspace)
    z = center(alg)
    table = _z_action_table(alg, vspace, z)
    log_pipeline_step("diff_algebra", {
        "algebra_dim": n,
        "seed_dim": seed.dim,
        "v_dim": vspace.dim,
        "constants_dim": constants.dim,
        "center_dim": z.dim,
    })
    return DiffAlgebra(alg, vspace, z, constants, table)


def from_constants(alg: Algebra, constants: Subspace) -> DiffAlgebra:
    """The differential algebra with V = constants^c"""
    return make_diff_algebra(alg, polar_of_elements(alg, constants))


def full_diff_algebra(alg: Algebra) -> DiffAlgebra:
    """V = Der A"""
    return make_diff_algebra(alg, der_basis(alg))
