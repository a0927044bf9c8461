"""
Covectors, differential forms and the double dual

Coordinates used throughout:
  - a covector omega is the table of its values on the basis v_1..v_m of V,
    a vector in Q^(m*n) whose block i is omega(v_i);
  - V+ is a Subspace of Q^(m*n); "V+ coordinates" are coefficients in its
    canonical basis omega_1..omega_p;
  - an element w of the double dual is the table of its values on
    omega_1..omega_p, a vector in Q^(p*n); "V^x coordinates" are coefficients
    in the canonical basis w_1..w_q.
Bimodule actions are p x p matrices whose column mu holds the V+ coordinates
of e*omega_mu (or omega_mu*e).
"""

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from app.algebra import Algebra, AlgebraElement
from app.derivations import DiffAlgebra, LinearEndo
from app.errors import ConsistencyError, DimensionMismatch, ParentMismatch
from app.linalg import (
    Matrix,
    Subspace,
    Vector,
    ZERO,
    column_space,
    equals,
    intersect,
    nullspace,
    nullspace_of_rows,
)
from app.logger import log_error, log_pipeline_step


def _block(values: Sequence, i: int, n: int) -> Tuple:
    return tuple(values[i * n:(i + 1) * n])


def _fail(proposition: str, message: str, witness=None):
    log_error("Internal consistency check failed", message, {"proposition": proposition, "witness": witness})
    raise ConsistencyError(proposition, message, witness)


def _add(row: Dict[int, object], col: int, value):
    row[col] = row.get(col, 0) + value


def _center_rows(alg: Algebra, offset: int) -> List[List[Tuple[int, object]]]:
    """Equations saying the block starting at `offset` is central"""
    rows = []
    for t in range(alg.dim):
        diff = alg.right_basis_matrices[t] - alg.left_basis_matrices[t]
        for k in range(alg.dim):
            rows.append([(offset + c, v) for c, v in diff.row_items(k)])
    return rows


@dataclass(frozen=True)
class Covector:
    diff_algebra: DiffAlgebra
    values: Vector

    def __post_init__(self):
        expected = self.diff_algebra.dim * self.diff_algebra.algebra.dim
        if len(self.values) != expected:
            raise DimensionMismatch(f"covector table of length {len(self.values)}, expected {expected}")

    def value(self, i: int) -> Vector:
        """omega(v_i)"""
        return _block(self.values, i, self.diff_algebra.algebra.dim)

    def evaluate(self, v_coords: Sequence) -> Vector:
        """omega at the vector with the given coordinates in the basis of V"""
        n = self.diff_algebra.algebra.dim
        acc = [ZERO] * n
        for i, c in enumerate(v_coords):
            if c:
                for k, x in enumerate(self.value(i)):
                    acc[k] += c * x
        return tuple(acc)

    def left(self, a: Sequence) -> "Covector":
        """(a omega)(v) = a * omega(v)"""
        alg = self.diff_algebra.algebra
        m = self.diff_algebra.dim
        return Covector(self.diff_algebra, tuple(
            x for i in range(m) for x in alg.product(a, self.value(i))
        ))

    def right(self, a: Sequence) -> "Covector":
        """(omega a)(v) = omega(v) * a"""
        alg = self.diff_algebra.algebra
        m = self.diff_algebra.dim
        return Covector(self.diff_algebra, tuple(
            x for i in range(m) for x in alg.product(self.value(i), a)
        ))

    def z_linearity_violation(self) -> Optional[Tuple[int, int]]:
        """First (alpha, i) with omega(s_alpha v_i) != s_alpha omega(v_i)"""
        da = self.diff_algebra
        alg = da.algebra
        for alpha, s in enumerate(da.center_basis):
            for i in range(da.dim):
                lhs = self.evaluate(da.z_action_table[alpha][i])
                rhs = alg.product(s, self.value(i))
                if lhs != rhs:
                    return (alpha, i)
        return None

    def is_z_linear(self) -> bool:
        return self.z_linearity_violation() is None


@dataclass(frozen=True)
class CovectorModule:
    """V+ = Hom_Z(V, A) with its A-bimodule structure and the forms Omega"""
    diff_algebra: DiffAlgebra
    basis: Subspace
    left_action: Tuple[Matrix, ...]
    right_action: Tuple[Matrix, ...]
    forms: Optional[Subspace] = None

    @property
    def dim(self) -> int:
        return self.basis.dim

    @cached_property
    def basis_covectors(self) -> Tuple[Covector, ...]:
        return tuple(Covector(self.diff_algebra, v) for v in self.basis.vectors())

    @cached_property
    def differential_matrix(self) -> Matrix:
        """p x n; column f holds the V+ coordinates of d(e_f)"""
        da = self.diff_algebra
        columns = []
        for f in range(da.algebra.dim):
            cov = differential(da, da.algebra.basis_element(f))
            coords = self.coordinates(cov)
            if coords is None:
                _fail("differential", f"d({da.algebra.basis_names[f]}) is not Z-linear", {"basis_index": f})
            columns.append(coords)
        return Matrix.from_columns(columns, self.dim)

    def coordinates(self, cov: Covector) -> Optional[Vector]:
        return self.basis.coordinates(cov.values)

    def covector(self, coords: Sequence) -> Covector:
        return Covector(self.diff_algebra, self.basis.combine(coords))

    def left_matrix(self, a: Sequence) -> Matrix:
        return _combine_matrices(a, self.left_action, self.dim)

    def right_matrix(self, a: Sequence) -> Matrix:
        return _combine_matrices(a, self.right_action, self.dim)


def _combine_matrices(coeffs: Sequence, matrices: Sequence[Matrix], size: int) -> Matrix:
    acc = Matrix.zeros(size, size)
    for c, m in zip(coeffs, matrices):
        if c:
            acc = acc + m.scale(c)
    return acc


def _vplus_rows(da: DiffAlgebra) -> List[List[Tuple[int, object]]]:
    """Z-linearity: sum_k t[alpha][i][k] omega_k - s_alpha omega_i = 0"""
    alg = da.algebra
    n = alg.dim
    rows = []
    for alpha, s in enumerate(da.center_basis):
        left = alg.left_matrix(s)
        for i in range(da.dim):
            coeffs = da.z_action_table[alpha][i]
            for r in range(n):
                row: Dict[int, object] = {}
                for k, c in enumerate(coeffs):
                    if c:
                        _add(row, k * n + r, c)
                for col, v in left.row_items(r):
                    _add(row, i * n + col, -v)
                rows.append(list(row.items()))
    return rows


def _action_matrices(da: DiffAlgebra, basis: Subspace, side: str) -> Tuple[Matrix, ...]:
    alg = da.algebra
    n = alg.dim
    m = da.dim
    mats = alg.left_basis_matrices if side == "left" else alg.right_basis_matrices
    vectors = basis.vectors()
    out = []
    for e, mult in enumerate(mats):
        columns = []
        for mu, omega in enumerate(vectors):
            moved = tuple(x for i in range(m) for x in mult.apply(_block(omega, i, n)))
            coords = basis.coordinates(moved)
            if coords is None:
                _fail("bimodule", f"{side} action of {alg.basis_names[e]} leaves V+",
                      {"element_index": e, "covector_index": mu, "side": side})
            columns.append(coords)
        out.append(Matrix.from_columns(columns, basis.dim))
    return tuple(out)


def build_vplus(da: DiffAlgebra) -> CovectorModule:
    """V+ as the nullspace of the Z-linearity constraints inside Hom_K(V, A)"""
    n = da.algebra.dim
    basis = nullspace_of_rows(_vplus_rows(da), da.dim * n)
    cm = CovectorModule(
        diff_algebra=da,
        basis=basis,
        left_action=_action_matrices(da, basis, "left"),
        right_action=_action_matrices(da, basis, "right"),
    )
    cm = replace(cm, forms=build_forms(cm))
    log_pipeline_step("covectors", {"vplus_dim": cm.dim, "forms_dim": cm.forms.dim})
    return cm


def build_vstar(da: DiffAlgebra) -> Subspace:
    """V* = Hom_Z(V, Z): covectors whose values are central"""
    n = da.algebra.dim
    rows = _vplus_rows(da)
    for i in range(da.dim):
        rows.extend(_center_rows(da.algebra, i * n))
    return nullspace_of_rows(rows, da.dim * n)


def build_vstar_star(da: DiffAlgebra, vstar: Optional[Subspace] = None) -> Tuple[Subspace, Matrix]:
    """
    The classical bidual V** = Hom_Z(V*, Z) and the canonical map kappa: V -> V**

    kappa(v)(phi) = phi(v). Returns (V** inside Q^(dim V* * n), matrix of kappa).
    """
    alg = da.algebra
    n = alg.dim
    if vstar is None:
        vstar = build_vstar(da)
    phis = vstar.vectors()
    d = vstar.dim
    rows = []
    for mu in range(d):
        rows.extend(_center_rows(alg, mu * n))
    for alpha, s in enumerate(da.center_basis):
        columns = []
        for mu, phi in enumerate(phis):
            moved = tuple(x for i in range(da.dim) for x in alg.product(_block(phi, i, n), s))
            coords = vstar.coordinates(moved)
            if coords is None:
                _fail("V*", "right Z-action leaves V*", {"center_index": alpha, "covector_index": mu})
            columns.append(coords)
        action = Matrix.from_columns(columns, d)
        right_s = alg.right_matrix(s)
        for mu in range(d):
            for r in range(n):
                row: Dict[int, object] = {}
                for nu, c in action.column_items(mu):
                    _add(row, nu * n + r, c)
                for col, v in right_s.row_items(r):
                    _add(row, mu * n + col, -v)
                rows.append(list(row.items()))
    bidual = nullspace_of_rows(rows, d * n)
    columns = []
    for l in range(da.dim):
        values = tuple(x for phi in phis for x in _block(phi, l, n))
        coords = bidual.coordinates(values)
        if coords is None:
            _fail("V**", "canonical image of a vector is not Z-linear", {"vector_index": l})
        columns.append(coords)
    kappa = Matrix.from_columns(columns, bidual.dim)
    return bidual, kappa


def differential(da: DiffAlgebra, a: AlgebraElement) -> Covector:
    """da : v -> v(a)"""
    if a.algebra != da.algebra:
        raise ParentMismatch("element does not belong to the differential algebra")
    return Covector(da, tuple(x for v in da.vectors for x in v.apply(a.coords)))


def build_forms(cm: CovectorModule) -> Subspace:
    """Omega = span of e_r * d(e_f) * e_g, in V+ coordinates"""
    n = cm.diff_algebra.algebra.dim
    dmat = cm.differential_matrix
    vectors = []
    for f in range(n):
        df = dmat.column(f)
        for r in range(n):
            left = cm.left_action[r].apply(df)
            for g in range(n):
                vectors.append(cm.right_action[g].apply(left))
    return Subspace.span(vectors, cm.dim)


def noncommuting_witness(cm: CovectorModule) -> Optional[Dict[str, object]]:
    """A basis element a and basis covector omega with a*omega != omega*a"""
    alg = cm.diff_algebra.algebra
    for e in range(alg.dim):
        left, right = cm.left_action[e], cm.right_action[e]
        for mu in range(cm.dim):
            if left.column(mu) != right.column(mu):
                return {"element": alg.basis_names[e], "element_index": e, "covector_index": mu}
    return None


def pairing(da: DiffAlgebra, v: LinearEndo, omega: Covector) -> AlgebraElement:
    """<v, omega> = omega(v)"""
    coords = da.coordinates(v)
    if coords is None:
        raise ValueError("map is not a vector of the differential algebra")
    return AlgebraElement(da.algebra, omega.evaluate(coords))


@dataclass(frozen=True)
class DoubleDual:
    """
    V^x = Hom_{A,A}(V+, A) with the Z-bimodule actions, j, pi and N = Ker pi

    j_matrix is q x m, pi_matrix is m x q, n_space lives in V^x coordinates.
    """
    covectors: CovectorModule
    basis: Subspace
    z_left: Tuple[Matrix, ...]
    z_right: Tuple[Matrix, ...]
    j_matrix: Optional[Matrix] = None
    pi_matrix: Optional[Matrix] = None
    n_space: Optional[Subspace] = None

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def diff_algebra(self) -> DiffAlgebra:
        return self.covectors.diff_algebra

    def values(self, coords: Sequence) -> Vector:
        """Value table (block mu = w(omega_mu)) of the element with these coordinates"""
        return self.basis.combine(coords)


def _bilinearity_rows(alg: Algebra, left_action: Sequence[Matrix], right_action: Sequence[Matrix], size: int):
    """w(e x) = e w(x) and w(x e) = w(x) e on every basis pair"""
    n = alg.dim
    rows = []
    for e in range(n):
        for action, mult in ((left_action[e], alg.left_basis_matrices[e]),
                             (right_action[e], alg.right_basis_matrices[e])):
            for mu in range(size):
                column = action.column_items(mu)
                for r in range(n):
                    row: Dict[int, object] = {}
                    for nu, c in column:
                        _add(row, nu * n + r, c)
                    for col, v in mult.row_items(r):
                        _add(row, mu * n + col, -v)
                    rows.append(list(row.items()))
    return rows


def bilinear_maps(alg: Algebra, left_action: Sequence[Matrix], right_action: Sequence[Matrix], size: int) -> Subspace:
    """A-bilinear maps from a bimodule of dimension `size` (given by its action matrices) to A"""
    return nullspace_of_rows(_bilinearity_rows(alg, left_action, right_action, size), size * alg.dim)


def _z_actions(dd_basis: Subspace, cm: CovectorModule, side: str) -> Tuple[Matrix, ...]:
    alg = cm.diff_algebra.algebra
    n = alg.dim
    out = []
    for alpha, s in enumerate(cm.diff_algebra.center_basis):
        columns = []
        for r, w in enumerate(dd_basis.vectors()):
            if side == "left":
                moved = tuple(x for mu in range(cm.dim) for x in alg.product(s, _block(w, mu, n)))
            else:
                moved = tuple(x for mu in range(cm.dim) for x in alg.product(_block(w, mu, n), s))
            coords = dd_basis.coordinates(moved)
            if coords is None:
                _fail("z-bimodule", f"{side} action of a central element leaves V^x",
                      {"center_index": alpha, "basis_index": r})
            columns.append(coords)
        out.append(Matrix.from_columns(columns, dd_basis.dim))
    return tuple(out)


def build_double_dual(cm: CovectorModule) -> DoubleDual:
    alg = cm.diff_algebra.algebra
    basis = bilinear_maps(alg, cm.left_action, cm.right_action, cm.dim)
    dd = DoubleDual(
        covectors=cm,
        basis=basis,
        z_left=_z_actions(basis, cm, "left"),
        z_right=_z_actions(basis, cm, "right"),
    )
    dd = replace(dd, j_matrix=j_map(dd))
    dd = replace(dd, pi_matrix=pi_map(dd))
    _, n_space = decompose(dd)
    dd = replace(dd, n_space=n_space)
    log_pipeline_step("double_dual", {"double_dual_dim": dd.dim, "n_dim": n_space.dim})
    return dd


def j_map(dd: DoubleDual) -> Matrix:
    """Matrix of j: V -> V^x, jv = <v, .>; asserted injective"""
    cm = dd.covectors
    da = cm.diff_algebra
    n = da.algebra.dim
    omegas = cm.basis.vectors()
    columns = []
    for i in range(da.dim):
        values = tuple(x for omega in omegas for x in _block(omega, i, n))
        coords = dd.basis.coordinates(values)
        if coords is None:
            _fail("pi-retracts-j", f"j(v_{i}) is not A-bilinear", {"vector_index": i})
        columns.append(coords)
    j = Matrix.from_columns(columns, dd.dim)
    if j.rank() != da.dim:
        kernel = nullspace(j)
        _fail("pi-retracts-j", "j has a nontrivial kernel", [str(x) for x in kernel.vectors()[0]])
    return j


def pi_map(dd: DoubleDual) -> Matrix:
    """
    Matrix of pi: V^x -> V, pi(w)(a) = w(da)

    Each image is checked to be a derivation lying in V, and pi o j = 1 is asserted.
    """
    cm = dd.covectors
    da = cm.diff_algebra
    alg = da.algebra
    n = alg.dim
    dmat = cm.differential_matrix
    columns = []
    for r, w in enumerate(dd.basis.vectors()):
        images = []
        for f in range(n):
            acc = [ZERO] * n
            for mu, c in dmat.column_items(f):
                for k, x in enumerate(_block(w, mu, n)):
                    if x:
                        acc[k] += c * x
            images.append(tuple(acc))
        endo = LinearEndo(alg, Matrix.from_columns(images, n))
        pair = endo.leibniz_violation()
        if pair is not None:
            _fail("pi-retracts-j", f"pi(w_{r}) is not a derivation", {"basis_index": r, "pair": list(pair)})
        coords = da.coordinates(endo)
        if coords is None:
            _fail("pi-retracts-j", f"pi(w_{r}) does not lie in V", {"basis_index": r})
        columns.append(coords)
    pi = Matrix.from_columns(columns, da.dim)
    if dd.j_matrix is not None and not (pi @ dd.j_matrix).is_identity():
        _fail("pi-retracts-j", "pi o j is not the identity on V")
    return pi


def evaluation_rows(dd: DoubleDual, omega_coords: Sequence) -> List[List[Tuple[int, object]]]:
    """
    Rows of the linear map y -> w_y(omega) (n rows over the V^x coordinates y)
    """
    n = dd.diff_algebra.algebra.dim
    columns = []
    for w in dd.basis.vectors():
        acc = [ZERO] * n
        for mu, c in enumerate(omega_coords):
            if c:
                for k, x in enumerate(_block(w, mu, n)):
                    if x:
                        acc[k] += c * x
        columns.append(acc)
    return [[(r, col[k]) for r, col in enumerate(columns) if col[k]] for k in range(n)]


def annihilator_in_double_dual(dd: DoubleDual, space: Subspace) -> Subspace:
    """{w in V^x : w(omega) = 0 for all omega in space}, space given in V+ coordinates"""
    rows = []
    for x in space.vectors():
        rows.extend(evaluation_rows(dd, x))
    return nullspace_of_rows(rows, dd.dim)


def annihilator_in_covectors(dd: DoubleDual, space: Subspace) -> Subspace:
    """{omega in V+ : w(omega) = 0 for all w in space}, space given in V^x coordinates"""
    cm = dd.covectors
    n = cm.diff_algebra.algebra.dim
    rows = []
    for y in space.vectors():
        values = dd.values(y)
        for k in range(n):
            rows.append([(mu, values[mu * n + k]) for mu in range(cm.dim) if values[mu * n + k]])
    return nullspace_of_rows(rows, cm.dim)


def annihilator_of_forms(dd: DoubleDual) -> Subspace:
    return annihilator_in_double_dual(dd, dd.covectors.forms)


def decompose(dd: DoubleDual) -> Tuple[Subspace, Subspace]:
    """
    V^x = Im j (+) N with N = Ker pi; checks the idempotent j o pi and N = Ann Omega
    """
    j, pi = dd.j_matrix, dd.pi_matrix
    image_j = column_space(j)
    n_space = nullspace(pi)
    if not intersect(image_j, n_space).is_zero():
        _fail("decomposition", "Im j and N intersect")
    if image_j.dim + n_space.dim != dd.dim:
        _fail("decomposition", "dim Im j + dim N != dim V^x",
              {"image_dim": image_j.dim, "n_dim": n_space.dim, "double_dual_dim": dd.dim})
    projector = j @ pi
    if projector @ projector != projector:
        _fail("decomposition", "j o pi is not idempotent")
    if not equals(annihilator_of_forms(dd), n_space):
        _fail("ann-forms", "Ker pi differs from Ann Omega")
    return image_j, n_space
