"""
Regular covectors, the restriction homomorphism and the reflexivity verdict
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app.algebra import is_semisimple
from app.derivations import DiffAlgebra, LinearEndo
from app.duality import (
    Covector,
    CovectorModule,
    DoubleDual,
    annihilator_in_covectors,
    annihilator_of_forms,
    bilinear_maps,
    build_double_dual,
    build_vplus,
)
from app.errors import ConsistencyError
from app.linalg import (
    Matrix,
    Subspace,
    Vector,
    ZERO,
    contains,
    equals,
    inverse,
    nullspace,
    quotient_map,
    unit_vector,
)
from app.logger import log_error, log_pipeline_step, log_warning


def _fail(proposition: str, message: str, witness=None):
    log_error("Internal consistency check failed", message, {"proposition": proposition, "witness": witness})
    raise ConsistencyError(proposition, message, witness)


def regular_covectors(dd: DoubleDual) -> Subspace:
    """
    R = {omega in V+ : n(omega) = 0 for all n in N}, in V+ coordinates

    Also computed as Ann(Ann Omega); the two must agree and contain Omega.
    """
    r = annihilator_in_covectors(dd, dd.n_space)
    double_ann = annihilator_in_covectors(dd, annihilator_of_forms(dd))
    if not equals(r, double_ann):
        _fail("ann-forms", "Ann N differs from Ann(Ann Omega)")
    if not contains(r, dd.covectors.forms):
        _fail("ann-forms", "Omega is not contained in R")
    log_pipeline_step("regular_covectors", {"r_dim": r.dim, "vplus_dim": dd.covectors.dim})
    return r


@dataclass(frozen=True)
class RestrictionData:
    """
    R inside V+, R+ = Hom_{A,A}(R, A) and beta: V^x -> R+

    R+ elements are value tables on the canonical basis of R; beta is
    dim R+ x dim V^x.
    """
    r_space: Subspace
    r_plus: Subspace
    beta: Matrix
    left_action: Tuple[Matrix, ...]
    right_action: Tuple[Matrix, ...]


def _restricted_actions(cm: CovectorModule, r: Subspace, side: str) -> Tuple[Matrix, ...]:
    actions = cm.left_action if side == "left" else cm.right_action
    out = []
    for e, action in enumerate(actions):
        columns = []
        for t, x in enumerate(r.vectors()):
            coords = r.coordinates(action.apply(x))
            if coords is None:
                _fail("beta-kernel", f"R is not stable under the {side} action",
                      {"element_index": e, "r_basis_index": t, "side": side})
            columns.append(coords)
        out.append(Matrix.from_columns(columns, r.dim))
    return tuple(out)


def build_r_plus(dd: DoubleDual, r: Subspace) -> RestrictionData:
    cm = dd.covectors
    alg = cm.diff_algebra.algebra
    n = alg.dim
    left = _restricted_actions(cm, r, "left")
    right = _restricted_actions(cm, r, "right")
    r_plus = bilinear_maps(alg, left, right, r.dim)

    r_vectors = r.vectors()
    columns = []
    for l, w in enumerate(dd.basis.vectors()):
        values = []
        for x in r_vectors:
            acc = [ZERO] * n
            for mu, c in enumerate(x):
                if c:
                    for k in range(n):
                        if w[mu * n + k]:
                            acc[k] += c * w[mu * n + k]
            values.extend(acc)
        coords = r_plus.coordinates(values)
        if coords is None:
            _fail("beta-kernel", f"restriction of w_{l} to R is not A-bilinear", {"basis_index": l})
        columns.append(coords)
    beta = Matrix.from_columns(columns, r_plus.dim) if columns else Matrix.zeros(r_plus.dim, 0)

    if not equals(nullspace(beta), dd.n_space):
        _fail("beta-kernel", "Ker beta differs from N",
              {"beta_kernel_dim": nullspace(beta).dim, "n_dim": dd.n_space.dim})
    log_pipeline_step("restriction", {"r_plus_dim": r_plus.dim, "beta_rank": beta.rank()})
    return RestrictionData(r, r_plus, beta, left, right)


def retraction(dd: DoubleDual, rd: RestrictionData) -> Matrix:
    """
    pi_R: R+ -> V, pi_R(x)(a) = x(da); dim V x dim R+
    """
    cm = dd.covectors
    da = cm.diff_algebra
    alg = da.algebra
    n = alg.dim
    dmat = cm.differential_matrix
    d_in_r = []
    for f in range(n):
        coords = rd.r_space.coordinates(dmat.column(f))
        if coords is None:
            _fail("retraction", f"d({alg.basis_names[f]}) is not a regular covector", {"basis_index": f})
        d_in_r.append(coords)
    columns = []
    for t, x in enumerate(rd.r_plus.vectors()):
        images = []
        for f in range(n):
            acc = [ZERO] * n
            for s, c in enumerate(d_in_r[f]):
                if c:
                    for k in range(n):
                        if x[s * n + k]:
                            acc[k] += c * x[s * n + k]
            images.append(acc)
        endo = LinearEndo(alg, Matrix.from_columns(images, n))
        coords = da.coordinates(endo)
        if coords is None:
            _fail("retraction", f"pi_R of R+ basis element {t} is not in V", {"basis_index": t})
        columns.append(coords)
    return Matrix.from_columns(columns, da.dim) if columns else Matrix.zeros(da.dim, 0)


def factor_beta(dd: DoubleDual, rd: RestrictionData) -> Tuple[Matrix, Matrix]:
    """
    beta = i o rho with rho: V^x -> V^x/N and i injective; also checks that
    the retraction pi_R satisfies pi_R o i = id on V = V^x/N
    """
    rho = quotient_map(dd.n_space)
    free = [c for c in range(dd.dim) if c not in set(dd.n_space.pivots)]
    i_mono = Matrix.from_columns([rd.beta.column(f) for f in free], rd.beta.rows) \
        if free else Matrix.zeros(rd.beta.rows, 0)
    if i_mono @ rho != rd.beta:
        _fail("beta-kernel", "i o rho differs from beta")
    if i_mono.rank() != len(free):
        _fail("beta-kernel", "i is not injective", {"rank": i_mono.rank(), "quotient_dim": len(free)})

    pi_r = retraction(dd, rd)
    identity = pi_r @ i_mono @ rho @ dd.j_matrix
    if not identity.is_identity():
        _fail("retraction", "pi_R o i is not the identity on V")
    log_pipeline_step("beta_factorisation", {"quotient_dim": len(free), "i_rank": i_mono.rank()})
    return rho, i_mono


def check_free_basis(
    da: DiffAlgebra,
    claimed_basis: Sequence[Any],
    dd: Optional[DoubleDual] = None,
) -> Dict[str, Any]:
    """
    Verify that claimed_basis is a free Z-basis of V and build its dual basis

    Elements may be LinearEndo values or flattened n x n matrices. Returns
    {"free": bool, "success": bool, ...}; a failed freeness test carries a
    witness relation sum s_i g_i = 0, a failed verification an "error".
    """
    alg = da.algebra
    n = alg.dim
    m = da.dim
    zdim = da.center.dim
    center = da.center_basis

    coords = []
    for idx, g in enumerate(claimed_basis):
        flat = g.flat() if isinstance(g, LinearEndo) else tuple(g)
        c = da.vspace.coordinates(flat)
        if c is None:
            return {"free": False, "success": False, "error": "claimed basis element is not in V",
                    "witness": {"basis_index": idx}}
        coords.append(c)
    k = len(coords)

    if k == 0:
        if m == 0:
            log_pipeline_step("free_basis", {"basis_size": 0, "v_dim": 0})
            return {"free": True, "success": True, "dual_basis": [], "j_isomorphism": True}
        return {"free": False, "success": False, "error": "empty family does not span V",
                "witness": {"v_dim": m}}

    # column i*zdim + alpha holds the V coordinates of s_alpha * g_i
    columns = []
    for c in coords:
        for alpha in range(zdim):
            acc = [ZERO] * m
            for l, x in enumerate(c):
                if x:
                    for t, y in enumerate(da.z_action_table[alpha][l]):
                        acc[t] += x * y
            columns.append(tuple(acc))
    phi = Matrix.from_columns(columns, m)

    kernel = nullspace(phi)
    if not kernel.is_zero():
        y = kernel.vectors()[0]
        relation = []
        for i in range(k):
            s = [ZERO] * n
            for alpha in range(zdim):
                if y[i * zdim + alpha]:
                    for t, v in enumerate(center[alpha]):
                        s[t] += y[i * zdim + alpha] * v
            relation.append([str(v) for v in s])
        log_warning("Claimed basis is not Z-free", {"relation": relation})
        return {"free": False, "success": False, "error": "not a free basis",
                "witness": {"relation": relation}}
    if phi.rank() != m:
        return {"free": False, "success": False, "error": "not a free basis: family does not span V",
                "witness": {"span_dim": phi.rank(), "v_dim": m}}

    phi_inv = inverse(phi)
    dual_basis: List[Covector] = []
    for i in range(k):
        values = []
        for l in range(m):
            s = [ZERO] * n
            for alpha in range(zdim):
                c = phi_inv[i * zdim + alpha, l]
                if c:
                    for t, v in enumerate(center[alpha]):
                        s[t] += c * v
            values.extend(s)
        dual_basis.append(Covector(da, tuple(values)))

    if dd is None:
        dd = build_double_dual(build_vplus(da))
    failure = _verify_dual_basis(da, coords, dual_basis, dd.covectors)
    if failure is None:
        if dd.dim != m:
            failure = {"check": "j isomorphism", "double_dual_dim": dd.dim, "v_dim": m}
    if failure is not None:
        log_error("Dual basis construction failed", failure.get("check"), failure)
        return {"free": True, "success": False, "error": "dual basis construction failed", "witness": failure}

    log_pipeline_step("free_basis", {"basis_size": k, "v_dim": m})
    return {
        "free": True,
        "success": True,
        "dual_basis": [[str(v) for v in w.values] for w in dual_basis],
        "j_isomorphism": True,
    }


def _verify_dual_basis(
    da: DiffAlgebra, coords: List[Vector], dual_basis: List[Covector], cm: CovectorModule
) -> Optional[Dict[str, Any]]:
    alg = da.algebra
    n = alg.dim
    zero = tuple([ZERO] * n)
    for i, w in enumerate(dual_basis):
        if not w.is_z_linear():
            return {"check": "Z-linearity", "dual_index": i}
        for l in range(da.dim):
            if not da.center.contains_vector(w.value(l)):
                return {"check": "values in Z", "dual_index": i, "vector_index": l}
        for kk, c in enumerate(coords):
            expected = alg.unit if i == kk else zero
            if w.evaluate(c) != expected:
                return {"check": "duality with the basis", "dual_index": i, "basis_index": kk}
        for e in range(n):
            x = alg.basis_vector(e)
            if w.left(x).values != w.right(x).values:
                return {"check": "centrality", "dual_index": i, "element": alg.basis_names[e]}

    # omega = sum_i omega^i * omega(g_i) on every basis covector of V+
    for mu, omega in enumerate(cm.basis_covectors):
        acc = [ZERO] * (da.dim * n)
        for i, w in enumerate(dual_basis):
            term = w.right(omega.evaluate(coords[i])).values
            for t, v in enumerate(term):
                if v:
                    acc[t] += v
        if tuple(acc) != omega.values:
            return {"check": "expansion", "covector_index": mu}
    return None


@dataclass(frozen=True)
class ReflexivityReport:
    r_space: Subspace
    r_plus_dim: int
    beta_kernel: Subspace
    is_reflexive: bool
    witnesses: Optional[Vector]
    semisimple_hint: bool
    beta_surjective: bool
    double_dual: DoubleDual
    restriction: RestrictionData
    i_mono: Matrix


def reflexivity_report(da: DiffAlgebra, dd: Optional[DoubleDual] = None) -> ReflexivityReport:
    if dd is None:
        dd = build_double_dual(build_vplus(da))
    cm = dd.covectors
    r = regular_covectors(dd)
    rd = build_r_plus(dd, r)
    _, i_mono = factor_beta(dd, rd)

    r_is_full = r.is_full()
    n_is_zero = dd.n_space.is_zero()
    if r_is_full != n_is_zero:
        _fail("regular-covectors", "R = V+ and N = 0 disagree", {"r_dim": r.dim, "vplus_dim": cm.dim, "n_dim": dd.n_space.dim})

    witness = None
    if not r_is_full:
        witness = next(
            unit_vector(cm.dim, mu) for mu in range(cm.dim)
            if not r.contains_vector(unit_vector(cm.dim, mu))
        )

    beta_surjective = rd.beta.rank() == rd.r_plus.dim
    if beta_surjective and not r_is_full:
        log_warning("beta is onto R+ but V+ != R", {"r_dim": r.dim, "vplus_dim": cm.dim})

    semisimple = is_semisimple(da.algebra)
    log_pipeline_step("reflexivity", {
        "reflexive": r_is_full,
        "semisimple_hint": semisimple,
        "beta_surjective": beta_surjective,
    })
    return ReflexivityReport(
        r_space=r,
        r_plus_dim=rd.r_plus.dim,
        beta_kernel=nullspace(rd.beta),
        is_reflexive=r_is_full,
        witnesses=witness,
        semisimple_hint=semisimple,
        beta_surjective=beta_surjective,
        double_dual=dd,
        restriction=rd,
        i_mono=i_mono,
    )
