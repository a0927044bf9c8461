"""
The proposition suite

run_pipeline builds every object of the duality pipeline for one differential
algebra and records each structural identity as a pass/fail result. A
ConsistencyError raised while building stops the run and is recorded under the
proposition it names.
"""

import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from app.algebra import Algebra, center, is_subalgebra, radical, validate
from app.catalog import get_entry
from app.config import POLAR_SAMPLE_COUNT, POLAR_SAMPLE_SEED
from app.derivations import (
    DiffAlgebra,
    LinearEndo,
    bracket,
    der_basis,
    endos_of,
    polar_of_derivations,
    polar_of_elements,
)
from app.duality import (
    CovectorModule,
    DoubleDual,
    annihilator_of_forms,
    build_double_dual,
    build_vplus,
    build_vstar,
    build_vstar_star,
)
from app.errors import ConsistencyError, NotADerivation
from app.linalg import (
    Matrix,
    Subspace,
    column_space,
    contains,
    equals,
    intersect,
    linear_combination,
    nullspace,
    quotient_map,
    vec_add,
)
from app.logger import log_error, log_info, log_warning
from app.models import CheckSummary, PropositionResult
from app.reflexivity import ReflexivityReport, check_free_basis, reflexivity_report, retraction
from app.serialization import build_diff_algebra

DESCRIPTIONS = {
    "polars": "polars form a Galois connection; C is a subalgebra, V a Lie subalgebra",
    "bimodule": "V+ is an A-bimodule and Z acts on V as recorded",
    "differential": "d satisfies the Leibniz rule and Ker d = C",
    "z-bimodule": "V^x is a Z-bimodule with equal left and right actions",
    "pi-retracts-j": "pi o j is the identity on V",
    "decomposition": "V^x = Im j (+) N with j o pi idempotent",
    "ann-forms": "Ker pi = Ann Omega",
    "regular-covectors": "R = V+ exactly when N = 0",
    "beta-kernel": "Ker beta = N",
    "retraction": "pi_R o i is the identity on V",
    "semisimple": "a semisimple algebra gives a reflexive V",
    "free-basis": "the supplied family is a free Z-basis with a central dual basis",
    "catalog": "computed invariants match the catalog record",
    "Z-module": "central multiples of vectors stay in V",
    "V*": "V* is stable under the right Z-action",
    "V**": "the canonical map into V** is well defined",
}


@dataclass
class PipelineResult:
    diff_algebra: DiffAlgebra
    results: List[Dict[str, Any]] = field(default_factory=list)
    covectors: Optional[CovectorModule] = None
    double_dual: Optional[DoubleDual] = None
    reflexivity: Optional[ReflexivityReport] = None
    vstar: Optional[Subspace] = None
    vstar_star: Optional[Subspace] = None
    kappa: Optional[Matrix] = None
    free_basis: Optional[Dict[str, Any]] = None
    non_free_candidate: bool = False

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.results)

    @property
    def complete(self) -> bool:
        return self.reflexivity is not None and self.vstar_star is not None

    def record(self, proposition: str, passed: bool, witness: Any = None):
        self.results.append({
            "proposition": proposition,
            "description": DESCRIPTIONS.get(proposition, proposition),
            "passed": passed,
            "witness": witness,
        })
        if not passed:
            log_error(f"Proposition {proposition} failed", None, {"witness": witness})

    def failures(self) -> List[Dict[str, Any]]:
        return [r for r in self.results if not r["passed"]]


def _random_subspace(rng: random.Random, space: Subspace) -> Subspace:
    """Span of 1..dim random integer combinations of the basis of space"""
    basis = space.vectors()
    count = rng.randint(1, max(1, len(basis)))
    vectors = [
        linear_combination([rng.randint(-2, 2) for _ in basis], basis, space.ambient_dim)
        for _ in range(count)
    ]
    return Subspace.span(vectors, space.ambient_dim)


def _bracket_closed(alg: Algebra, space: Subspace) -> Optional[Dict[str, Any]]:
    maps = endos_of(alg, space)
    for i, u in enumerate(maps):
        for j in range(i + 1, len(maps)):
            try:
                b = bracket(u, maps[j])
            except NotADerivation as e:
                return {"pair": [i, j], "leibniz": list(e.pair)}
            if not space.contains_vector(b.flat()):
                return {"pair": [i, j]}
    return None


def _check_sampled_polars(alg: Algebra) -> Optional[Dict[str, Any]]:
    """
    Galois identities on seeded random S in A and W in Der A

    S ⊆ S^cc, S^ccc = S^c, S^c closed under brackets; W ⊆ W^cc, W^ccc = W^c,
    W^c a subalgebra.
    """
    rng = random.Random(POLAR_SAMPLE_SEED + alg.dim)
    der = der_basis(alg)
    full = Subspace.full(alg.dim)
    for sample in range(POLAR_SAMPLE_COUNT):
        s = _random_subspace(rng, full)
        sc = polar_of_elements(alg, s)
        if not contains(polar_of_derivations(alg, sc), s):
            return {"check": "S in S^cc", "sample": sample}
        if not equals(polar_of_elements(alg, polar_of_derivations(alg, sc)), sc):
            return {"check": "S^ccc = S^c", "sample": sample}
        closure = _bracket_closed(alg, sc)
        if closure is not None:
            return {"check": "S^c closed under brackets", "sample": sample, **closure}
        if der.is_zero():
            continue
        w = _random_subspace(rng, der)
        wc = polar_of_derivations(alg, w)
        if not contains(polar_of_elements(alg, wc), w):
            return {"check": "W in W^cc", "sample": sample}
        if not equals(polar_of_derivations(alg, polar_of_elements(alg, wc)), wc):
            return {"check": "W^ccc = W^c", "sample": sample, "w_dim": w.dim}
        if not is_subalgebra(alg, wc):
            return {"check": "W^c is a subalgebra", "sample": sample}
    return None


def _check_polars(pr: PipelineResult):
    da = pr.diff_algebra
    alg = da.algebra
    n = alg.dim
    failure = None
    if not equals(polar_of_elements(alg, da.constants), da.vspace):
        failure = {"check": "V = V^cc"}
    elif not equals(polar_of_derivations(alg, polar_of_elements(alg, da.constants)), da.constants):
        failure = {"check": "C = C^cc"}
    if failure is None:
        subsets = [Subspace.span([alg.basis_vector(i)], n) for i in range(n)] + [center(alg)]
        for idx, s in enumerate(subsets):
            sc = polar_of_elements(alg, s)
            if not equals(polar_of_elements(alg, polar_of_derivations(alg, sc)), sc):
                failure = {"check": "S^ccc = S^c", "subset_index": idx}
                break
    if failure is None:
        wc = polar_of_derivations(alg, der_basis(alg))
        if not equals(polar_of_derivations(alg, polar_of_elements(alg, wc)), wc):
            failure = {"check": "W^ccc = W^c"}
    if failure is None and not is_subalgebra(alg, da.constants):
        failure = {"check": "C is a subalgebra"}
    if failure is None:
        vectors = da.vectors
        for i, u in enumerate(vectors):
            for j in range(i + 1, len(vectors)):
                try:
                    b = bracket(u, vectors[j])
                except NotADerivation as e:
                    failure = {"check": "bracket is a derivation", "pair": [i, j], "leibniz": list(e.pair)}
                    break
                if da.coordinates(b) is None:
                    failure = {"check": "V closed under brackets", "pair": [i, j]}
                    break
            if failure is not None:
                break
    if failure is None:
        failure = _check_sampled_polars(alg)
    pr.record("polars", failure is None, failure)


def _check_z_action(pr: PipelineResult) -> bool:
    """The cached Z-action table against s * v recomputed from scratch"""
    da = pr.diff_algebra
    alg = da.algebra
    for alpha, s in enumerate(da.center_basis):
        left = alg.left_matrix(s)
        for i, v in enumerate(da.vectors):
            recomputed = da.coordinates(LinearEndo(alg, left @ v.matrix))
            if recomputed != da.z_action_table[alpha][i]:
                pr.record("bimodule", False, {
                    "check": "Z-action table",
                    "center_index": alpha,
                    "vector_index": i,
                    "recorded": [str(x) for x in da.z_action_table[alpha][i]],
                    "recomputed": None if recomputed is None else [str(x) for x in recomputed],
                })
                return False
    return True


def _check_bimodule(pr: PipelineResult, cm: CovectorModule):
    alg = cm.diff_algebra.algebra
    n = alg.dim
    failure = None
    if not cm.left_matrix(alg.unit).is_identity() or not cm.right_matrix(alg.unit).is_identity():
        failure = {"check": "unit acts as identity"}
    for a in range(n):
        if failure is not None:
            break
        for b in range(n):
            ab = alg.product(alg.basis_vector(a), alg.basis_vector(b))
            if cm.left_action[a] @ cm.right_action[b] != cm.right_action[b] @ cm.left_action[a]:
                failure = {"check": "(a w) b = a (w b)", "pair": [a, b]}
            elif cm.left_action[a] @ cm.left_action[b] != cm.left_matrix(ab):
                failure = {"check": "a (b w) = (ab) w", "pair": [a, b]}
            elif cm.right_action[b] @ cm.right_action[a] != cm.right_matrix(ab):
                failure = {"check": "(w a) b = w (ab)", "pair": [a, b]}
            if failure is not None:
                break
    pr.record("bimodule", failure is None, failure)


def _check_differential(pr: PipelineResult, cm: CovectorModule):
    da = cm.diff_algebra
    alg = da.algebra
    dmat = cm.differential_matrix
    failure = None
    for i in range(alg.dim):
        for j in range(alg.dim):
            lhs = dmat.apply(alg.structure_constants[i][j])
            rhs = vec_add(cm.right_action[j].apply(dmat.column(i)), cm.left_action[i].apply(dmat.column(j)))
            if lhs != rhs:
                failure = {"check": "d(ab) = da b + a db", "pair": [alg.basis_names[i], alg.basis_names[j]]}
                break
        if failure is not None:
            break
    if failure is None:
        kernel = nullspace(dmat)
        if not equals(kernel, da.constants):
            failure = {"check": "Ker d = C", "kernel_dim": kernel.dim, "constants_dim": da.constants.dim}
    pr.record("differential", failure is None, failure)


def _check_double_dual(pr: PipelineResult, dd: DoubleDual):
    da = dd.diff_algebra
    alg = da.algebra
    failure = None
    unit = da.center.coordinates(alg.unit)
    for alpha in range(len(dd.z_left)):
        if dd.z_left[alpha] != dd.z_right[alpha]:
            failure = {"check": "s w = w s", "center_index": alpha}
            break
    if failure is None and unit is not None:
        acc = Matrix.zeros(dd.dim, dd.dim)
        for c, m in zip(unit, dd.z_left):
            if c:
                acc = acc + m.scale(c)
        if not acc.is_identity():
            failure = {"check": "unit acts as identity"}
    pr.record("z-bimodule", failure is None, failure)

    pr.record("pi-retracts-j", (dd.pi_matrix @ dd.j_matrix).is_identity())

    image_j = column_space(dd.j_matrix)
    projector = dd.j_matrix @ dd.pi_matrix
    failure = None
    if not intersect(image_j, dd.n_space).is_zero():
        failure = {"check": "Im j and N intersect"}
    elif image_j.dim + dd.n_space.dim != dd.dim:
        failure = {"check": "dimensions", "image_dim": image_j.dim, "n_dim": dd.n_space.dim}
    elif projector @ projector != projector:
        failure = {"check": "j o pi idempotent"}
    pr.record("decomposition", failure is None, failure)

    ann = annihilator_of_forms(dd)
    pr.record("ann-forms", equals(ann, dd.n_space),
              None if equals(ann, dd.n_space) else {"ann_dim": ann.dim, "n_dim": dd.n_space.dim})


def _check_reflexivity(pr: PipelineResult, rr: ReflexivityReport):
    dd = rr.double_dual
    r_full = rr.r_space.is_full()
    n_zero = dd.n_space.is_zero()
    pr.record("regular-covectors", r_full == n_zero, None if r_full == n_zero else {"r_dim": rr.r_space.dim, "n_dim": dd.n_space.dim})

    same = equals(rr.beta_kernel, dd.n_space)
    pr.record("beta-kernel", same, None if same else {"beta_kernel_dim": rr.beta_kernel.dim, "n_dim": dd.n_space.dim})

    pi_r = retraction(dd, rr.restriction)
    identity = pi_r @ rr.i_mono @ quotient_map(dd.n_space) @ dd.j_matrix
    pr.record("retraction", identity.is_identity())

    implied = rr.is_reflexive or not rr.semisimple_hint
    pr.record("semisimple", implied, None if implied else {"semisimple": True, "reflexive": False})


def run_pipeline(da: DiffAlgebra, free_basis: Optional[Sequence[Any]] = None) -> PipelineResult:
    pr = PipelineResult(da)
    try:
        _check_polars(pr)
        if not _check_z_action(pr):
            return pr
        cm = build_vplus(da)
        pr.covectors = cm
        _check_bimodule(pr, cm)
        _check_differential(pr, cm)

        pr.vstar = build_vstar(da)
        pr.vstar_star, pr.kappa = build_vstar_star(da, pr.vstar)

        dd = build_double_dual(cm)
        pr.double_dual = dd
        _check_double_dual(pr, dd)

        rr = reflexivity_report(da, dd)
        pr.reflexivity = rr
        _check_reflexivity(pr, rr)

        zdim = da.center.dim
        if rr.is_reflexive and da.dim % zdim != 0:
            pr.non_free_candidate = True
            log_warning("Reflexive V that cannot be Z-free", {"v_dim": da.dim, "center_dim": zdim})

        if free_basis is not None:
            verdict = check_free_basis(da, free_basis, dd)
            pr.free_basis = verdict
            ok = verdict["success"] and rr.is_reflexive
            pr.record("free-basis", ok, None if ok else {k: v for k, v in verdict.items() if k != "dual_basis"})
    except ConsistencyError as e:
        pr.record(e.proposition, False, {"message": str(e), "witness": e.witness})
    return pr


def run_checks(da: DiffAlgebra, free_basis: Optional[Sequence[Any]] = None) -> List[Dict[str, Any]]:
    return run_pipeline(da, free_basis).results


def _check_catalog(pr: PipelineResult, name: str):
    entry = get_entry(name)
    if entry.expected is None or pr.reflexivity is None:
        return
    alg = pr.diff_algebra.algebra
    computed = {
        "der_dim": der_basis(alg).dim,
        "center_dim": pr.diff_algebra.center.dim,
        "radical_dim": radical(alg).dim,
        "reflexive": pr.reflexivity.is_reflexive,
    }
    expected = {
        "der_dim": entry.expected.der_dim,
        "center_dim": entry.expected.center_dim,
        "radical_dim": entry.expected.radical_dim,
        "reflexive": entry.expected.reflexive,
    }
    ok = computed == expected
    pr.record("catalog", ok, None if ok else {"computed": computed, "expected": expected})


def check_algebra(
    label: str,
    alg: Algebra,
    seed_spec: str = "full-der",
    diff_algebra: Optional[DiffAlgebra] = None,
    free_basis: Optional[Sequence[Any]] = None,
) -> CheckSummary:
    """Validate, then run the whole suite; catalog targets also compare their record"""
    verdict = validate(alg)
    if not verdict["valid"]:
        return CheckSummary(target=label, passed=False, error=f"invalid algebra: {verdict['violation']}",
                            results=[PropositionResult(proposition="validate", description="algebra axioms",
                                                       passed=False, witness=verdict)])
    if diff_algebra is None:
        diff_algebra = build_diff_algebra(alg, seed_spec)
    pr = run_pipeline(diff_algebra, free_basis)
    if label.startswith("catalog:") and seed_spec == "full-der":
        _check_catalog(pr, label[len("catalog:"):])
    log_info("Proposition suite finished", {"target": label, "passed": pr.passed, "checks": len(pr.results)})
    return CheckSummary(
        target=label,
        passed=pr.passed and pr.complete,
        results=[PropositionResult(**r) for r in pr.results],
        error=None if pr.complete else "pipeline stopped early",
    )
