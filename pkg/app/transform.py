"""
Pipeline results to Report documents, and the text rendering of a report
"""

from typing import Any, Dict, List, Optional

from app.algebra import is_commutative, radical
from app.derivations import der_basis, inner_derivation
from app.duality import noncommuting_witness
from app.linalg import Subspace
from app.models import (
    AlgebraSummary,
    DualitySummary,
    PropositionResult,
    ReflexivityVerdict,
    Report,
)
from app.propositions import PipelineResult


def _strings(vector) -> List[str]:
    return [str(v) for v in vector]


def build_report(pr: PipelineResult, target: Optional[str], seed_spec: str) -> Report:
    """
    Build the Report for a completed pipeline run

    Raises ValueError if the run stopped before the reflexivity stage.
    """
    if not pr.complete:
        raise ValueError("pipeline did not complete; no report can be built")
    da = pr.diff_algebra
    alg = da.algebra
    n = alg.dim
    rr = pr.reflexivity
    dd = rr.double_dual
    cm = dd.covectors

    inner = Subspace.span([inner_derivation(alg.basis_element(i)).flat() for i in range(n)], n * n)
    algebra = AlgebraSummary(
        name=target,
        dim=n,
        basis_names=list(alg.basis_names),
        center_dim=da.center.dim,
        constants_dim=da.constants.dim,
        der_dim=der_basis(alg).dim,
        inner_der_dim=inner.dim,
        v_dim=da.dim,
        radical_dim=radical(alg).dim,
        semisimple=rr.semisimple_hint,
        commutative=is_commutative(alg),
    )
    duality = DualitySummary(
        vstar=pr.vstar.dim,
        vplus=cm.dim,
        forms=cm.forms.dim,
        double_dual=dd.dim,
        n=dd.n_space.dim,
        r=rr.r_space.dim,
        r_plus=rr.r_plus_dim,
        vstar_star=pr.vstar_star.dim,
        canonical_rank=pr.kappa.rank(),
    )
    verdict = ReflexivityVerdict(
        reflexive=rr.is_reflexive,
        semisimple_hint=rr.semisimple_hint,
        beta_surjective=rr.beta_surjective,
        non_free_reflexive_candidate=pr.non_free_candidate,
        witness=None if rr.witnesses is None else _strings(rr.witnesses),
    )

    witnesses: Dict[str, Any] = {"noncommuting": noncommuting_witness(cm)}
    if pr.free_basis is not None:
        witnesses["free_basis"] = pr.free_basis
    failures = pr.failures()
    if failures:
        witnesses["failures"] = failures

    return Report(
        target=target,
        seed_spec=seed_spec,
        algebra=algebra,
        duality=duality,
        reflexivity=verdict,
        propositions=[PropositionResult(**r) for r in pr.results],
        witnesses=witnesses,
    )


def render_text(report: Report) -> str:
    a, d, r = report.algebra, report.duality, report.reflexivity
    lines = [
        f"Algebra: {a.name or '<inline>'} (dim {a.dim}; basis {', '.join(a.basis_names)})",
        f"Seed: {report.seed_spec}",
        "",
        f"  centre Z         {a.center_dim}",
        f"  constants C      {a.constants_dim}",
        f"  Der A            {a.der_dim} ({a.inner_der_dim} inner)",
        f"  V                {a.v_dim}",
        f"  radical          {a.radical_dim}{' (semisimple)' if a.semisimple else ''}",
        "",
        f"  V*               {d.vstar}",
        f"  V**              {d.vstar_star} (canonical map of rank {d.canonical_rank})",
        f"  V+               {d.vplus}",
        f"  Omega            {d.forms}",
        f"  V^x              {d.double_dual}",
        f"  N                {d.n}",
        f"  R                {d.r}",
        f"  R+               {d.r_plus}",
        "",
        f"Reflexive: {'yes' if r.reflexive else 'no'}",
    ]
    if r.witness is not None:
        lines.append(f"  covector outside R: [{', '.join(r.witness)}]")
    if r.non_free_reflexive_candidate:
        lines.append("  reflexive although V cannot be free over Z")
    lines.append("")
    lines.append("Checks:")
    for p in report.propositions:
        mark = "PASS" if p.passed else "FAIL"
        lines.append(f"  [{mark}] {p.proposition:<8} {p.description}")
        if not p.passed and p.witness is not None:
            lines.append(f"           witness: {p.witness}")
    return "\n".join(lines) + "\n"
