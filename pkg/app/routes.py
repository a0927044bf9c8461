"""
HTTP endpoints for the catalog, validation, reports and the proposition suite
"""

from typing import List, Tuple

from fastapi import APIRouter, HTTPException

from app.algebra import Algebra, validate
from app.catalog import all_entries
from app.errors import AlgebraFileError, CatalogError, ConsistencyError, NotADerivation
from app.logger import log_error, log_info, save_report
from app.models import (
    AlgebraFile,
    CatalogItem,
    CheckSummary,
    Report,
    TargetRequest,
    ValidationResult,
)
from app.propositions import check_algebra, run_pipeline
from app.serialization import algebra_from_document, build_diff_algebra, resolve_target, seed_derivations
from app.transform import build_report

router = APIRouter()


def _resolve(body: TargetRequest) -> Tuple[str, Algebra]:
    try:
        if body.target is not None:
            return resolve_target(body.target)
        return "inline", algebra_from_document(body.algebra)
    except CatalogError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except AlgebraFileError as e:
        raise HTTPException(status_code=422, detail=str(e))


def _require_valid(label: str, alg: Algebra):
    verdict = validate(alg)
    if not verdict["valid"]:
        raise HTTPException(status_code=422, detail={"message": f"{label} is not a valid algebra", **verdict})


@router.get("/catalog", response_model=List[CatalogItem])
async def list_catalog():
    return [
        CatalogItem(name=e.name, dim=e.algebra.dim, basis_names=list(e.algebra.basis_names))
        for e in all_entries()
    ]


@router.post("/algebras/validate", response_model=ValidationResult)
async def validate_algebra(doc: AlgebraFile):
    verdict = validate(algebra_from_document(doc))
    log_info("Algebra validated over HTTP", {"valid": verdict["valid"]})
    details = {k: v for k, v in verdict.items() if k not in ("valid", "violation")}
    return ValidationResult(valid=verdict["valid"], violation=verdict.get("violation"), details=details)


@router.post("/reports", response_model=Report)
def create_report(body: TargetRequest):
    label, alg = _resolve(body)
    _require_valid(label, alg)
    try:
        da = build_diff_algebra(alg, body.seed_spec, body.seed)
    except (AlgebraFileError, NotADerivation) as e:
        raise HTTPException(status_code=422, detail=str(e))
    except ConsistencyError as e:
        log_error("Report failed", str(e), {"target": label})
        raise HTTPException(status_code=500, detail=str(e))
    pr = run_pipeline(da)
    if not pr.complete:
        raise HTTPException(status_code=500, detail={"message": "pipeline stopped early", "failures": pr.failures()})
    report = build_report(pr, label if body.target else None, body.seed_spec)
    save_report(report.model_dump(mode="json"), label)
    return report


@router.post("/checks", response_model=CheckSummary)
def run_check(body: TargetRequest):
    label, alg = _resolve(body)
    try:
        free_basis = seed_derivations(alg, body.free_basis) if body.free_basis else None
        if validate(alg)["valid"]:
            da = build_diff_algebra(alg, body.seed_spec, body.seed)
            return check_algebra(label, alg, body.seed_spec, diff_algebra=da, free_basis=free_basis)
        return check_algebra(label, alg, body.seed_spec)
    except (AlgebraFileError, NotADerivation) as e:
        raise HTTPException(status_code=422, detail=str(e))
    except ConsistencyError as e:
        return CheckSummary(target=label, passed=False, error=str(e))
