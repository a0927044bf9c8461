"""
Algebra files, seed files, targets and seed specs
"""

import json
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

from pydantic import ValidationError

from app.algebra import Algebra
from app.catalog import get_entry
from app.derivations import (
    DiffAlgebra,
    LinearEndo,
    from_constants,
    full_diff_algebra,
    inner_derivation,
    make_diff_algebra,
)
from app.errors import AlgebraFileError, NotADerivation
from app.linalg import Subspace
from app.logger import log_info
from app.models import AlgebraFile, SeedFile, format_rational, parse_rational

CATALOG_PREFIX = "catalog:"


def _location(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"]) or "document"


def _validate(model, data: Any):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise AlgebraFileError(first["msg"], _location(first)) from None


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise AlgebraFileError(e.msg, f"line {e.lineno}, column {e.colno}") from None


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise AlgebraFileError(f"cannot read file: {e.strerror}", str(path)) from None


def algebra_to_document(alg: Algebra) -> AlgebraFile:
    return AlgebraFile(
        dim=alg.dim,
        basis_names=list(alg.basis_names),
        unit=[format_rational(v) for v in alg.unit],
        structure_constants=[
            [[format_rational(v) for v in cell] for cell in row] for row in alg.structure_constants
        ],
    )


def algebra_from_document(doc: AlgebraFile) -> Algebra:
    return Algebra.from_table(
        doc.basis_names,
        [[[parse_rational(v) for v in cell] for cell in row] for row in doc.structure_constants],
        [parse_rational(v) for v in doc.unit],
    )


def loads_algebra(text: str) -> Algebra:
    return algebra_from_document(_validate(AlgebraFile, _load_json(text)))


def dumps_algebra(alg: Algebra) -> str:
    return algebra_to_document(alg).model_dump_json(indent=2) + "\n"


def load_algebra(path: Union[str, Path]) -> Algebra:
    return loads_algebra(_read(path))


def save_algebra(alg: Algebra, path: Union[str, Path]):
    Path(path).write_text(dumps_algebra(alg), encoding="utf-8")
    log_info("Algebra written", {"path": str(path), "dim": alg.dim})


def load_seed_file(path: Union[str, Path]) -> SeedFile:
    return _validate(SeedFile, _load_json(_read(path)))


def resolve_target(target: str) -> Tuple[str, Algebra]:
    """'catalog:<name>' or a path to an algebra file; returns (label, algebra)"""
    if target.startswith(CATALOG_PREFIX):
        name = target[len(CATALOG_PREFIX):]
        return target, get_entry(name).algebra
    return target, load_algebra(target)


def seed_derivations(alg: Algebra, seed: SeedFile) -> List[LinearEndo]:
    """Derivation matrices of a seed file as maps of alg (Leibniz is not checked here)"""
    n = alg.dim
    maps = []
    for idx, rows in enumerate(seed.derivations or []):
        if len(rows) != n or any(len(r) != n for r in rows):
            raise AlgebraFileError(f"expected a {n}x{n} matrix", f"derivations.{idx}")
        flat = [parse_rational(v) for r in rows for v in r]
        maps.append(LinearEndo.from_flat(alg, flat))
    return maps


def _seed_constants(alg: Algebra, seed: SeedFile) -> Subspace:
    vectors = []
    for idx, v in enumerate(seed.constants or []):
        if len(v) != alg.dim:
            raise AlgebraFileError(f"expected {alg.dim} coordinates", f"constants.{idx}")
        vectors.append([parse_rational(x) for x in v])
    return Subspace.span(vectors, alg.dim)


def build_diff_algebra(alg: Algebra, seed_spec: str, seed: Optional[SeedFile] = None) -> DiffAlgebra:
    """
    full-der | inner:<basis name> | derivations[:PATH] | constants[:PATH]

    Without a PATH the inline `seed` document is used. Seeds that fail the
    Leibniz rule raise NotADerivation from make_diff_algebra.
    """
    kind, _, arg = seed_spec.partition(":")
    if kind == "full-der" and not arg:
        return full_diff_algebra(alg)
    if kind == "inner":
        try:
            x = alg.basis_element(alg.index_of(arg))
        except KeyError as e:
            raise AlgebraFileError(str(e.args[0]), "seed_spec") from None
        return make_diff_algebra(alg, Subspace.span([inner_derivation(x).flat()], alg.dim * alg.dim))
    if kind in ("derivations", "constants"):
        if arg:
            seed = load_seed_file(arg)
        if seed is None:
            raise AlgebraFileError(f"seed spec {kind!r} needs a file or an inline seed", "seed_spec")
        if kind == "derivations":
            if seed.derivations is None:
                raise AlgebraFileError("seed file has no 'derivations'", "derivations")
            maps = seed_derivations(alg, seed)
            for idx, m in enumerate(maps):
                pair = m.leibniz_violation()
                if pair is not None:
                    names = alg.basis_names
                    raise NotADerivation(
                        f"seed derivation {idx} fails the Leibniz rule on ({names[pair[0]]}, {names[pair[1]]})",
                        pair,
                    )
            return make_diff_algebra(alg, Subspace.span([m.flat() for m in maps], alg.dim * alg.dim))
        if seed.constants is None:
            raise AlgebraFileError("seed file has no 'constants'", "constants")
        return from_constants(alg, _seed_constants(alg, seed))
    raise AlgebraFileError(f"unknown seed spec {seed_spec!r}", "seed_spec")
