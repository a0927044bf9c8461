"""
Pydantic documents: algebra files, seed files, reports and service bodies
"""

import re
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional

from pydantic import AfterValidator, BaseModel, ConfigDict, NonNegativeInt, PositiveInt, model_validator

from app.config import DEFAULT_SEED_SPEC

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """'p/q' or 'p' to a Fraction; floats and zero denominators are refused"""
    match = _RATIONAL.match(text)
    if not match:
        raise ValueError(f"{text!r} is not a rational of the form p/q")
    numerator, denominator = match.group(1), match.group(2)
    if denominator is not None and int(denominator) == 0:
        raise ValueError(f"{text!r} has a zero denominator")
    return Fraction(int(numerator), int(denominator) if denominator else 1)


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _canonical(text: str) -> str:
    return format_rational(parse_rational(text))


RationalStr = Annotated[str, AfterValidator(_canonical)]


class AlgebraFile(BaseModel):
    """
    On-disk form of an algebra

    structure_constants[i][j][k] is the coefficient of e_k in e_i * e_j.
    """
    model_config = ConfigDict(extra="forbid")

    dim: PositiveInt
    basis_names: List[str]
    unit: List[RationalStr]
    structure_constants: List[List[List[RationalStr]]]

    @model_validator(mode="after")
    def check_shape(self) -> "AlgebraFile":
        n = self.dim
        if len(self.basis_names) != n:
            raise ValueError(f"basis_names has {len(self.basis_names)} entries, expected {n}")
        if len(set(self.basis_names)) != n:
            raise ValueError("basis_names must be distinct")
        if len(self.unit) != n:
            raise ValueError(f"unit has {len(self.unit)} entries, expected {n}")
        if len(self.structure_constants) != n:
            raise ValueError(f"structure_constants has {len(self.structure_constants)} rows, expected {n}")
        for i, row in enumerate(self.structure_constants):
            if len(row) != n:
                raise ValueError(f"structure_constants[{i}] has {len(row)} entries, expected {n}")
            for j, cell in enumerate(row):
                if len(cell) != n:
                    raise ValueError(f"structure_constants[{i}][{j}] has {len(cell)} entries, expected {n}")
        return self


class SeedFile(BaseModel):
    """
    Derivation matrices (row k, column i = coefficient of e_k in v(e_i)) or
    constant vectors seeding a differential algebra; also used for free bases
    """
    model_config = ConfigDict(extra="forbid")

    derivations: Optional[List[List[List[RationalStr]]]] = None
    constants: Optional[List[List[RationalStr]]] = None

    @model_validator(mode="after")
    def check_one_kind(self) -> "SeedFile":
        if (self.derivations is None) == (self.constants is None):
            raise ValueError("give exactly one of 'derivations' or 'constants'")
        return self


class AlgebraSummary(BaseModel):
    name: Optional[str] = None
    dim: PositiveInt
    basis_names: List[str]
    center_dim: NonNegativeInt
    constants_dim: NonNegativeInt
    der_dim: NonNegativeInt
    inner_der_dim: NonNegativeInt
    v_dim: NonNegativeInt
    radical_dim: NonNegativeInt
    semisimple: bool
    commutative: bool


class DualitySummary(BaseModel):
    vstar: NonNegativeInt
    vplus: NonNegativeInt
    forms: NonNegativeInt
    double_dual: NonNegativeInt
    n: NonNegativeInt
    r: NonNegativeInt
    r_plus: NonNegativeInt
    vstar_star: NonNegativeInt
    canonical_rank: NonNegativeInt


class ReflexivityVerdict(BaseModel):
    reflexive: bool
    semisimple_hint: bool
    beta_surjective: bool
    non_free_reflexive_candidate: bool = False
    witness: Optional[List[str]] = None


class PropositionResult(BaseModel):
    proposition: str
    description: str
    passed: bool
    witness: Optional[Any] = None


class Report(BaseModel):
    target: Optional[str] = None
    seed_spec: str
    algebra: AlgebraSummary
    duality: DualitySummary
    reflexivity: ReflexivityVerdict
    propositions: List[PropositionResult]
    witnesses: Dict[str, Any] = {}

    @model_validator(mode="after")
    def check_consistency(self) -> "Report":
        if self.reflexivity.reflexive != (self.duality.n == 0):
            raise ValueError("reflexivity verdict disagrees with dim N")
        if self.duality.double_dual != self.algebra.v_dim + self.duality.n:
            raise ValueError("dim V^x differs from dim V + dim N")
        return self


class ValidationResult(BaseModel):
    valid: bool
    violation: Optional[str] = None
    details: Dict[str, Any] = {}


class CheckSummary(BaseModel):
    target: str
    passed: bool
    results: List[PropositionResult] = []
    error: Optional[str] = None


class CatalogItem(BaseModel):
    name: str
    dim: PositiveInt
    basis_names: List[str]


class TargetRequest(BaseModel):
    """Either a catalog target ("catalog:m2") or an inline algebra"""
    target: Optional[str] = None
    algebra: Optional[AlgebraFile] = None
    seed_spec: str = DEFAULT_SEED_SPEC
    seed: Optional[SeedFile] = None
    free_basis: Optional[SeedFile] = None

    @model_validator(mode="after")
    def check_source(self) -> "TargetRequest":
        if (self.target is None) == (self.algebra is None):
            raise ValueError("give exactly one of 'target' or 'algebra'")
        return self
