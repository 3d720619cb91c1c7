"""
Pydantic schemas for the wire formats and the catalog data files.

Rationals travel as strings "p/q" (or "p"); every schema normalizes them on
the way in and converts to the domain types with a to_* method.
"""

from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, TypeAdapter, model_validator

from .core import Poly, format_rational, to_rational
from .fields import FieldSpec
from .models import CurvePoint, EllipticCurveSW, GenusOneModel, MoebiusInvolution


def _normalize_rational(value: Any) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, str, Fraction)):
        raise ValueError(f"expected a rational as int or 'p/q' string, got {value!r}")
    return format_rational(to_rational(value))


RationalText = Annotated[str, BeforeValidator(_normalize_rational)]


class _Record(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# -- domain values ----------------------------------------------------------

class ModelSchema(_Record):
    d: RationalText = "1"
    f: List[RationalText] = Field(min_length=4, max_length=5)

    def to_model(self) -> GenusOneModel:
        return GenusOneModel(to_rational(self.d), Poly.from_json(self.f))


class PointSchema(_Record):
    x: RationalText = "0"
    y: RationalText = "0"
    infinity: bool = False

    def to_point(self) -> CurvePoint:
        return CurvePoint.zero() if self.infinity else CurvePoint.at(self.x, self.y)


class CurveSchema(_Record):
    A: RationalText
    B: RationalText

    def to_curve(self) -> EllipticCurveSW:
        return EllipticCurveSW(to_rational(self.A), to_rational(self.B))


class TransformSchema(_Record):
    matrix: List[RationalText] = Field(min_length=4, max_length=4)
    e: RationalText = "1"

    def to_map(self) -> MoebiusInvolution:
        return MoebiusInvolution.of(*self.matrix, self.e)


class InvolutionSchema(TransformSchema):
    m: int = Field(gt=1)


# -- field specs ------------------------------------------------------------

class RationalsSpec(_Record):
    type: Literal["rationals"]

    def to_spec(self) -> FieldSpec:
        return FieldSpec.rationals()


class QuadraticSpec(_Record):
    type: Literal["quadratic"]
    m: int

    def to_spec(self) -> FieldSpec:
        return FieldSpec.quadratic(self.m)


class BiquadraticSpec(_Record):
    type: Literal["biquadratic"]
    m: Tuple[int, int]

    def to_spec(self) -> FieldSpec:
        return FieldSpec.biquadratic(*self.m)


class NestedRadicalSpec(_Record):
    type: Literal["nested_radical"]
    a: RationalText
    b: RationalText

    def to_spec(self) -> FieldSpec:
        return FieldSpec.nested_radical(self.a, self.b)


class SplittingSpec(_Record):
    type: Literal["splitting"]
    poly: List[RationalText] = Field(min_length=2)

    def to_spec(self) -> FieldSpec:
        return FieldSpec.splitting(Poly.from_json(self.poly))


class CompositumSpec(_Record):
    type: Literal["compositum"]
    parts: List["FieldSpecSchema"]

    def to_spec(self) -> FieldSpec:
        return FieldSpec.compositum(p.to_spec() for p in self.parts)


FieldSpecSchema = Annotated[
    Union[RationalsSpec, QuadraticSpec, BiquadraticSpec, NestedRadicalSpec, SplittingSpec, CompositumSpec],
    Field(discriminator="type"),
]
CompositumSpec.model_rebuild()

FIELD_SPEC_ADAPTER: TypeAdapter = TypeAdapter(FieldSpecSchema)


# -- data files -------------------------------------------------------------

class _Dataset(_Record):
    dataset: str
    description: str = ""


class Table1Row(_Record):
    D: int
    N: int
    model: ModelSchema
    jacobian_label: str
    involutions: List[InvolutionSchema]
    source: str


class Table1File(_Dataset):
    dataset: Literal["table1"]
    rows: List[Table1Row] = Field(min_length=1)


class Table2Row(_Record):
    D: int
    m: int
    model: ModelSchema
    jacobian_label: str
    source: str


class Table2File(_Dataset):
    dataset: Literal["table2"]
    non_elliptic_quotients: List[Tuple[int, int]]
    rows: List[Table2Row] = Field(min_length=1)


class Table3Row(_Record):
    D: int
    m: int
    curve: CurveSchema
    d: RationalText
    point: PointSchema
    descent_curve: Literal["twist", "printed"] = "twist"
    corrected_point: Optional[PointSchema] = None
    erratum: Optional[int] = None
    source: str


class Table3File(_Dataset):
    dataset: Literal["table3"]
    rows: List[Table3Row] = Field(min_length=1)


class DescentRepresentative(_Record):
    label: str
    multipliers: List[int]
    point: Optional[PointSchema] = None
    quartic: List[RationalText] = Field(min_length=5, max_length=5)
    printed_quartic: Optional[List[RationalText]] = None
    erratum: Optional[int] = None


class InvariantsSchema(_Record):
    I: RationalText
    J: RationalText


class DescentCase(_Record):
    D: int
    N: int
    curve: CurveSchema
    d: RationalText
    twisted_curve: CurveSchema
    jacobian_label: str
    twisted_label: Optional[str] = None
    generators: List[PointSchema]
    target_m: int
    representatives: List[DescentRepresentative]
    selected: str
    transform: TransformSchema
    printed_transform: Optional[TransformSchema] = None
    transform_erratum: Optional[int] = None
    jacobian_scaling: RationalText
    invariants: Optional[InvariantsSchema] = None
    source: str


class DescentCasesFile(_Dataset):
    dataset: Literal["descent_cases"]
    cases: List[DescentCase]


class QuadricSchema(_Record):
    """z^2 = q2 u^2 + q1 u + q0, stored as [q0, q1, q2]"""
    variable: str
    coefficients: List[RationalText] = Field(min_length=3, max_length=3)


class SubstitutionSchema(_Record):
    """u = U/V, w = W/V, z = Z y/V as polynomials in x"""
    U: List[RationalText]
    V: List[RationalText]
    W: List[RationalText]
    Z: List[RationalText]


class KuriharaFile(_Dataset):
    dataset: Literal["kurihara"]
    D: int
    N: int
    quadrics: List[QuadricSchema] = Field(min_length=2, max_length=2)
    substitution: SubstitutionSchema
    target: ModelSchema
    map_to_table1: TransformSchema
    source: str


class KmField(_Record):
    m: int
    field: FieldSpecSchema


class KmRow(_Record):
    D: int
    N: int
    fields: List[KmField]
    erratum: Optional[int] = None
    source: str


class KmFile(_Dataset):
    dataset: Literal["lemma_km"]
    rows: List[KmRow]


ErratumScope = Literal["table1", "table2", "table3", "kurihara", "involutions", "km", "scan", "quotients", "elliptic"]


class ErratumRow(_Record):
    id: int
    scope: ErratumScope
    location: str
    printed: str
    correction: str
    witness: str
    printed_map: Optional[TransformSchema] = None


class ErrataFile(_Dataset):
    dataset: Literal["errata"]
    rows: List[ErratumRow]


class Method2Row(_Record):
    D: int
    N: int
    m: Optional[int] = None
    d: List[int]
    jacobian_label: str
    quotient_jacobian_label: str


class Method2File(_Dataset):
    dataset: Literal["method2"]
    rows: List[Method2Row]


class EllipticQuotientRow(_Record):
    D: int
    m: int
    disc: int = Field(lt=0)
    label: str


class EllipticQuotientsFile(_Dataset):
    dataset: Literal["elliptic_quotients"]
    rows: List[EllipticQuotientRow]


class PointsFile(_Record):
    """Input for the first method: explicit class representatives, or generators of E_d(Q)"""
    points: Optional[List[PointSchema]] = None
    generators: Optional[List[PointSchema]] = None
    labels: Optional[List[str]] = None

    @model_validator(mode="after")
    def _one_source(self) -> "PointsFile":
        if (self.points is None) == (self.generators is None):
            raise ValueError("give exactly one of 'points' and 'generators'")
        if self.labels is not None and self.points is not None and len(self.labels) != len(self.points):
            raise ValueError("labels and points differ in length")
        return self


class ManifestFile(_Record):
    version: int
    algorithm: Literal["sha256"]
    files: Dict[str, str]


DATASET_SCHEMAS = {
    "table1": Table1File,
    "table2": Table2File,
    "table3": Table3File,
    "descent_cases": DescentCasesFile,
    "kurihara": KuriharaFile,
    "lemma_km": KmFile,
    "errata": ErrataFile,
    "method2": Method2File,
    "elliptic_quotients": EllipticQuotientsFile,
}
