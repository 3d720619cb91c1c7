"""
Catalog of the genus-one Shimura curves X0(D, N) and of the genus-one
Atkin-Lehner quotients X0(D, 1)/<w_m> without rational points.

Besides the entries themselves this module runs the two model-finding
methods (2-descent with splitting-field selection, and the 2-isogeny
criterion) and the verification report that re-derives every stored
number from the library.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from .classfield import QuadOrder, class_group
from .core import Poly, format_rational, squarefree_class, to_rational
from .curves import (
    Level,
    atkin_lehner_compose,
    atkin_lehner_group,
    cm_field_of_definition,
    cm_locus,
    fixed_point_count,
    fixed_point_fields,
    genus,
    quadratic_point_orders,
    quotient_cm_field,
    quotient_genus,
    quotient_involution_fields,
    rational_cm_point,
    scan_genus_one,
)
from .data_loader import CatalogDataLoader, get_data_loader
from .fields import (
    FieldFingerprint,
    FieldSpec,
    fingerprint_of_compositum,
    fingerprint_of_spec,
    splitting_fingerprint,
)
from .models import (
    HYPERELLIPTIC,
    CaseData,
    CriterionCandidate,
    CurvePoint,
    DescentCandidate,
    EllipticCurveSW,
    GenusOneModel,
    ModelCase,
    MoebiusInvolution,
    apply_transform,
    case_one_isogeny_check,
    descent_candidates,
    descent_quartic,
    detect_case,
    invariants_IJ,
    involution_fixed_field,
    involution_fixed_points,
    is_isomorphic,
    jacobian,
    map_transforms,
    quotient_curve,
    same_jacobian,
    select_criterion_model,
    twist,
    verify_involution,
)
from .shared.errors import CorruptData, RepeatedRoots
from .shared.utils import execution_summary, execution_tracker, measure_latency, setup_logging

logger = setup_logging("catalog")

TABLE1_SIZE = 11
TABLE2_SIZE = 17
SCAN_BOUND = 1000
QUADRATIC_POINT_BOUND = 100


class CatalogTable(Enum):
    CURVES = "table1"
    QUOTIENTS = "table2"


@dataclass(frozen=True)
class DescentData:
    """An elliptic curve E, the twist parameter d and a point (or generators) for 2-descent"""
    curve: EllipticCurveSW
    d: Fraction
    point: Optional[CurvePoint] = None
    generators: Tuple[CurvePoint, ...] = ()
    on_twist: bool = True
    corrected_point: Optional[CurvePoint] = None

    @property
    def twisted(self) -> EllipticCurveSW:
        return twist(self.curve, self.d)

    @property
    def descent_curve(self) -> EllipticCurveSW:
        """E_d, or the stored curve itself when the point was recorded on it"""
        return self.twisted if self.on_twist else self.curve

    def model(self) -> GenusOneModel:
        """y^2 = d * f_P(x) for the stored point"""
        if self.point is None:
            raise ValueError("no descent point recorded")
        return GenusOneModel(self.d, descent_quartic(self.descent_curve, self.point))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"curve": self.curve.to_dict(), "d": format_rational(self.d)}
        if self.point is not None:
            data["point"] = self.point.to_dict()
            data["on_twist"] = self.on_twist
        if self.generators:
            data["generators"] = [g.to_dict() for g in self.generators]
        if self.corrected_point is not None:
            data["corrected_point"] = self.corrected_point.to_dict()
        return data


@dataclass(frozen=True)
class CatalogEntry:
    """
    A Table-1 curve X0(D, N) or a Table-2 quotient X0(D, 1)/<w_m>.

    Table-2 target fields are never stored; see quotient_target.
    """
    table: CatalogTable
    D: int
    N: int
    model: GenusOneModel
    jacobian_label: str
    source: str
    m: Optional[int] = None
    involutions: Tuple[Tuple[int, MoebiusInvolution], ...] = ()
    jacobian_sw: Optional[EllipticCurveSW] = None
    descent: Optional[DescentData] = None
    target_field: Optional[FieldSpec] = None

    @property
    def level(self) -> Level:
        return Level(self.D, self.N)

    @property
    def key(self) -> str:
        if self.table is CatalogTable.QUOTIENTS:
            return f"({self.D},{self.m})"
        return f"({self.D},{self.N})"

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "table": self.table.value,
            "D": self.D,
            "N": self.N,
            "model": self.model.to_dict(),
            "jacobian_label": self.jacobian_label,
            "source": self.source,
        }
        if self.m is not None:
            data["m"] = self.m
        if self.involutions:
            data["involutions"] = [{"m": m, **w.to_dict()} for m, w in self.involutions]
        if self.jacobian_sw is not None:
            data["jacobian"] = self.jacobian_sw.to_dict()
        if self.descent is not None:
            data["descent"] = self.descent.to_dict()
        if self.target_field is not None:
            data["target_field"] = self.target_field.to_dict()
        return data


def action_table(entry: CatalogEntry) -> Dict[int, MoebiusInvolution]:
    """
    Every nontrivial Atkin-Lehner involution of a Table-1 curve as a map on its
    model, generated from the stored maps and w_DN = (x, -y).
    """
    level = entry.level
    table: Dict[int, MoebiusInvolution] = {level.DN: HYPERELLIPTIC}
    table.update(dict(entry.involutions))
    changed = True
    while changed:
        changed = False
        for m1, w1 in list(table.items()):
            for m2, w2 in list(table.items()):
                m = atkin_lehner_compose(level, m1, m2)
                if m != 1 and m not in table:
                    table[m] = w1.compose(w2)
                    changed = True
    return dict(sorted(table.items()))


class Catalog:
    """Catalog entries together with the datasets the checks read"""

    def __init__(self, loader: Optional[CatalogDataLoader] = None):
        self.loader = loader or get_data_loader()
        self.loader.load_data_from_files()
        self.km_fields = self._km_fields()
        self.entries = self._curve_entries() + self._quotient_entries()
        if len(self.curves) != TABLE1_SIZE or len(self.quotients) != TABLE2_SIZE:
            raise CorruptData(
                f"expected {TABLE1_SIZE} curves and {TABLE2_SIZE} quotients, "
                f"got {len(self.curves)} and {len(self.quotients)}"
            )

    def data(self, name: str) -> Any:
        return self.loader.get_data(name)

    def _km_fields(self) -> Dict[Tuple[int, int], Dict[int, FieldSpec]]:
        return {
            (row.D, row.N): {f.m: f.field.to_spec() for f in row.fields}
            for row in self.data("lemma_km").rows
        }

    def _curve_entries(self) -> List[CatalogEntry]:
        cases = {(c.D, c.N): c for c in self.data("descent_cases").cases}
        entries = []
        for row in self.data("table1").rows:
            case = cases.get((row.D, row.N))
            descent = None
            if case is not None:
                descent = DescentData(
                    curve=case.curve.to_curve(),
                    d=to_rational(case.d),
                    generators=tuple(g.to_point() for g in case.generators),
                )
            entries.append(CatalogEntry(
                table=CatalogTable.CURVES,
                D=row.D,
                N=row.N,
                model=row.model.to_model(),
                jacobian_label=row.jacobian_label,
                source=row.source,
                involutions=tuple((w.m, w.to_map()) for w in row.involutions),
                jacobian_sw=descent.curve if descent else None,
                descent=descent,
                target_field=self.km_fields.get((row.D, row.N), {}).get(row.D * row.N),
            ))
        return entries

    def _quotient_entries(self) -> List[CatalogEntry]:
        points = {(r.D, r.m): r for r in self.data("table3").rows}
        entries = []
        for row in self.data("table2").rows:
            descent_row = points.get((row.D, row.m))
            if descent_row is None:
                raise CorruptData(f"no descent data for quotient ({row.D},{row.m})")
            descent = DescentData(
                curve=descent_row.curve.to_curve(),
                d=to_rational(descent_row.d),
                point=descent_row.point.to_point(),
                on_twist=descent_row.descent_curve == "twist",
                corrected_point=descent_row.corrected_point.to_point() if descent_row.corrected_point else None,
            )
            entries.append(CatalogEntry(
                table=CatalogTable.QUOTIENTS,
                D=row.D,
                N=1,
                m=row.m,
                model=row.model.to_model(),
                jacobian_label=row.jacobian_label,
                source=row.source,
                jacobian_sw=descent.curve,
                descent=descent,
            ))
        return entries

    @property
    def curves(self) -> List[CatalogEntry]:
        return [e for e in self.entries if e.table is CatalogTable.CURVES]

    @property
    def quotients(self) -> List[CatalogEntry]:
        return [e for e in self.entries if e.table is CatalogTable.QUOTIENTS]

    def curve(self, D: int, N: int) -> CatalogEntry:
        for entry in self.curves:
            if (entry.D, entry.N) == (D, N):
                return entry
        raise KeyError(f"no catalog curve X0({D},{N})")

    def quotient(self, D: int, m: int) -> CatalogEntry:
        for entry in self.quotients:
            if (entry.D, entry.m) == (D, m):
                return entry
        raise KeyError(f"no catalog quotient X0({D},1)/<w_{m}>")


@execution_tracker("catalog", "load_catalog")
def load_catalog(loader: Optional[CatalogDataLoader] = None) -> List[CatalogEntry]:
    """The 11 curves and 17 quotients.

    Raises:
        CorruptData
    """
    return Catalog(loader).entries


@lru_cache(maxsize=1)
def get_catalog() -> Catalog:
    return Catalog()


@lru_cache(maxsize=None)
def quotient_target(D: int, m: int):
    """
    Fixed locus of the involution induced by w_D on X0(D, 1)/<w_m>, computed
    from CM theory (its fields are the target for the Table-2 models).
    """
    return quotient_involution_fields(Level(D, 1), m, D)


# -- model-finding methods --------------------------------------------------

@dataclass
class RankedCandidate:
    candidate: DescentCandidate
    fingerprint: Optional[FieldFingerprint]
    matches: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.candidate.to_dict(),
            "fingerprint": self.fingerprint.to_dict() if self.fingerprint else None,
            "matches": self.matches,
        }


@dataclass
class Method1Result:
    """Descent candidates ranked against the field of definition of the fixed points"""
    target: FieldFingerprint
    candidates: List[RankedCandidate]

    @property
    def matches(self) -> List[RankedCandidate]:
        return [c for c in self.candidates if c.matches]

    @property
    def selected(self) -> Optional[DescentCandidate]:
        """The matching candidate when exactly one matches"""
        matches = self.matches
        return matches[0].candidate if len(matches) == 1 else None

    def to_dict(self) -> Dict[str, Any]:
        selected = self.selected
        return {
            "target": self.target.to_dict(),
            "selected": selected.to_dict() if selected else None,
            "unique": selected is not None,
            "rejected": [c.to_dict() for c in self.candidates if not c.matches],
        }


def select_descent_model(curve: EllipticCurveSW, d: Union[Fraction, int, str], reps: Sequence[CurvePoint],
                         target: FieldFingerprint, labels: Optional[Sequence[str]] = None) -> Method1Result:
    """
    First method: every class of twist(E, d)(Q)/2 twist(E, d)(Q) gives a model
    y^2 = d f_P(x); keep those whose splitting field has the target fingerprint.
    """
    ranked = []
    for candidate in descent_candidates(curve, d, reps, labels):
        if candidate.model is None:
            ranked.append(RankedCandidate(candidate, None, False))
            continue
        try:
            fingerprint = splitting_fingerprint(candidate.model.f)
        except RepeatedRoots:
            ranked.append(RankedCandidate(candidate, None, False))
            continue
        ranked.append(RankedCandidate(candidate, fingerprint, fingerprint == target))
    result = Method1Result(target, ranked)
    logger.debug("method1_ranked", candidates=len(ranked), matches=len(result.matches))
    return result


@dataclass
class Method2Result:
    """Second method applied to a known model: quotient, its Jacobian and the criterion models"""
    model: GenusOneModel
    case: CaseData
    quotient: GenusOneModel
    quotient_jacobian: EllipticCurveSW
    candidates: List[CriterionCandidate] = field(default_factory=list)
    reproduced: Optional[CriterionCandidate] = None
    isogeny_scaling: Optional[Fraction] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "case": self.case.to_dict(),
            "quotient": self.quotient.to_dict(),
            "quotient_jacobian": self.quotient_jacobian.to_dict(),
            "candidates": [c.to_dict() for c in self.candidates],
            "reproduced": self.reproduced is not None,
            "isogeny_scaling": format_rational(self.isogeny_scaling) if self.isogeny_scaling is not None else None,
        }


def run_method2(model: GenusOneModel) -> Method2Result:
    """
    Rebuild a model from the Jacobian of its quotient curve. Only even models
    go through the criterion; palindromic ones stop at the quotient.

    Raises:
        CaseOther
    """
    case = detect_case(model)
    quotient = quotient_curve(model)
    quotient_jacobian = jacobian(quotient, normalized=True)
    result = Method2Result(model, case, quotient, quotient_jacobian)
    if case.case is not ModelCase.EVEN:
        return result
    result.candidates = select_criterion_model(
        quotient_jacobian.A, quotient_jacobian.B, model.d, target=jacobian(model, normalized=True)
    )
    u0 = case.b * case.d / 3
    result.reproduced = next(
        (c for c in result.candidates if c.u0 == u0 and c.matches_target and c.model.rhs == model.rhs), None
    )
    result.isogeny_scaling = case_one_isogeny_check(model)
    return result


# -- verification -----------------------------------------------------------

class Scope(Enum):
    TABLE1 = "table1"
    TABLE2 = "table2"
    TABLE3 = "table3"
    KURIHARA = "kurihara"
    INVOLUTIONS = "involutions"
    KM = "km"
    SCAN = "scan"
    QUOTIENTS = "quotients"
    ELLIPTIC = "elliptic"
    METHOD2 = "method2"
    ALL = "all"


@dataclass
class Check:
    name: str
    passed: bool
    witness: Dict[str, Any] = field(default_factory=dict)
    erratum: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "passed": self.passed, "witness": self.witness}
        if self.erratum is not None:
            data["erratum"] = self.erratum
        return data


@dataclass
class ScopeReport:
    scope: str
    checks: List[Check]
    latency_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        summary = execution_summary(
            f"verify_{self.scope}",
            "success" if self.passed else "failed",
            self.latency_ms,
            {"checks": len(self.checks), "failed": len(self.failures)},
        )
        summary["scope"] = self.scope
        summary["checks"] = [c.to_dict() for c in self.checks]
        return summary


@dataclass
class VerificationReport:
    scopes: List[ScopeReport]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.scopes)

    def failures(self) -> List[Tuple[str, Check]]:
        return [(s.scope, c) for s in self.scopes for c in s.failures]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "checks": sum(len(s.checks) for s in self.scopes),
            "failed": len(self.failures()),
            "scopes": [s.to_dict() for s in self.scopes],
        }


Witness = Tuple[bool, Dict[str, Any]]


def _guarded(name: str, body: Callable[[], Witness], erratum: Optional[int] = None) -> Check:
    """Run one check; library errors become failed checks"""
    try:
        passed, witness = body()
    except (ValueError, ArithmeticError, AssertionError, KeyError) as e:
        logger.warning("check_raised", check=name, error_type=type(e).__name__, error_message=str(e))
        return Check(name, False, {"error": f"{type(e).__name__}: {e}"}, erratum)
    return Check(name, bool(passed), witness, erratum)


def _no_real_points(model: GenusOneModel) -> Witness:
    real_roots = int(model.rhs.to_sympy().count_roots())
    return model.rhs.leading < 0 and real_roots == 0, {
        "leading": format_rational(model.rhs.leading),
        "real_roots": real_roots,
    }


# table1

def _curve_model(entry: CatalogEntry) -> Witness:
    I, J = invariants_IJ(entry.model)
    curve = jacobian(entry.model, normalized=True)
    return genus(entry.level) == 1, {
        "genus": genus(entry.level),
        "I": format_rational(I),
        "J": format_rational(J),
        "jacobian": curve.to_dict(),
        "label": entry.jacobian_label,
    }


def _descent_case_checks(catalog: Catalog, case: Any) -> List[Check]:
    entry = catalog.curve(case.D, case.N)
    key = entry.key
    curve, d = case.curve.to_curve(), to_rational(case.d)
    twisted = twist(curve, d)
    generators = [g.to_point() for g in case.generators]
    checks = [_guarded(f"{key}:twist", lambda: (
        twisted == case.twisted_curve.to_curve() and all(twisted.contains(g) for g in generators),
        {"twisted": twisted.to_dict(), "label": case.twisted_label},
    ))]

    points: Dict[str, CurvePoint] = {}
    for rep in case.representatives:
        def representative(rep=rep) -> Witness:
            point = twisted.combine(generators, rep.multipliers)
            points[rep.label] = point
            quartic = descent_quartic(twisted, point)
            expected_point = rep.point.to_point() if rep.point else point
            return quartic == Poly.from_json(rep.quartic) and point == expected_point, {
                "multipliers": rep.multipliers,
                "point": point.to_dict(),
                "quartic": quartic.to_json(),
            }
        checks.append(_guarded(f"{key}:case_{rep.label}", representative))

    target = fingerprint_of_spec(catalog.km_fields[(case.D, case.N)][case.target_m])
    labels = [rep.label for rep in case.representatives]

    def selection() -> Witness:
        reps = [points.get(label) or twisted.combine(generators, rep.multipliers)
                for label, rep in zip(labels, case.representatives)]
        result = select_descent_model(curve, d, reps, target, labels)
        chosen = result.selected
        return chosen is not None and chosen.label == case.selected, result.to_dict()
    checks.append(_guarded(f"{key}:method1_selection", selection))

    selected = next(r for r in case.representatives if r.label == case.selected)
    descent_model = GenusOneModel(d, Poly.from_json(selected.quartic))
    transform = case.transform.to_map()
    checks.append(_guarded(f"{key}:transform_to_table", lambda: (
        map_transforms(entry.model, descent_model, transform),
        {"map": str(transform), "from": descent_model.to_dict(), "to": entry.model.to_dict()},
    )))

    def invariants() -> Witness:
        I, J = invariants_IJ(entry.model)
        scaling = is_isomorphic(jacobian(entry.model), curve)
        passed = scaling == to_rational(case.jacobian_scaling)
        if case.invariants is not None:
            passed = passed and (I, J) == (to_rational(case.invariants.I), to_rational(case.invariants.J))
        return passed, {
            "I": format_rational(I),
            "J": format_rational(J),
            "u": format_rational(scaling) if scaling is not None else None,
        }
    checks.append(_guarded(f"{key}:jacobian", invariants))
    return checks


def table1_checks(catalog: Catalog) -> List[Check]:
    checks = []
    for entry in catalog.curves:
        checks.append(_guarded(f"{entry.key}:model", lambda e=entry: _curve_model(e)))
        checks.append(_guarded(f"{entry.key}:no_real_points", lambda e=entry: _no_real_points(e.model)))
    for case in catalog.data("descent_cases").cases:
        checks.extend(_descent_case_checks(catalog, case))
    return checks


# table2

def _quotient_model(catalog: Catalog, entry: CatalogEntry) -> Witness:
    listed = [tuple(pair) for pair in catalog.data("table2").non_elliptic_quotients]
    return (entry.D, entry.m) in listed and entry.m in atkin_lehner_group(entry.level), {
        "model": entry.model.to_dict(),
        "label": entry.jacobian_label,
    }


def table2_checks(catalog: Catalog) -> List[Check]:
    checks = []
    for entry in catalog.quotients:
        checks.append(_guarded(f"{entry.key}:model", lambda e=entry: _quotient_model(catalog, e)))
        checks.append(_guarded(f"{entry.key}:quotient_genus", lambda e=entry: (
            quotient_genus(e.level, e.m) == 1,
            {"genus": genus(e.level), "fixed_points": fixed_point_count(e.level, e.m)},
        )))
    return checks


# table3

def _descent_row(entry: CatalogEntry) -> Witness:
    descent = entry.descent
    descent_model = descent.model()
    mu = same_jacobian(descent_model, entry.model)
    witness: Dict[str, Any] = {
        "curve": descent.descent_curve.to_dict(),
        "point": descent.point.to_dict(),
        "descent_model": descent_model.to_dict(),
        "mu": format_rational(mu) if mu is not None else None,
    }
    passed = descent.descent_curve.contains(descent.point) and mu is not None
    passed = passed and squarefree_class(entry.model.rhs.leading) == squarefree_class(descent.d)
    return passed, witness


def table3_checks(catalog: Catalog) -> List[Check]:
    checks = []
    for entry in catalog.quotients:
        checks.append(_guarded(f"{entry.key}:descent", lambda e=entry: _descent_row(e)))
        checks.append(_guarded(f"{entry.key}:jacobian", lambda e=entry: (
            is_isomorphic(jacobian(e.model, normalized=True), twist(e.descent.descent_curve, e.descent.d)) is not None,
            {"label": e.jacobian_label},
        )))
    return checks


# kurihara

def _quadric_form(coefficients: Sequence[Fraction], U: Poly, V: Poly) -> Poly:
    q0, q1, q2 = coefficients
    return (U * U).scale(q2) + (U * V).scale(q1) + (V * V).scale(q0)


def kurihara_checks(catalog: Catalog) -> List[Check]:
    data = catalog.data("kurihara")
    entry = catalog.curve(data.D, data.N)
    sub = data.substitution
    U, V, W, Z = (Poly.from_json(p) for p in (sub.U, sub.V, sub.W, sub.Z))
    target = data.target.to_model()
    w_quadric, z_quadric = ([to_rational(c) for c in q.coefficients] for q in data.quadrics)
    transform = data.map_to_table1.to_map()
    return [
        _guarded("kurihara:w_quadric", lambda: (
            W * W == _quadric_form(w_quadric, U, V),
            {"W^2": (W * W).to_json()},
        )),
        _guarded("kurihara:z_quadric", lambda: (
            target.rhs * (Z * Z) == _quadric_form(z_quadric, U, V),
            {"target": target.to_dict()},
        )),
        _guarded("kurihara:map_to_table1", lambda: (
            map_transforms(entry.model, target, transform),
            {"map": str(transform)},
        )),
        _guarded("kurihara:same_jacobian", lambda: (
            same_jacobian(target, entry.model) is not None,
            {"mu": format_rational(same_jacobian(target, entry.model) or Fraction(0))},
        )),
    ]


# involutions

def _fixed_field_check(entry: CatalogEntry, m: int, w: MoebiusInvolution, spec: FieldSpec) -> Witness:
    want = fingerprint_of_spec(spec)
    got = fingerprint_of_spec(involution_fixed_field(entry.model, w))
    count = sum(locus.count for locus in involution_fixed_points(entry.model, w))
    return verify_involution(entry.model, w) and got == want and count == 4, {
        "map": str(w),
        "fixed_points": count,
        "fingerprint": got.to_dict(),
        "expected": spec.to_dict(),
    }


def involution_checks(catalog: Catalog) -> List[Check]:
    checks = []
    for entry in catalog.curves:
        group = atkin_lehner_group(entry.level)
        for m, w in entry.involutions + ((entry.level.DN, HYPERELLIPTIC),):
            checks.append(_guarded(f"{entry.key}:w{m}", lambda e=entry, m=m, w=w: (
                verify_involution(e.model, w) and m in group,
                {"map": str(w), "genuine_fixed_points": w.e == -w.det or w.is_scalar},
            )))
        actions = action_table(entry)
        for m, spec in catalog.km_fields.get((entry.D, entry.N), {}).items():
            checks.append(_guarded(f"{entry.key}:fixed_field_w{m}",
                                   lambda e=entry, m=m, s=spec: _fixed_field_check(e, m, actions[m], s)))
    return checks


# km

def _km_check(level: Level, m: int, spec: FieldSpec) -> Witness:
    want = fingerprint_of_spec(spec)
    fields = fixed_point_fields(level, m)
    count = fixed_point_count(level, m)
    if len(fields) == 1 and len(fields[0].candidates) > 1:
        field_ok = sum(c.fingerprint == want for c in fields[0].candidates) == 1
    else:
        field_ok = fingerprint_of_compositum(f.fingerprint for f in fields) == want
    return count == 4 and field_ok, {
        "count": count,
        "fields": [f.to_dict() for f in fields],
        "expected": want.to_dict(),
    }


def _quadratic_points(level: Level) -> Witness:
    orders = quadratic_point_orders(level, QUADRATIC_POINT_BOUND)
    degrees = {str(o.disc): cm_field_of_definition(level, o).degree_over_Q for o in orders}
    return all(deg <= 2 for deg in degrees.values()), {"degrees": degrees}


def km_checks(catalog: Catalog) -> List[Check]:
    checks = []
    for (D, N), fields in catalog.km_fields.items():
        level = Level(D, N)
        for m, spec in fields.items():
            checks.append(_guarded(f"{level}:K{m}", lambda lv=level, m=m, s=spec: _km_check(lv, m, s)))
        checks.append(_guarded(f"{level}:quadratic_points", lambda lv=level: _quadratic_points(lv)))
    return checks


# scan

def scan_checks(catalog: Catalog) -> List[Check]:
    expected = sorted(entry.level for entry in catalog.curves)

    def full_scan() -> Witness:
        found = scan_genus_one(SCAN_BOUND)
        return found == expected, {"levels": [str(level) for level in found]}

    return [
        _guarded(f"scan:{SCAN_BOUND}", full_scan),
        _guarded("scan:14", lambda: (scan_genus_one(14) == [Level(14, 1)], {})),
        _guarded("scan:13", lambda: (scan_genus_one(13) == [], {})),
        _guarded("genus:(6,1)", lambda: (genus(Level(6, 1)) == 0, {"genus": genus(Level(6, 1))})),
    ]


# quotients

def _quotient_fields(entry: CatalogEntry) -> Witness:
    fields = quotient_target(entry.D, entry.m)
    want = splitting_fingerprint(entry.model.f)
    return fields.fingerprint == want, {
        "provenance": "computed",
        "target": fields.to_dict(),
        "splitting_field": want.to_dict(),
    }


def quotient_checks(catalog: Catalog) -> List[Check]:
    return [_guarded(f"{entry.key}:fixed_locus_field", lambda e=entry: _quotient_fields(e))
            for entry in catalog.quotients]


# elliptic

def _elliptic_row(row: Any) -> Witness:
    level = Level(row.D, 1)
    order = QuadOrder.from_disc(row.disc)
    h = class_group(order.disc).h
    locus = cm_locus(level, order)
    rational = locus.nonempty and rational_cm_point(row.D, row.m, order)
    return h == 2 and rational and quotient_genus(level, row.m) == 1, {
        "h": h,
        "label": row.label,
        "field": quotient_cm_field(level, order, row.m).to_dict() if locus.nonempty else None,
    }


def elliptic_checks(catalog: Catalog) -> List[Check]:
    return [_guarded(f"({row.D},{row.m}):rational_cm_point", lambda r=row: _elliptic_row(r))
            for row in catalog.data("elliptic_quotients").rows]


# method2

def _is_negation(w: MoebiusInvolution) -> bool:
    """x -> -x up to the scaling of the matrix"""
    return w.beta == 0 and w.gamma == 0 and w.alpha == -w.delta


def _method2_row(catalog: Catalog, row: Any) -> Witness:
    entry = catalog.curve(row.D, row.N)
    result = run_method2(entry.model)
    d_listed = squarefree_class(entry.model.d) in row.d
    witness = {"labels": [row.jacobian_label, row.quotient_jacobian_label], **result.to_dict()}
    if result.case.case is not ModelCase.EVEN:
        return d_listed, witness
    negation = [m for m, w in action_table(entry).items() if _is_negation(w)]
    witness["negation_involution"] = negation
    passed = d_listed and result.reproduced is not None and result.isogeny_scaling is not None
    if row.m is not None:
        # w_m and w_m composed with (x, -y) both act as x -> -x
        pair = sorted({row.m, entry.level.DN // row.m})
        passed = passed and negation == pair
    return passed, witness


def method2_checks(catalog: Catalog) -> List[Check]:
    return [_guarded(f"({row.D},{row.N}):criterion", lambda r=row: _method2_row(catalog, r))
            for row in catalog.data("method2").rows]


# errata

def _erratum_quartic(catalog: Catalog) -> Witness:
    case = next(c for c in catalog.data("descent_cases").cases if (c.D, c.N) == (34, 1))
    rep = next(r for r in case.representatives if r.printed_quartic)
    twisted = twist(case.curve.to_curve(), to_rational(case.d))
    point = twisted.combine([g.to_point() for g in case.generators], rep.multipliers)
    derived = descent_quartic(twisted, point)
    return derived == Poly.from_json(rep.quartic) and derived != Poly.from_json(rep.printed_quartic), {
        "printed": rep.printed_quartic,
        "derived": derived.to_json(),
    }


def _erratum_multiplier(catalog: Catalog) -> Witness:
    case = next(c for c in catalog.data("descent_cases").cases if c.printed_transform is not None)
    entry = catalog.curve(case.D, case.N)
    selected = next(r for r in case.representatives if r.label == case.selected)
    descent_model = GenusOneModel(to_rational(case.d), Poly.from_json(selected.quartic))
    printed, corrected = case.printed_transform.to_map(), case.transform.to_map()
    pulled_back = apply_transform(descent_model.rhs, printed.matrix)
    factor = pulled_back.leading / (entry.model.rhs.leading * printed.e * printed.e)
    return (
        not map_transforms(entry.model, descent_model, printed)
        and map_transforms(entry.model, descent_model, corrected)
        and pulled_back == entry.model.rhs.scale(factor * printed.e * printed.e)
    ), {"printed_e": format_rational(printed.e), "leftover_factor": format_rational(factor)}


def _erratum_21(catalog: Catalog) -> Witness:
    level = Level(21, 1)
    printed, corrected = fixed_point_count(level, 3), fixed_point_count(level, 7)
    return printed == 0 and corrected == 4, {"w3": printed, "w7": corrected}


def _erratum_w15(catalog: Catalog) -> Witness:
    group = atkin_lehner_group(Level(10, 7))
    return 15 not in group and 5 in group, {"group": group}


def _erratum_row(catalog: Catalog, erratum: int) -> Any:
    return next(r for r in catalog.data("errata").rows if r.id == erratum)


def _erratum_w10(catalog: Catalog) -> Witness:
    row = _erratum_row(catalog, 5)
    printed = row.printed_map.to_map()
    entry = catalog.curve(10, 7)
    corrected = dict(entry.involutions)[10]
    return not printed.is_involution() and verify_involution(entry.model, corrected), {
        "printed": str(printed),
        "corrected": str(corrected),
    }


def _erratum_69(catalog: Catalog) -> Witness:
    entry = catalog.quotient(69, 3)
    descent = entry.descent
    on_printed = descent.curve.contains(descent.point)
    on_twist = descent.twisted.contains(descent.point)
    reproduces = descent.model().rhs == entry.model.rhs
    # literal reading: the image of P under the twist (x, y) -> (d x, d^2 y) on E_d
    corrected = descent.corrected_point
    twist_torsion = descent.twisted.contains(corrected) and corrected.y == 0
    scaled = corrected.x == descent.d * descent.point.x
    return on_printed and not on_twist and reproduces and twist_torsion and scaled, {
        "printed_point_on_curve": on_printed,
        "printed_point_on_twist": on_twist,
        "printed_curve_reproduces_model": reproduces,
        "corrected_point": corrected.to_dict(),
        "corrected_point_on_twist": twist_torsion,
    }


def _erratum_kurihara(catalog: Catalog) -> Witness:
    data = catalog.data("kurihara")
    entry = catalog.curve(data.D, data.N)
    target = data.target.to_model()
    printed = _erratum_row(catalog, 8).printed_map.to_map()
    corrected = data.map_to_table1.to_map()
    fails = not map_transforms(entry.model, target, printed) and not map_transforms(target, entry.model, printed)
    return fails and map_transforms(entry.model, target, corrected), {
        "printed": str(printed),
        "corrected": str(corrected),
    }


def _erratum_85(catalog: Catalog) -> Witness:
    fields = quotient_target(85, 17)
    extra = [p for p in fields.parts if p.involution != 85]
    only_wD = fingerprint_of_compositum(p.field.fingerprint for p in fields.parts if p.involution == 85)
    want = splitting_fingerprint(catalog.quotient(85, 17).model.f)
    return bool(extra) and only_wD != want and fields.fingerprint == want, {
        "extra_involutions": sorted({p.involution for p in extra}),
        "without_extra": only_wD.to_dict(),
        "with_extra": fields.fingerprint.to_dict(),
    }


ERRATUM_WITNESSES: Dict[int, Callable[[Catalog], Witness]] = {
    1: _erratum_quartic,
    2: _erratum_multiplier,
    3: _erratum_21,
    4: _erratum_w15,
    5: _erratum_w10,
    6: _erratum_69,
    7: _erratum_85,
    8: _erratum_kurihara,
}


def errata_checks(catalog: Catalog, scope: Scope) -> List[Check]:
    checks = []
    for row in catalog.data("errata").rows:
        if row.scope != scope.value:
            continue
        witness = ERRATUM_WITNESSES.get(row.id)
        if witness is None:
            checks.append(Check(f"erratum_{row.id}", False, {"error": "no witness registered"}, row.id))
            continue
        check = _guarded(f"erratum_{row.id}", lambda w=witness: w(catalog), row.id)
        check.witness.update({"location": row.location, "printed": row.printed, "correction": row.correction})
        checks.append(check)
    return checks


SCOPE_CHECKS: Dict[Scope, Callable[[Catalog], List[Check]]] = {
    Scope.TABLE1: table1_checks,
    Scope.TABLE2: table2_checks,
    Scope.TABLE3: table3_checks,
    Scope.KURIHARA: kurihara_checks,
    Scope.INVOLUTIONS: involution_checks,
    Scope.KM: km_checks,
    Scope.SCAN: scan_checks,
    Scope.QUOTIENTS: quotient_checks,
    Scope.ELLIPTIC: elliptic_checks,
    Scope.METHOD2: method2_checks,
}


@measure_latency
def _run_scope(catalog: Catalog, scope: Scope) -> List[Check]:
    checks = execution_tracker("catalog", f"verify_{scope.value}")(SCOPE_CHECKS[scope])(catalog)
    return checks + errata_checks(catalog, scope)


def verify_all(scope: Union[Scope, str] = Scope.ALL, catalog: Optional[Catalog] = None) -> VerificationReport:
    """
    Re-derive the catalog for one scope (or all of them). Failures are report
    entries, never exceptions.
    """
    scope = Scope(scope)
    catalog = catalog or get_catalog()
    scopes = [s for s in Scope if s is not Scope.ALL] if scope is Scope.ALL else [scope]
    reports = []
    for s in scopes:
        checks, latency_ms = _run_scope(catalog, s)
        report = ScopeReport(s.value, checks, latency_ms)
        logger.info("scope_verified", scope=s.value, passed=report.passed,
                    checks=len(checks), latency_ms=latency_ms)
        reports.append(report)
    return VerificationReport(reports)
