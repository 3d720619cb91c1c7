"""
Genus-one models y^2 = d*f(x) and their short Weierstrass Jacobians.

Covers the quartic invariants I and J, twists, 2-descent quartics,
GL2-transforms of quartics, Moebius involutions and their fixed points,
the quotient curves of even and palindromic-twist models and the
2-isogeny criterion for building a model from its quotient.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product as cartesian
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .core import (
    Poly,
    RationalLike,
    discriminant,
    format_rational,
    is_rational_square,
    rational_root,
    rational_roots,
    rational_sqrt,
    to_rational,
)
from .fields import FieldKind, FieldSpec
from .shared.errors import (
    CaseOther,
    NotARoot,
    NotTwoTorsion,
    PointNotOnCurve,
    RepeatedRoots,
    SingularJacobian,
)


@dataclass(frozen=True)
class GenusOneModel:
    """Plane model y^2 = d * f(x) with f a squarefree cubic or quartic"""
    d: Fraction
    f: Poly

    def __post_init__(self):
        object.__setattr__(self, "d", to_rational(self.d))
        self.validate()

    def validate(self) -> None:
        if self.d == 0:
            raise ValueError("model scalar d must be nonzero")
        if self.f.degree not in (3, 4):
            raise ValueError(f"model needs a cubic or quartic, got degree {self.f.degree}")
        if discriminant(self.f) == 0:
            raise RepeatedRoots(f"f = {self.f} has a repeated root")

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[RationalLike], d: RationalLike = 1) -> "GenusOneModel":
        return cls(to_rational(d), Poly.from_json(coeffs))

    @property
    def rhs(self) -> Poly:
        """The full right-hand side d*f"""
        return self.f.scale(self.d)

    def coefficients(self) -> List[Fraction]:
        """a0..a4 of d*f (a4 = 0 for cubics)"""
        rhs = self.rhs
        return [rhs.coefficient(i) for i in range(5)]

    def to_dict(self) -> Dict[str, Any]:
        return {"d": format_rational(self.d), "f": self.f.to_json()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GenusOneModel":
        return cls(to_rational(data.get("d", 1)), Poly.from_json(data["f"]))

    def __str__(self) -> str:
        if self.d == 1:
            return f"y^2 = {self.f}"
        return f"y^2 = {format_rational(self.d)}*({self.f})"


@dataclass(frozen=True)
class CurvePoint:
    """Affine point or the point at infinity"""
    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    infinity: bool = False

    @classmethod
    def at(cls, x: RationalLike, y: RationalLike) -> "CurvePoint":
        return cls(to_rational(x), to_rational(y))

    @classmethod
    def zero(cls) -> "CurvePoint":
        return cls(infinity=True)

    def to_dict(self) -> Dict[str, Any]:
        if self.infinity:
            return {"infinity": True}
        return {"x": format_rational(self.x), "y": format_rational(self.y)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CurvePoint":
        if data.get("infinity"):
            return cls.zero()
        return cls.at(data["x"], data["y"])

    def __str__(self) -> str:
        if self.infinity:
            return "O"
        return f"({format_rational(self.x)}, {format_rational(self.y)})"


@dataclass(frozen=True)
class EllipticCurveSW:
    """Short Weierstrass curve y^2 = x^3 + A x + B over Q"""
    A: Fraction
    B: Fraction

    def __post_init__(self):
        object.__setattr__(self, "A", to_rational(self.A))
        object.__setattr__(self, "B", to_rational(self.B))
        if self.discriminant == 0:
            raise SingularJacobian(f"y^2 = x^3 + ({self.A})x + ({self.B}) is singular")

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.A ** 3 + 27 * self.B ** 2)

    @property
    def cubic(self) -> Poly:
        return Poly.of(self.B, self.A, 0, 1)

    def contains(self, point: CurvePoint) -> bool:
        if point.infinity:
            return True
        return point.y * point.y == self.cubic(point.x)

    def require(self, point: CurvePoint) -> None:
        if not self.contains(point):
            raise PointNotOnCurve(f"{point} is not on {self}")

    def negate(self, point: CurvePoint) -> CurvePoint:
        return point if point.infinity else CurvePoint(point.x, -point.y)

    def add(self, p: CurvePoint, q: CurvePoint) -> CurvePoint:
        """Chord-tangent addition"""
        self.require(p)
        self.require(q)
        if p.infinity:
            return q
        if q.infinity:
            return p
        if p.x == q.x:
            if p.y + q.y == 0:
                return CurvePoint.zero()
            slope = (3 * p.x * p.x + self.A) / (2 * p.y)
        else:
            slope = (q.y - p.y) / (q.x - p.x)
        x3 = slope * slope - p.x - q.x
        return CurvePoint(x3, slope * (p.x - x3) - p.y)

    def multiply(self, point: CurvePoint, k: int) -> CurvePoint:
        if k < 0:
            return self.multiply(self.negate(point), -k)
        result, base = CurvePoint.zero(), point
        while k:
            if k & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            k >>= 1
        return result

    def combine(self, points: Sequence[CurvePoint], multipliers: Sequence[int]) -> CurvePoint:
        """sum(k_i * P_i)"""
        total = CurvePoint.zero()
        for point, k in zip(points, multipliers):
            total = self.add(total, self.multiply(point, k))
        return total

    def to_dict(self) -> Dict[str, str]:
        return {"A": format_rational(self.A), "B": format_rational(self.B)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EllipticCurveSW":
        return cls(to_rational(data["A"]), to_rational(data["B"]))

    def __str__(self) -> str:
        return f"y^2 = x^3 + ({format_rational(self.A)})x + ({format_rational(self.B)})"


@dataclass(frozen=True)
class MoebiusInvolution:
    """
    The map (x, y) -> ((alpha x + beta)/(gamma x + delta), e y/(gamma x + delta)^2).

    The name reflects its main use; maps between different models (not
    involutions) use the same type.
    """
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    e: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "e"):
            object.__setattr__(self, name, to_rational(getattr(self, name)))
        if self.det == 0:
            raise ValueError("Moebius matrix must be invertible")
        if self.e == 0:
            raise ValueError("y-multiplier must be nonzero")

    @classmethod
    def of(cls, alpha, beta, gamma, delta, e=1) -> "MoebiusInvolution":
        return cls(*(to_rational(v) for v in (alpha, beta, gamma, delta, e)))

    @property
    def matrix(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.alpha, self.beta, self.gamma, self.delta

    @property
    def det(self) -> Fraction:
        return self.alpha * self.delta - self.beta * self.gamma

    @property
    def trace(self) -> Fraction:
        return self.alpha + self.delta

    @property
    def is_scalar(self) -> bool:
        return self.beta == 0 and self.gamma == 0 and self.alpha == self.delta

    def with_multiplier(self, e: RationalLike) -> "MoebiusInvolution":
        return MoebiusInvolution(self.alpha, self.beta, self.gamma, self.delta, to_rational(e))

    def after_hyperelliptic(self) -> "MoebiusInvolution":
        """This map composed with (x, y) -> (x, -y)"""
        return self.with_multiplier(-self.e)

    def compose(self, other: "MoebiusInvolution") -> "MoebiusInvolution":
        """self after other: matrices multiply, and so do the y-multipliers"""
        a, b, c, d = self.matrix
        a2, b2, c2, d2 = other.matrix
        return MoebiusInvolution(
            a * a2 + b * c2, a * b2 + b * d2, c * a2 + d * c2, c * b2 + d * d2, self.e * other.e
        )

    def is_involution(self) -> bool:
        """Squares to the identity and is not itself the identity"""
        if not (self.trace == 0 or self.is_scalar):
            return False
        if self.e * self.e != self.det * self.det:
            return False
        return not (self.is_scalar and self.e == self.alpha * self.alpha)

    def apply(self, point: CurvePoint) -> CurvePoint:
        denominator = self.gamma * point.x + self.delta
        if denominator == 0:
            raise ZeroDivisionError(f"{point} maps to infinity")
        return CurvePoint(
            (self.alpha * point.x + self.beta) / denominator,
            self.e * point.y / (denominator * denominator),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "matrix": [format_rational(v) for v in self.matrix],
            "e": format_rational(self.e),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MoebiusInvolution":
        return cls.of(*data["matrix"], data.get("e", 1))

    def __str__(self) -> str:
        a, b, c, d = (format_rational(v) for v in self.matrix)
        return f"(x,y) -> (({a}x + {b})/({c}x + {d}), {format_rational(self.e)}y/({c}x + {d})^2)"


IDENTITY = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))
HYPERELLIPTIC = MoebiusInvolution.of(1, 0, 0, 1, -1)


# -- invariants and Jacobians -----------------------------------------------

def invariants_IJ(model: GenusOneModel) -> Tuple[Fraction, Fraction]:
    """Classical invariants of the binary quartic d*f"""
    a0, a1, a2, a3, a4 = model.coefficients()
    invariant_i = 12 * a4 * a0 - 3 * a3 * a1 + a2 * a2
    invariant_j = (72 * a4 * a2 * a0 + 9 * a3 * a2 * a1
                   - 27 * a4 * a1 * a1 - 27 * a3 * a3 * a0 - 2 * a2 ** 3)
    return invariant_i, invariant_j


def jacobian(model: GenusOneModel, normalized: bool = False) -> EllipticCurveSW:
    """
    y^2 = x^3 - 27 I x - 27 J, or y^2 = x^3 - (I/3) x - J/27 when normalized.

    Raises:
        SingularJacobian: if the cubic has a repeated root
    """
    invariant_i, invariant_j = invariants_IJ(model)
    if normalized:
        return EllipticCurveSW(-invariant_i / 3, -invariant_j / 27)
    return EllipticCurveSW(-27 * invariant_i, -27 * invariant_j)


def _weighted_ratio(x1: Fraction, x2: Fraction, y1: Fraction, y2: Fraction) -> Optional[Fraction]:
    """Positive mu with x2 = mu^4 x1 and y2 = mu^6 y1, if rational"""
    if (x1 == 0) != (x2 == 0) or (y1 == 0) != (y2 == 0):
        return None
    if x1 != 0 and y1 != 0:
        mu_squared = (y2 / y1) / (x2 / x1)
        mu = rational_sqrt(mu_squared)
        if mu is None or mu ** 4 != x2 / x1:
            return None
        return mu
    if x1 != 0:
        return rational_root(x2 / x1, 4)
    if y1 != 0:
        mu = rational_root(y2 / y1, 6)
        return abs(mu) if mu is not None else None
    return None


def is_isomorphic(e1: EllipticCurveSW, e2: EllipticCurveSW) -> Optional[Fraction]:
    """u > 0 with A2 = u^4 A1 and B2 = u^6 B1, if the curves are Q-isomorphic"""
    return _weighted_ratio(e1.A, e2.A, e1.B, e2.B)


def same_jacobian(m1: GenusOneModel, m2: GenusOneModel) -> Optional[Fraction]:
    """mu > 0 with I2 = mu^4 I1 and J2 = mu^6 J1, if one exists"""
    i1, j1 = invariants_IJ(m1)
    i2, j2 = invariants_IJ(m2)
    return _weighted_ratio(i1, i2, j1, j2)


def twist(curve: EllipticCurveSW, d: RationalLike) -> EllipticCurveSW:
    """Quadratic twist y^2 = x^3 + A d^2 x + B d^3"""
    d = to_rational(d)
    if d == 0:
        raise ValueError("twist parameter must be nonzero")
    return EllipticCurveSW(curve.A * d * d, curve.B * d ** 3)


# -- 2-descent --------------------------------------------------------------

def descent_quartic(curve: EllipticCurveSW, point: CurvePoint) -> Poly:
    """
    x^4 - 6 x_P x^2 + 8 y_P x - 3 x_P^2 - 4A for P on the (twisted) curve;
    the cubic of the curve itself for P at infinity.

    Raises:
        PointNotOnCurve
    """
    curve.require(point)
    if point.infinity:
        return curve.cubic
    return Poly.of(-3 * point.x * point.x - 4 * curve.A, 8 * point.y, -6 * point.x, 0, 1)


@dataclass(frozen=True)
class DescentCandidate:
    """One class of E_d(Q)/2E_d(Q) with its quartic model"""
    label: str
    point: CurvePoint
    model: Optional[GenusOneModel]

    @property
    def is_elliptic(self) -> bool:
        """The class of infinity gives the elliptic curve itself"""
        return self.point.infinity

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "point": self.point.to_dict(),
            "elliptic": self.is_elliptic,
            "model": self.model.to_dict() if self.model else None,
        }


def descent_candidates(curve: EllipticCurveSW, d: RationalLike,
                       reps: Sequence[CurvePoint],
                       labels: Optional[Sequence[str]] = None) -> List[DescentCandidate]:
    """Every representative as a candidate, the class of infinity flagged as elliptic"""
    d = to_rational(d)
    twisted = twist(curve, d)
    labels = list(labels) if labels is not None else [str(i) for i in range(len(reps))]
    out = []
    for label, point in zip(labels, reps):
        quartic = descent_quartic(twisted, point)
        model = None if point.infinity else GenusOneModel(d, quartic)
        out.append(DescentCandidate(label, point, model))
    return out


def enumerate_descent_models(curve: EllipticCurveSW, d: RationalLike,
                             reps: Sequence[CurvePoint]) -> List[GenusOneModel]:
    """
    Models y^2 = d*f_P(x), one per non-infinity representative P of
    twist(E, d)(Q)/2twist(E, d)(Q).

    Raises:
        PointNotOnCurve
    """
    return [c.model for c in descent_candidates(curve, d, reps) if c.model is not None]


def subgroup_representatives(curve: EllipticCurveSW,
                             generators: Sequence[CurvePoint]) -> List[Tuple[Tuple[int, ...], CurvePoint]]:
    """All 0/1 combinations of generators, infinity first"""
    out = []
    for bits in cartesian((0, 1), repeat=len(generators)):
        coefficients = tuple(reversed(bits))
        out.append((coefficients, curve.combine(generators, coefficients)))
    return out


# -- transforms -------------------------------------------------------------

def apply_transform(f: Poly, matrix: Sequence[RationalLike], lam: RationalLike = 1,
                    weight: int = 4) -> Poly:
    """lam^2 * f((alpha x + beta)/(gamma x + delta)) * (gamma x + delta)^weight"""
    alpha, beta, gamma, delta = (to_rational(v) for v in matrix)
    if alpha * delta - beta * gamma == 0:
        raise ValueError("transform matrix must be invertible")
    if f.degree > weight:
        raise ValueError(f"degree {f.degree} exceeds homogenizing weight {weight}")
    numerator, denominator = Poly.of(beta, alpha), Poly.of(delta, gamma)
    out = Poly()
    for i, c in enumerate(f.coeffs):
        if c:
            out = out + (numerator ** i * denominator ** (weight - i)).scale(c)
    lam = to_rational(lam)
    return out.scale(lam * lam)


def map_transforms(source: GenusOneModel, target: GenusOneModel, w: MoebiusInvolution) -> bool:
    """
    Whether w maps y^2 = h_src(x) into y^2 = h_dst(x), i.e.
    h_dst(Mx) (gamma x + delta)^4 = e^2 h_src(x) identically.
    """
    pulled_back = apply_transform(target.rhs, w.matrix)
    return pulled_back == source.rhs.scale(w.e * w.e)


def verify_involution(model: GenusOneModel, w: MoebiusInvolution) -> bool:
    """w preserves the model and squares to the identity"""
    return w.is_involution() and map_transforms(model, model, w)


# -- fixed points -----------------------------------------------------------

class FixedLocusKind(Enum):
    """Where the x-coordinates of the fixed points live"""
    ROOTS_OF_F = "roots_of_f"
    RATIONAL = "rational"
    CONJUGATE_PAIR = "conjugate_pair"
    INFINITY = "infinity"


@dataclass(frozen=True)
class FixedPointLocus:
    """
    A Galois-stable set of fixed points.

    For CONJUGATE_PAIR, x = x_rational + x_irrational * sqrt(t) and
    y^2 = u + v sqrt(t). For RATIONAL and INFINITY, y^2 = u (at infinity, u is
    the leading coefficient).
    """
    kind: FixedLocusKind
    field: FieldSpec
    x_rational: Optional[Fraction] = None
    x_irrational: Optional[Fraction] = None
    t: Optional[Fraction] = None
    u: Optional[Fraction] = None
    v: Optional[Fraction] = None
    count: int = 2

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "count": self.count, "field": self.field.to_dict()}
        for name in ("x_rational", "x_irrational", "t", "u", "v"):
            value = getattr(self, name)
            if value is not None:
                data[name] = format_rational(value)
        return data


def _evaluate_in_quadratic(f: Poly, x0: Tuple[Fraction, Fraction], t: Fraction) -> Tuple[Fraction, Fraction]:
    """f(p + q sqrt t) = u + v sqrt t"""
    p, q = x0
    u, v = Fraction(0), Fraction(0)
    for c in reversed(f.coeffs):
        u, v = u * p + v * q * t + c, u * q + v * p
    return u, v


def _point_field(u: Fraction, v: Fraction, t: Fraction) -> FieldSpec:
    """Field generated by sqrt t and sqrt(u + v sqrt t)"""
    if v != 0:
        return FieldSpec.nested_radical(u, v * v * t)
    if u == 0:
        return FieldSpec.quadratic_of(t)
    parts = [p for p in (FieldSpec.quadratic_of(t), FieldSpec.quadratic_of(u)) if p.m]
    if len(parts) == 1:
        return parts[0]
    return FieldSpec.compositum(parts)


def involution_fixed_points(model: GenusOneModel, w: MoebiusInvolution) -> List[FixedPointLocus]:
    """
    Fixed points of w on the model, grouped into Galois orbits.

    x-coordinates solve gamma x^2 + (delta - alpha) x - beta = 0 (plus
    infinity when gamma = 0); such a point is fixed for every y exactly when
    e = -det. For the hyperelliptic involution the fixed points are the roots
    of f, together with the point at infinity when f is a cubic.
    """
    if not w.is_involution():
        raise ValueError(f"{w} is not an involution")
    h = model.rhs

    if w.is_scalar:
        if w.e != -w.alpha * w.alpha:
            return []
        loci = [FixedPointLocus(FixedLocusKind.ROOTS_OF_F, FieldSpec.splitting(model.f), count=model.f.degree)]
        if model.f.degree == 3:
            # the fourth branch point sits at infinity
            loci.append(FixedPointLocus(FixedLocusKind.INFINITY, FieldSpec.rationals(), u=Fraction(0), count=1))
        return loci

    if w.e != -w.det:
        return _fixed_points_on_branch_locus(model, w)

    loci: List[FixedPointLocus] = []
    a, b, c = w.gamma, w.delta - w.alpha, -w.beta
    if a == 0:
        x0 = -c / b
        y_square = h(x0)
        loci.append(FixedPointLocus(FixedLocusKind.RATIONAL, FieldSpec.quadratic_of(y_square) if y_square else
                                    FieldSpec.rationals(), x_rational=x0, u=y_square))
        if h.degree == 4:
            loci.append(FixedPointLocus(FixedLocusKind.INFINITY, FieldSpec.quadratic_of(h.leading), u=h.leading))
        return loci

    t = b * b - 4 * a * c
    root = rational_sqrt(t)
    if root is not None:
        for x0 in sorted({(-b + root) / (2 * a), (-b - root) / (2 * a)}):
            y_square = h(x0)
            loci.append(FixedPointLocus(FixedLocusKind.RATIONAL,
                                        FieldSpec.quadratic_of(y_square) if y_square else FieldSpec.rationals(),
                                        x_rational=x0, u=y_square))
        return loci

    x0 = (-b / (2 * a), 1 / (2 * a))
    u, v = _evaluate_in_quadratic(h, x0, t)
    loci.append(FixedPointLocus(FixedLocusKind.CONJUGATE_PAIR, _point_field(u, v, t),
                                x_rational=x0[0], x_irrational=x0[1], t=t, u=u, v=v, count=4))
    return loci


def _fixed_points_on_branch_locus(model: GenusOneModel, w: MoebiusInvolution) -> List[FixedPointLocus]:
    """When e = det only points with y = 0 can be fixed"""
    h = model.rhs
    a, b, c = w.gamma, w.delta - w.alpha, -w.beta
    loci = []
    if a == 0:
        x0 = -c / b
        if h(x0) == 0:
            loci.append(FixedPointLocus(FixedLocusKind.RATIONAL, FieldSpec.rationals(), x_rational=x0, u=Fraction(0),
                                        count=1))
        return loci
    t = b * b - 4 * a * c
    root = rational_sqrt(t)
    if root is not None:
        for x0 in sorted({(-b + root) / (2 * a), (-b - root) / (2 * a)}):
            if h(x0) == 0:
                loci.append(FixedPointLocus(FixedLocusKind.RATIONAL, FieldSpec.rationals(), x_rational=x0,
                                            u=Fraction(0), count=1))
        return loci
    x0 = (-b / (2 * a), 1 / (2 * a))
    if _evaluate_in_quadratic(h, x0, t) == (0, 0):
        loci.append(FixedPointLocus(FixedLocusKind.CONJUGATE_PAIR, FieldSpec.quadratic_of(t), x_rational=x0[0],
                                    x_irrational=x0[1], t=t, u=Fraction(0), v=Fraction(0), count=2))
    return loci


def involution_fixed_field(model: GenusOneModel, w: MoebiusInvolution) -> FieldSpec:
    """Compositum of the fields of definition of all fixed points of w"""
    loci = involution_fixed_points(model, w)
    fields = [locus.field for locus in loci if locus.field.kind is not FieldKind.RATIONALS]
    if not fields:
        return FieldSpec.rationals()
    if len(fields) == 1:
        return fields[0]
    return FieldSpec.compositum(fields)


# -- quotient curves --------------------------------------------------------

class ModelCase(Enum):
    """Shapes admitting an explicit quotient by an extra involution"""
    EVEN = "case1"
    PALINDROMIC = "case2"
    OTHER = "other"


@dataclass(frozen=True)
class CaseData:
    """
    EVEN:        d*f = d(x^4 + b x^2 + c)
    PALINDROMIC: d*f = d(x^4 + b x^3 + c x^2 + b eps x + eps^2)
    """
    case: ModelCase
    d: Optional[Fraction] = None
    b: Optional[Fraction] = None
    c: Optional[Fraction] = None
    epsilon: Optional[Fraction] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"case": self.case.value}
        for name in ("d", "b", "c", "epsilon"):
            value = getattr(self, name)
            if value is not None:
                data[name] = format_rational(value)
        return data


def detect_case(model: GenusOneModel) -> CaseData:
    """Recognize the even and palindromic-twist quartic shapes"""
    if model.f.degree != 4:
        return CaseData(ModelCase.OTHER)
    h = model.rhs
    d = h.leading
    a0, a1, a2, a3 = (h.coefficient(i) / d for i in range(4))
    if a1 == 0 and a3 == 0:
        return CaseData(ModelCase.EVEN, d=d, b=a2, c=a0)
    if a3 != 0:
        epsilon = a1 / a3
        if a0 == epsilon * epsilon:
            return CaseData(ModelCase.PALINDROMIC, d=d, b=a3, c=a2, epsilon=epsilon)
    return CaseData(ModelCase.OTHER)


def quotient_curve(model: GenusOneModel) -> GenusOneModel:
    """
    Quotient by the extra involution of the model's shape:
    EVEN gives Y^2 = d(X^3 + bX^2 + cX) via X = x^2, Y = xy;
    PALINDROMIC gives Y^2 = d(X^2 - 4 eps)(X^2 + bX + c - 2 eps) via
    X = x + eps/x, Y = y(1 - eps/x^2).

    Raises:
        CaseOther
    """
    data = detect_case(model)
    if data.case is ModelCase.EVEN:
        return GenusOneModel(data.d, Poly.of(0, data.c, data.b, 1))
    if data.case is ModelCase.PALINDROMIC:
        eps = data.epsilon
        return GenusOneModel(data.d, Poly.of(-4 * eps, 0, 1) * Poly.of(data.c - 2 * eps, data.b, 1))
    raise CaseOther(f"{model} is neither even nor palindromic")


def criterion_model(a_prime: RationalLike, b_prime: RationalLike, u0: RationalLike,
                    d: RationalLike) -> GenusOneModel:
    """
    y^2 = d x^4 + 3 u0 x^2 + (A' + 3 u0^2)/d

    Raises:
        NotARoot: if u0 is not a root of U^3 + A'U + B'
    """
    a_prime, b_prime, u0, d = (to_rational(v) for v in (a_prime, b_prime, u0, d))
    if u0 ** 3 + a_prime * u0 + b_prime != 0:
        raise NotARoot(f"{u0} is not a root of U^3 + ({a_prime})U + ({b_prime})")
    return GenusOneModel(d, Poly.of((a_prime + 3 * u0 * u0) / (d * d), 0, 3 * u0 / d, 0, 1))


def two_isogeny_quotient(curve: EllipticCurveSW, u0: RationalLike) -> EllipticCurveSW:
    """
    Quotient of E by <(u0, 0)>, via y^2 = X(X^2 + aX + b) with a = 3u0 and
    b = 3u0^2 + A, whose image is y^2 = X(X^2 - 2aX + a^2 - 4b).

    Raises:
        NotTwoTorsion
    """
    u0 = to_rational(u0)
    if curve.cubic(u0) != 0:
        raise NotTwoTorsion(f"({u0}, 0) is not a 2-torsion point of {curve}")
    a, b = 3 * u0, 3 * u0 * u0 + curve.A
    a2, b2 = -2 * a, a * a - 4 * b
    # y^2 = X^3 + a2 X^2 + b2 X in short form
    return EllipticCurveSW(b2 - a2 * a2 / 3, 2 * a2 ** 3 / 27 - a2 * b2 / 3)


@dataclass
class CriterionCandidate:
    """Model built from one rational 2-torsion point of the quotient Jacobian"""
    u0: Fraction
    model: GenusOneModel
    isogenous: EllipticCurveSW
    matches_target: Optional[bool] = None
    scaling: Optional[Fraction] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "u0": format_rational(self.u0),
            "model": self.model.to_dict(),
            "isogenous_curve": self.isogenous.to_dict(),
            "matches_target": self.matches_target,
            "scaling": format_rational(self.scaling) if self.scaling is not None else None,
        }


def select_criterion_model(a_prime: RationalLike, b_prime: RationalLike, d: RationalLike,
                           target: Optional[EllipticCurveSW] = None) -> List[CriterionCandidate]:
    """
    One candidate per rational root u0 of U^3 + A'U + B'; with a target
    Jacobian, each is marked by whether the 2-isogenous curve matches it.
    """
    quotient_jacobian = EllipticCurveSW(to_rational(a_prime), to_rational(b_prime))
    candidates = []
    for u0 in sorted(set(rational_roots(quotient_jacobian.cubic))):
        try:
            model = criterion_model(a_prime, b_prime, u0, d)
        except RepeatedRoots:
            continue
        isogenous = two_isogeny_quotient(quotient_jacobian, u0)
        candidate = CriterionCandidate(u0, model, isogenous)
        if target is not None:
            candidate.scaling = is_isomorphic(isogenous, target)
            candidate.matches_target = candidate.scaling is not None
        candidates.append(candidate)
    return candidates


def case_one_isogeny_check(model: GenusOneModel) -> Optional[Fraction]:
    """
    For an even model, u with Jac(model) ~ quotient of Jac(quotient_curve) at
    x = bd/3; None if they are not isomorphic.
    """
    data = detect_case(model)
    if data.case is not ModelCase.EVEN:
        raise CaseOther(f"{model} is not even")
    quotient_jacobian = jacobian(quotient_curve(model), normalized=True)
    image = two_isogeny_quotient(quotient_jacobian, data.b * data.d / 3)
    return is_isomorphic(image, jacobian(model, normalized=True))


def is_square_model(model: GenusOneModel) -> bool:
    """Whether the leading coefficient is a square (rational points at infinity)"""
    return is_rational_square(model.rhs.leading)
