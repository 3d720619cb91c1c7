"""
Splitting-field fingerprints.

Small Galois closures are compared through a fingerprint: closure degree, a
group label and the squarefree integers m of the quadratic subfields Q(sqrt m).
No number-field arithmetic is performed anywhere.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (
    Poly,
    RationalLike,
    discriminant,
    factor_low_degree,
    format_rational,
    is_rational_square,
    prime_factors,
    rational_roots,
    rational_sqrt,
    squarefree_class,
    to_rational,
)
from .shared.errors import DegenerateSpec, DegreeTooHigh, RepeatedRoots

ELEMENTARY_LABELS = {0: "1", 1: "C2", 2: "V4"}


class FieldKind(Enum):
    """FieldSpec variants"""
    RATIONALS = "rationals"
    QUADRATIC = "quadratic"
    BIQUADRATIC = "biquadratic"
    NESTED_RADICAL = "nested_radical"
    COMPOSITUM = "compositum"
    SPLITTING = "splitting"


@dataclass(frozen=True)
class FieldSpec:
    """
    An explicitly presented number field.

    nested_radical(a, b) stands for Q(sqrt(a + sqrt b)) and its conjugate
    Q(sqrt(a - sqrt b)), which share a Galois closure. splitting(f) is the
    splitting field of f.
    """
    kind: FieldKind
    m: Tuple[int, ...] = ()
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None
    parts: Tuple["FieldSpec", ...] = ()
    poly: Optional[Poly] = None

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONALS)

    @classmethod
    def quadratic(cls, m: int) -> "FieldSpec":
        spec = cls(FieldKind.QUADRATIC, m=(m,))
        spec.validate()
        return spec

    @classmethod
    def quadratic_of(cls, value: RationalLike) -> "FieldSpec":
        """Q(sqrt value) for any nonzero rational; Q itself when value is a square"""
        s = squarefree_class(value)
        return cls.rationals() if s == 1 else cls.quadratic(s)

    @classmethod
    def biquadratic(cls, m1: int, m2: int) -> "FieldSpec":
        spec = cls(FieldKind.BIQUADRATIC, m=(m1, m2))
        spec.validate()
        return spec

    @classmethod
    def nested_radical(cls, a: RationalLike, b: RationalLike) -> "FieldSpec":
        spec = cls(FieldKind.NESTED_RADICAL, a=to_rational(a), b=to_rational(b))
        spec.validate()
        return spec

    @classmethod
    def compositum(cls, parts: Iterable["FieldSpec"]) -> "FieldSpec":
        return cls(FieldKind.COMPOSITUM, parts=tuple(parts))

    @classmethod
    def splitting(cls, poly: Poly) -> "FieldSpec":
        return cls(FieldKind.SPLITTING, poly=poly)

    def validate(self) -> None:
        """Raise ValueError on malformed specs"""
        if self.kind is FieldKind.QUADRATIC:
            (m,) = self.m
            if m == 1 or squarefree_class(m) != m:
                raise ValueError(f"quadratic field needs a squarefree m != 1, got {m}")
        elif self.kind is FieldKind.BIQUADRATIC:
            m1, m2 = self.m
            for m in self.m:
                if m == 1 or squarefree_class(m) != m:
                    raise ValueError(f"biquadratic field needs squarefree m != 1, got {m}")
            if m1 == m2:
                raise ValueError("biquadratic field needs distinct generators")
        elif self.kind is FieldKind.NESTED_RADICAL:
            if self.a is None or self.b is None:
                raise ValueError("nested radical needs a and b")
            if is_rational_square(self.b):
                raise ValueError(f"nested radical needs non-square b, got {self.b}")
        elif self.kind is FieldKind.COMPOSITUM:
            for part in self.parts:
                part.validate()
        elif self.kind is FieldKind.SPLITTING:
            if self.poly is None or self.poly.degree < 1:
                raise ValueError("splitting field needs a nonconstant polynomial")

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"type": self.kind.value}
        if self.kind is FieldKind.QUADRATIC:
            data["m"] = self.m[0]
        elif self.kind is FieldKind.BIQUADRATIC:
            data["m"] = list(self.m)
        elif self.kind is FieldKind.NESTED_RADICAL:
            data["a"] = format_rational(self.a)
            data["b"] = format_rational(self.b)
        elif self.kind is FieldKind.COMPOSITUM:
            data["parts"] = [p.to_dict() for p in self.parts]
        elif self.kind is FieldKind.SPLITTING:
            data["poly"] = self.poly.to_json()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FieldSpec":
        from .schemas import FIELD_SPEC_ADAPTER

        return FIELD_SPEC_ADAPTER.validate_python(data).to_spec()

    def __str__(self) -> str:
        if self.kind is FieldKind.RATIONALS:
            return "Q"
        if self.kind is FieldKind.QUADRATIC:
            return f"Q(sqrt({self.m[0]}))"
        if self.kind is FieldKind.BIQUADRATIC:
            return f"Q(sqrt({self.m[0]}), sqrt({self.m[1]}))"
        if self.kind is FieldKind.NESTED_RADICAL:
            return f"Q(sqrt({format_rational(self.a)} +- sqrt({format_rational(self.b)})))"
        if self.kind is FieldKind.SPLITTING:
            return f"split({self.poly})"
        return " . ".join(str(p) for p in self.parts) or "Q"


@dataclass(frozen=True)
class FieldFingerprint:
    """Closure degree, Galois group label and quadratic subfields of a Galois closure"""
    degree: int
    group: str
    subfields: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "subfields", tuple(sorted(set(self.subfields))))

    def to_dict(self) -> Dict[str, Any]:
        return {"degree": self.degree, "group": self.group, "subfields": list(self.subfields)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FieldFingerprint":
        return cls(int(data["degree"]), str(data["group"]), tuple(int(m) for m in data["subfields"]))

    @property
    def is_elementary(self) -> bool:
        """Multiquadratic closure (elementary abelian 2-group)"""
        return self.group in ELEMENTARY_LABELS.values() or self.group.startswith("C2^")

    def __str__(self) -> str:
        return f"{self.group}[{self.degree}]{{{', '.join(map(str, self.subfields))}}}"


TRIVIAL_FINGERPRINT = FieldFingerprint(1, "1", ())


def elementary_label(rank: int) -> str:
    return ELEMENTARY_LABELS.get(rank, f"C2^{rank}")


# -- quadratic subfield bookkeeping -----------------------------------------

def _square_class_vector(m: int) -> frozenset:
    """m as a vector over GF(2) indexed by -1 and primes"""
    support = set(prime_factors(m))
    if m < 0:
        support.add(-1)
    return frozenset(support)


def _product_of(vector: frozenset) -> int:
    out = 1
    for p in vector:
        out *= p
    return out


def _span(generators: Iterable[int]) -> List[frozenset]:
    """Basis of the GF(2) span of the square classes of generators"""
    basis: Dict[int, frozenset] = {}
    for m in generators:
        v = _square_class_vector(m)
        while v:
            pivot = max(v, key=abs)
            if pivot not in basis:
                basis[pivot] = v
                break
            v = v ^ basis[pivot]
    return list(basis.values())


def quadratic_closure(generators: Iterable[int]) -> Tuple[int, ...]:
    """All squarefree m != 1 in the square-class group generated by generators"""
    basis = _span(generators)
    elements = {frozenset()}
    for v in basis:
        elements |= {e ^ v for e in elements}
    return tuple(sorted(_product_of(e) for e in elements if e))


def square_class_rank(generators: Iterable[int]) -> int:
    return len(_span(generators))


# -- polynomials ------------------------------------------------------------

def resolvent_cubic(f: Poly) -> Poly:
    """y^3 - c y^2 + (bd - 4e) y - (b^2 e + d^2 - 4ce) for monic-normalized x^4+bx^3+cx^2+dx+e"""
    if f.degree != 4:
        raise ValueError(f"resolvent cubic needs a quartic, got degree {f.degree}")
    e, d, c, b = (f.monic().coefficient(i) for i in range(4))
    return Poly.of(-(b * b * e + d * d - 4 * c * e), b * d - 4 * e, -c, 1)


def _require_squarefree(f: Poly) -> Fraction:
    disc = discriminant(f) if f.degree >= 2 else Fraction(1)
    if disc == 0:
        raise RepeatedRoots(f"{f} has a repeated root")
    return disc


def _nonsquare_witness(*values: Fraction) -> Optional[Fraction]:
    for value in values:
        if value != 0 and not is_rational_square(value):
            return value
    return None


def _irreducible_quartic(f: Poly) -> FieldFingerprint:
    disc = _require_squarefree(f)
    e, d, c, b = (f.monic().coefficient(i) for i in range(4))
    roots = sorted(set(rational_roots(resolvent_cubic(f))))

    if not roots:
        if is_rational_square(disc):
            return FieldFingerprint(12, "A4", ())
        return FieldFingerprint(24, "S4", (squarefree_class(disc),))

    if len(roots) == 1:
        t = roots[0]
        w = _nonsquare_witness(t * t - 4 * e, b * b - 4 * (c - t))
        if w is None:
            raise RepeatedRoots(f"inconsistent resolvent data for {f}")
        if is_rational_square(w * disc):
            return FieldFingerprint(4, "C4", (squarefree_class(disc),))
        return FieldFingerprint(8, "D4", quadratic_closure([squarefree_class(disc), squarefree_class(w)]))

    generators = []
    for t in roots:
        w = _nonsquare_witness(t * t - 4 * e, b * b - 4 * (c - t))
        if w is not None:
            generators.append(squarefree_class(w))
    return FieldFingerprint(4, "V4", quadratic_closure(generators))


def quartic_galois_group(f: Poly) -> str:
    """
    Galois group label of a squarefree quartic.

    Reducible quartics get the label of the compositum of their factors.

    Raises:
        RepeatedRoots: if f is not squarefree
    """
    if f.degree != 4:
        raise ValueError(f"quartic_galois_group needs degree 4, got {f.degree}")
    return splitting_fingerprint(f).group


def splitting_fingerprint(f: Poly) -> FieldFingerprint:
    """
    Fingerprint of the splitting field of a squarefree polynomial of degree <= 4.

    Raises:
        RepeatedRoots: if f has a repeated root
    """
    if f.degree < 1:
        raise ValueError("splitting field of a constant")
    if f.degree > 4:
        raise DegreeTooHigh(f"splitting fingerprints need degree <= 4, got {f.degree}")
    _require_squarefree(f)

    factors = factor_low_degree(f)
    if len(factors) > 1:
        return fingerprint_of_compositum(splitting_fingerprint(g) for g in factors)

    if f.degree == 1:
        return TRIVIAL_FINGERPRINT
    if f.degree == 2:
        return FieldFingerprint(2, "C2", (squarefree_class(discriminant(f)),))
    if f.degree == 3:
        disc = discriminant(f)
        if is_rational_square(disc):
            return FieldFingerprint(3, "C3", ())
        return FieldFingerprint(6, "S3", (squarefree_class(disc),))
    return _irreducible_quartic(f)


# -- explicit fields --------------------------------------------------------

def _nested_radical_fingerprint(a: Fraction, b: Fraction) -> FieldFingerprint:
    norm = a * a - b
    root = rational_sqrt(norm)
    if root is not None:
        # sqrt(a + sqrt b) = sqrt((a+r)/2) + sqrt((a-r)/2)
        halves = [2 * (a + root), 2 * (a - root)]
        if any(h == 0 or is_rational_square(h) for h in halves):
            raise DegenerateSpec(f"Q(sqrt({a} +- sqrt({b}))) is only quadratic")
        generators = [squarefree_class(h) for h in halves]
        return FieldFingerprint(4, "V4", quadratic_closure(generators + [squarefree_class(b)]))
    if is_rational_square(b * norm):
        return FieldFingerprint(4, "C4", (squarefree_class(b),))
    return FieldFingerprint(8, "D4", quadratic_closure([squarefree_class(b), squarefree_class(norm)]))


def fingerprint_of_spec(spec: FieldSpec) -> FieldFingerprint:
    """
    Fingerprint of the Galois closure of an explicitly presented field.

    Raises:
        DegenerateSpec: if a nested radical collapses to a quadratic field
    """
    spec.validate()
    if spec.kind is FieldKind.RATIONALS:
        return TRIVIAL_FINGERPRINT
    if spec.kind is FieldKind.QUADRATIC:
        return FieldFingerprint(2, "C2", spec.m)
    if spec.kind is FieldKind.BIQUADRATIC:
        return FieldFingerprint(4, "V4", quadratic_closure(spec.m))
    if spec.kind is FieldKind.NESTED_RADICAL:
        return _nested_radical_fingerprint(spec.a, spec.b)
    if spec.kind is FieldKind.SPLITTING:
        return splitting_fingerprint(spec.poly)
    return fingerprint_of_compositum(fingerprint_of_spec(p) for p in spec.parts)


def fingerprint_of_compositum(fingerprints: Iterable[FieldFingerprint]) -> FieldFingerprint:
    """
    Join of Galois closures.

    Multiquadratic parts combine exactly (degree 2**rank). A non-multiquadratic
    part absorbs every quadratic field it already contains; anything beyond
    that is assumed linearly disjoint from it.
    """
    fps = list(dict.fromkeys(fp for fp in fingerprints if fp.degree > 1))
    subfields = quadratic_closure(m for fp in fps for m in fp.subfields)
    rank = square_class_rank(subfields)

    big = [fp for fp in fps if not fp.is_elementary]
    if not big:
        return FieldFingerprint(2 ** rank, elementary_label(rank), subfields)

    degree = 1
    labels = []
    covered: List[int] = []
    for fp in big:
        degree *= fp.degree
        labels.append(fp.group)
        covered.extend(fp.subfields)
    shared = sum(square_class_rank(fp.subfields) for fp in big) - square_class_rank(covered)
    degree //= 2 ** shared
    extra = rank - square_class_rank(covered)
    degree *= 2 ** extra
    if extra:
        labels.append(elementary_label(extra))
    return FieldFingerprint(degree, "x".join(labels), subfields)


def fingerprints_match(left: FieldFingerprint, right: FieldFingerprint) -> bool:
    return left == right


def describe_quadratics(subfields: Sequence[int]) -> List[str]:
    return [f"Q(sqrt({m}))" for m in subfields]
