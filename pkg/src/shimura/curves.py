"""
Arithmetic of the Shimura curves X0(D, N).

Genus, the Atkin-Lehner group W(D, N), CM loci CM(R) with their counts and
branches, fixed points of Atkin-Lehner involutions, and the fields of
definition of CM points on X0(D, N) and on its Atkin-Lehner quotients.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import sympy
from sympy.ntheory import factorint

from .classfield import (
    BQF,
    FixedFieldData,
    GaloisElement,
    QuadOrder,
    class_group,
    class_of_norm,
    compose,
    conjugation_ideal_class,
    dihedral_model,
)
from .core import is_squarefree, kronecker_symbol, prime_factors
from .fields import FieldFingerprint, fingerprint_of_compositum
from .shared.errors import (
    DisOne,
    EmptyLocus,
    InvalidLevel,
    MEqualsOne,
    MNotInGroup,
    NoClassFound,
    NonIntegralGenus,
    NSquarefreeRequired,
)
from .shared.utils import execution_tracker, setup_logging

logger = setup_logging("curves")


@dataclass(frozen=True, order=True)
class Level:
    """
    (D, N): D the discriminant of an indefinite rational quaternion algebra,
    N the level of an Eichler order, gcd(D, N) = 1.
    """
    D: int
    N: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """
        Raises:
            DisOne: for D = 1
            InvalidLevel: for any other malformed pair
        """
        if self.D == 1:
            raise DisOne("D = 1 is the modular case, not a Shimura curve")
        if self.D < 1 or self.N < 1:
            raise InvalidLevel(f"D and N must be positive, got ({self.D}, {self.N})")
        if not is_squarefree(self.D) or len(prime_factors(self.D)) % 2:
            raise InvalidLevel(f"D = {self.D} is not a product of an even number of distinct primes")
        if math.gcd(self.D, self.N) != 1:
            raise InvalidLevel(f"gcd(D, N) = gcd({self.D}, {self.N}) != 1")

    @property
    def DN(self) -> int:
        return self.D * self.N

    @property
    def has_real_points(self) -> bool:
        """X0(D, N)(R) is empty for D > 1"""
        return False

    def require_squarefree_N(self) -> None:
        if not is_squarefree(self.N):
            raise NSquarefreeRequired(f"N = {self.N} must be squarefree")

    def to_dict(self) -> Dict[str, int]:
        return {"D": self.D, "N": self.N}

    def __str__(self) -> str:
        return f"({self.D},{self.N})"


# -- genus ------------------------------------------------------------------

def elliptic_point_count(level: Level, k: int) -> int:
    """Number e_k of elliptic points of order k / 2 (k = 3 or 4)"""
    if k not in (3, 4):
        raise ValueError(f"elliptic points are counted for k = 3, 4, got {k}")
    count = 1
    for p in prime_factors(level.D):
        count *= 1 - kronecker_symbol(-k, p)
    for p, e in factorint(level.N).items():
        symbol = kronecker_symbol(-k, int(p))
        if e == 1:
            count *= 1 + symbol
        else:
            count *= 0 if k % int(p) == 0 else 1 + symbol
    return count


def genus(level: Level) -> int:
    """
    Genus of X0(D, N).

    Raises:
        DisOne: for D = 1
        NonIntegralGenus: if the formula does not give a nonnegative integer
    """
    if level.D == 1:
        raise DisOne("the genus formula needs D > 1")
    volume = Fraction(level.DN, 12)
    for p in prime_factors(level.D):
        volume *= Fraction(p - 1, p)
    for p in factorint(level.N):
        volume *= Fraction(int(p) + 1, int(p))
    g = 1 + volume - Fraction(elliptic_point_count(level, 3), 3) - Fraction(elliptic_point_count(level, 4), 4)
    if g.denominator != 1 or g < 0:
        raise NonIntegralGenus(f"genus formula gives {g} at {level}")
    return int(g)


def _quaternion_discriminants(max_D: int) -> List[int]:
    return [D for D in range(6, max_D + 1) if is_squarefree(D) and len(prime_factors(D)) % 2 == 0]


@execution_tracker("curves", "scan_genus_one")
def scan_genus_one(max_DN: int) -> List[Level]:
    """All levels with D N <= max_DN and genus one, ordered by (D, N)"""
    found = []
    for D in _quaternion_discriminants(max_DN):
        for N in range(1, max_DN // D + 1):
            if math.gcd(D, N) != 1:
                continue
            level = Level(D, N)
            if genus(level) == 1:
                found.append(level)
    logger.info("genus_one_scan", max_DN=max_DN, levels=len(found))
    return sorted(found)


# -- Atkin-Lehner group -----------------------------------------------------

def atkin_lehner_group(level: Level) -> List[int]:
    """
    The m | DN indexing W(D, N); every divisor is unitary since DN is squarefree.

    Raises:
        NSquarefreeRequired
    """
    level.require_squarefree_N()
    return [int(m) for m in sympy.divisors(level.DN)]


def _require_in_group(level: Level, m: int) -> None:
    if m < 1 or level.DN % m or math.gcd(m, level.DN // m) != 1:
        raise MNotInGroup(f"{m} does not index an Atkin-Lehner involution of {level}")


def atkin_lehner_compose(level: Level, m: int, n: int) -> int:
    """w_m w_n = w_{mn / gcd(m, n)^2}"""
    level.require_squarefree_N()
    _require_in_group(level, m)
    _require_in_group(level, n)
    return m * n // math.gcd(m, n) ** 2


def w_group_of_order(level: Level, order: QuadOrder) -> List[int]:
    """W(R): the involutions w_m with m | D(R) N(R)"""
    invariants = cm_invariants(level, order)
    bound = invariants.DR * invariants.NR
    return [m for m in atkin_lehner_group(level) if bound % m == 0]


# -- CM loci ----------------------------------------------------------------

def eichler_symbol(order: QuadOrder, p: int) -> int:
    """(R/p): 1 when p divides the conductor, else the Kronecker symbol of K at p"""
    if order.conductor % p == 0:
        return 1
    return kronecker_symbol(order.fundamental_disc, p)


class CMInvariants(NamedTuple):
    DR: int
    NR: int
    NstarR: int


def cm_invariants(level: Level, order: QuadOrder) -> CMInvariants:
    """D(R), N(R) and N*(R)"""
    DR = NR = NstarR = 1
    for p in prime_factors(level.D):
        if eichler_symbol(order, p) == -1:
            DR *= p
    for p in prime_factors(level.N):
        if eichler_symbol(order, p) == 1:
            NR *= p
            if order.conductor % p:
                NstarR *= p
    assert math.gcd(DR * NstarR, order.disc) == 1
    if is_squarefree(level.N):
        assert math.gcd(DR * NR, order.disc) == math.gcd(level.N, order.conductor)
    return CMInvariants(DR, NR, NstarR)


@dataclass(frozen=True)
class CMLocus:
    """CM(R) on X0(D, N)"""
    level: Level
    order: QuadOrder
    nonempty: bool
    count: int
    branch_count: int
    DR: int
    NR: int
    NstarR: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "D": self.level.D,
            "N": self.level.N,
            "disc": self.order.disc,
            "nonempty": self.nonempty,
            "count": self.count,
            "branches": self.branch_count,
            "DR": self.DR,
            "NR": self.NR,
            "NstarR": self.NstarR,
        }


def cm_locus(level: Level, order: QuadOrder) -> CMLocus:
    """
    Nonempty iff no prime of D divides the conductor and DN / (D(R) N*(R))
    divides disc R; then #CM(R) = 2^#{p | D(R) N(R)} h(R).

    Raises:
        NSquarefreeRequired
    """
    level.require_squarefree_N()
    DR, NR, NstarR = cm_invariants(level, order)
    eichler = all(order.conductor % p for p in prime_factors(level.D))
    nonempty = eichler and order.disc % (level.DN // (DR * NstarR)) == 0
    branches = 2 ** len(prime_factors(DR * NR)) if DR * NR > 1 else 1
    count = branches * class_group(order.disc).h if nonempty else 0
    return CMLocus(level, order, nonempty, count, branches, DR, NR, NstarR)


def fixed_point_orders(m: int) -> List[QuadOrder]:
    """
    Orders R with CM(R) making up the fixed points of w_m.

    Raises:
        MEqualsOne: for m <= 1
    """
    if m <= 1:
        raise MEqualsOne(f"w_{m} is not a nontrivial involution")
    if m == 2:
        discs = [-4, -8]
    elif m % 4 == 3:
        discs = [-4 * m, -m]
    else:
        discs = [-4 * m]
    return [QuadOrder.from_disc(d) for d in discs]


def fixed_point_loci(level: Level, m: int) -> List[CMLocus]:
    """
    Raises:
        MNotInGroup, MEqualsOne
    """
    level.require_squarefree_N()
    _require_in_group(level, m)
    return [cm_locus(level, order) for order in fixed_point_orders(m)]


def fixed_point_count(level: Level, m: int) -> int:
    """
    Number of fixed points of w_m.

    Raises:
        MNotInGroup, MEqualsOne
    """
    return sum(locus.count for locus in fixed_point_loci(level, m))


def quotient_genus(level: Level, m: int) -> int:
    """
    Genus of X0(D, N)/<w_m> by Riemann-Hurwitz: 2g - 2 = 2(2g' - 2) + #fixed points.

    Raises:
        MNotInGroup, MEqualsOne, NonIntegralGenus
    """
    g = Fraction(2 * genus(level) + 2 - fixed_point_count(level, m), 4)
    if g.denominator != 1 or g < 0:
        raise NonIntegralGenus(f"quotient genus {g} for w_{m} on X0{level}")
    return int(g)


def galois_vs_atkin_lehner(level: Level, order: QuadOrder, m: int) -> Optional[BQF]:
    """
    The class b of norm m with w_m(P) = P^sigma_b on CM(R), when
    m | DN / (D(R) N(R)); None when w_m switches branches instead.
    """
    _require_in_group(level, m)
    invariants = cm_invariants(level, order)
    if (level.DN // (invariants.DR * invariants.NR)) % m:
        return None
    form = class_of_norm(order.disc, m)
    if form is None:
        raise NoClassFound(f"no class of norm {m} in {order}")
    return form


def conjugation_pairing(level: Level, order: QuadOrder) -> Tuple[int, List[BQF]]:
    """
    m = D(R) N*(R) and the classes a (mod Pic^2) with complex conjugation
    acting on CM(R) as w_m sigma_a.

    Raises:
        NoClassFound
    """
    invariants = cm_invariants(level, order)
    m = invariants.DR * invariants.NstarR
    return m, conjugation_ideal_class(order, level.D, m)


# -- fields of definition ---------------------------------------------------

@dataclass(frozen=True)
class FieldOfDefinition:
    """
    Field of definition of a CM point as the fixed field of a subgroup of
    Gal(H_R/Q).

    When several classes a are admissible every resulting field is kept in
    candidates; fixed is the first of them.
    """
    order: QuadOrder
    degree_over_Q: int
    is_full_ring_class_field: bool
    fixing_subgroup: Tuple[GaloisElement, ...]
    fixed: FixedFieldData
    candidates: Tuple[FixedFieldData, ...] = ()
    m_r: Optional[int] = None
    m_r_agrees: Optional[bool] = None

    @property
    def fingerprint(self) -> FieldFingerprint:
        return self.fixed.fingerprint

    @property
    def subgroup_order(self) -> int:
        return 2 * class_group(self.order.disc).h // self.degree_over_Q

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "disc": self.order.disc,
            "degree": self.degree_over_Q,
            "full_ring_class_field": self.is_full_ring_class_field,
            "fixing_subgroup": [g.to_dict() for g in self.fixing_subgroup],
            "subfields": list(self.fixed.subfields),
            "fingerprint": self.fingerprint.to_dict(),
        }
        if len(self.candidates) > 1:
            data["candidates"] = [c.fingerprint.to_dict() for c in self.candidates]
        if self.m_r is not None:
            data["m_r"] = self.m_r
            data["m_r_agrees"] = self.m_r_agrees
        return data


def _field_of_definition(order: QuadOrder, options: Sequence[Tuple[GaloisElement, ...]],
                         **extra: Any) -> FieldOfDefinition:
    model = dihedral_model(order.disc)
    results = [model.fixed_field(generators) for generators in options]
    candidates = tuple(dict.fromkeys(results))
    first = results[0]
    h = class_group(order.disc).h
    assert first.degree * len(model.closure(model.element(g) for g in options[0])) == 2 * h
    return FieldOfDefinition(
        order=order,
        degree_over_Q=first.degree,
        is_full_ring_class_field=first.degree == 2 * h,
        fixing_subgroup=options[0],
        fixed=first,
        candidates=candidates,
        **extra,
    )


def _require_nonempty(level: Level, order: QuadOrder) -> CMLocus:
    locus = cm_locus(level, order)
    if not locus.nonempty:
        raise EmptyLocus(f"CM({order.disc}) is empty on X0{level}")
    return locus


def cm_field_of_definition(level: Level, order: QuadOrder) -> FieldOfDefinition:
    """
    Q(P) for P in CM(R): H_R when D(R) N*(R) != 1, otherwise the fixed field
    of c sigma_a for each admissible class a.

    Raises:
        EmptyLocus, NoClassFound
    """
    locus = _require_nonempty(level, order)
    if locus.DR * locus.NstarR != 1:
        return _field_of_definition(order, [()])
    classes = conjugation_ideal_class(order, level.D, 1)
    return _field_of_definition(order, [(GaloisElement(a, True),) for a in classes])


def quotient_cm_field(level: Level, order: QuadOrder, m: int) -> FieldOfDefinition:
    """
    Field of definition of the image of P in CM(R) on X0(D, N)/<w_m>.

    With m_r = gcd(m, DN / (D(R) N(R))), b the class of norm m_r and
    m* = D(R) N*(R), the fixing subgroup is
      m* != 1:  <sigma_b> if m = m_r, <c sigma_ba> if m / m_r = m*, trivial otherwise;
      m* == 1:  <c sigma_a, sigma_b> if m = m_r, <c sigma_a> otherwise.

    Raises:
        EmptyLocus, MNotInGroup, NoClassFound
    """
    level.require_squarefree_N()
    _require_in_group(level, m)
    locus = _require_nonempty(level, order)
    m_r = math.gcd(m, level.DN // (locus.DR * locus.NR))
    b = class_of_norm(order.disc, m_r)
    if b is None:
        raise NoClassFound(f"no class of norm {m_r} in {order}")
    k = m // m_r
    m_star = locus.DR * locus.NstarR
    agrees = m_r == math.gcd(m, -order.disc // math.gcd(level.N, order.conductor))
    if not agrees:
        logger.warning("m_r_disagreement", level=str(level), disc=order.disc, m=m, m_r=m_r)

    options: List[Tuple[GaloisElement, ...]]
    if m_star != 1 and k == 1:
        options = [(GaloisElement(b),)]
    elif m_star != 1 and k == m_star:
        classes = conjugation_ideal_class(order, level.D, m_star)
        options = [(GaloisElement(compose(b, a), True),) for a in classes]
    elif m_star != 1:
        options = [()]
    else:
        classes = conjugation_ideal_class(order, level.D, m_star)
        if k == 1:
            options = [(GaloisElement(a, True), GaloisElement(b)) for a in classes]
        else:
            options = [(GaloisElement(a, True),) for a in classes]
    return _field_of_definition(order, options, m_r=m_r, m_r_agrees=agrees)


def fixed_point_fields(level: Level, m: int) -> List[FieldOfDefinition]:
    """cm_field_of_definition for every nonempty constituent locus of the fixed points of w_m"""
    return [cm_field_of_definition(level, locus.order) for locus in fixed_point_loci(level, m) if locus.nonempty]


def fixed_point_fingerprint(level: Level, m: int) -> FieldFingerprint:
    """Compositum of the fields of definition of all fixed points of w_m"""
    return fingerprint_of_compositum(f.fingerprint for f in fixed_point_fields(level, m))


@dataclass(frozen=True)
class InvolutionLocusField:
    """One constituent of the fixed locus of an involution on a quotient curve"""
    involution: int
    field: FieldOfDefinition

    def to_dict(self) -> Dict[str, Any]:
        return {"involution": self.involution, **self.field.to_dict()}


@dataclass(frozen=True)
class QuotientInvolutionFields:
    level: Level
    m: int
    m_prime: int
    parts: Tuple[InvolutionLocusField, ...]

    @property
    def fingerprint(self) -> FieldFingerprint:
        return fingerprint_of_compositum(p.field.fingerprint for p in self.parts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.level.to_dict(),
            "m": self.m,
            "m_prime": self.m_prime,
            "parts": [p.to_dict() for p in self.parts],
            "fingerprint": self.fingerprint.to_dict(),
        }


def quotient_involution_fields(level: Level, m: int, m_prime: int) -> QuotientInvolutionFields:
    """
    Fields of definition of the fixed points of the involution induced by
    w_m' on X0(D, N)/<w_m>: images of the fixed points of w_m' and of w_m w_m'.

    Raises:
        MNotInGroup
    """
    parts = []
    for involution in (m_prime, atkin_lehner_compose(level, m, m_prime)):
        if involution == 1:
            continue
        for locus in fixed_point_loci(level, involution):
            if locus.nonempty:
                parts.append(InvolutionLocusField(involution, quotient_cm_field(level, locus.order, m)))
    return QuotientInvolutionFields(level, m, m_prime, tuple(parts))


def quadratic_point_orders(level: Level, bound: int) -> List[QuadOrder]:
    """
    Orders with |disc| <= bound whose CM points are defined over an
    imaginary quadratic field: h(R) = 1, or h(R) = 2 with D(R) N*(R) = 1.
    """
    level.require_squarefree_N()
    found = []
    for disc in range(-3, -bound - 1, -1):
        if disc % 4 not in (0, 1):
            continue
        order = QuadOrder.from_disc(disc)
        locus = cm_locus(level, order)
        if not locus.nonempty:
            continue
        h = class_group(disc).h
        if h == 1 or (h == 2 and locus.DR * locus.NstarR == 1):
            found.append(order)
    return found


def rational_cm_point(D: int, m: int, order: QuadOrder) -> bool:
    """True iff CM(R) has a rational image on X0(D, 1)/<w_m>"""
    return quotient_cm_field(Level(D, 1), order, m).degree_over_Q == 1
