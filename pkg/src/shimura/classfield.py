"""
Imaginary quadratic orders and their class groups.

Ideal classes of an order are modelled by reduced binary quadratic forms.
Gal(H_R/Q) of the ring class field is the generalized dihedral group
Pic(R) x| <c>, with complex conjugation c acting on Pic(R) by inversion; its
quadratic subfields come from genus characters. Hilbert symbols decide which
classes realise a given quaternion algebra.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import sympy
from sympy.core.intfunc import igcdex
from sympy.ntheory import factorint

from .core import RationalLike, kronecker_symbol, prime_factors, squarefree_class, squarefree_part, to_rational
from .fields import FieldFingerprint, elementary_label
from .shared.config import get_config
from .shared.errors import BadDiscriminant, DiscMismatch, NoClassFound, NotASubgroup, NotCoprime
from .shared.utils import execution_tracker, setup_logging

logger = setup_logging("classfield")


@dataclass(frozen=True)
class QuadOrder:
    """Order of discriminant disc = conductor^2 * fundamental_disc in K = Q(sqrt(-s))"""
    disc: int
    fundamental_disc: int
    conductor: int
    s: int

    @classmethod
    def from_disc(cls, disc: int) -> "QuadOrder":
        """
        Raises:
            BadDiscriminant: unless disc < 0 and disc = 0, 1 mod 4
        """
        if disc >= 0 or disc % 4 not in (0, 1):
            raise BadDiscriminant(f"{disc} is not a negative discriminant")
        core, root = squarefree_part(disc)
        if core % 4 == 1:
            fundamental, conductor = core, root
        else:
            fundamental, conductor = 4 * core, root // 2
        return cls(disc, fundamental, conductor, -core)

    @property
    def is_maximal(self) -> bool:
        return self.conductor == 1

    def to_dict(self) -> Dict[str, int]:
        return {
            "disc": self.disc,
            "fundamental_disc": self.fundamental_disc,
            "conductor": self.conductor,
            "s": self.s,
        }

    def __str__(self) -> str:
        return f"O({self.disc})"


@dataclass(frozen=True)
class BQF:
    """Positive definite form a x^2 + b x y + c y^2"""
    a: int
    b: int
    c: int

    @classmethod
    def principal(cls, disc: int) -> "BQF":
        if disc % 2:
            return cls(1, 1, (1 - disc) // 4)
        return cls(1, 0, -disc // 4)

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    @property
    def is_reduced(self) -> bool:
        if not abs(self.b) <= self.a <= self.c:
            return False
        if abs(self.b) == self.a or self.a == self.c:
            return self.b >= 0
        return True

    def reduce(self) -> "BQF":
        """Reduced form in the same proper-equivalence class"""
        if self.a <= 0 or self.discriminant >= 0:
            raise ValueError(f"{self} is not positive definite")
        disc = self.discriminant
        a, b = self.a, self.b

        def normalize(a: int, b: int) -> Tuple[int, int, int]:
            k = (a - b) // (2 * a)
            b += 2 * a * k
            return a, b, (b * b - disc) // (4 * a)

        a, b, c = normalize(a, b)
        while a > c or (a == c and b < 0):
            a, b, c = normalize(c, -b)
        return BQF(a, b, c)

    def inverse(self) -> "BQF":
        return BQF(self.a, -self.b, self.c).reduce()

    def evaluate(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def sort_key(self) -> Tuple[int, int, bool]:
        return (self.a, abs(self.b), self.b < 0)

    def to_list(self) -> List[int]:
        return [self.a, self.b, self.c]

    @classmethod
    def from_list(cls, data: Sequence[int]) -> "BQF":
        a, b, c = (int(v) for v in data)
        return cls(a, b, c)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def _check_disc(disc: int) -> None:
    if disc >= 0 or disc % 4 not in (0, 1):
        raise BadDiscriminant(f"{disc} is not a negative discriminant")


@lru_cache(maxsize=4096)
def _reduced_forms(disc: int) -> Tuple[BQF, ...]:
    forms = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append(BQF(a, b, c))
        a += 1
    return tuple(forms)


def reduced_forms(disc: int) -> List[BQF]:
    """
    All primitive reduced forms of discriminant disc, one per class.

    Raises:
        BadDiscriminant
    """
    _check_disc(disc)
    return list(_reduced_forms(disc))


def compose(f1: BQF, f2: BQF) -> BQF:
    """
    Reduced representative of the Gauss composition of two classes.

    Raises:
        DiscMismatch: if the forms have different discriminants
    """
    disc = f1.discriminant
    if f2.discriminant != disc:
        raise DiscMismatch(f"{f1} and {f2} have discriminants {disc} and {f2.discriminant}")
    a1, b1, _ = f1.a, f1.b, f1.c
    a2, b2, _ = f2.a, f2.b, f2.c
    beta = (b1 + b2) // 2
    x1, y1, g1 = igcdex(a1, a2)
    x2, y2, e = igcdex(g1, beta)
    u, v, w = x2 * x1, x2 * y1, y2
    a = a1 * a2 // (e * e)
    b = ((u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) // 2) // e) % (2 * a)
    c = (b * b - disc) // (4 * a)
    return BQF(int(a), int(b), int(c)).reduce()


def _invariant_factors(orders: Sequence[int]) -> Tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of a finite abelian group given all element orders"""
    n = len(orders)
    if n == 1:
        return ()
    by_prime: List[List[int]] = []
    for p, e in factorint(n).items():
        at_least: List[int] = []
        previous = 0
        for k in range(1, e + 1):
            count = sum(1 for o in orders if (p ** k) % o == 0)
            rank = sympy.multiplicity(p, count)
            at_least.append(rank - previous)
            previous = rank
        exponents: List[int] = []
        for k, cnt in enumerate(at_least):
            following = at_least[k + 1] if k + 1 < len(at_least) else 0
            exponents.extend([k + 1] * (cnt - following))
        by_prime.append(sorted((p ** x for x in exponents), reverse=True))
    length = max(len(powers) for powers in by_prime)
    factors = []
    for i in range(length):
        d = 1
        for powers in by_prime:
            if i < len(powers):
                d *= powers[i]
        factors.append(d)
    return tuple(sorted(factors))


def abelian_label(factors: Sequence[int]) -> str:
    """1, C2, V4, C2^k for elementary groups; C4, C2xC4, ... otherwise"""
    if all(d == 2 for d in factors):
        return elementary_label(len(factors))
    return "x".join(f"C{d}" for d in factors)


@dataclass(frozen=True)
class ClassGroup:
    """Pic(R) realised on reduced forms"""
    order: QuadOrder
    elements: Tuple[BQF, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {f: i for i, f in enumerate(self.elements)})

    @property
    def h(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> BQF:
        return BQF.principal(self.order.disc).reduce()

    def index(self, form: BQF) -> int:
        """
        Raises:
            NotASubgroup: if form is not a class of this group
        """
        if form.discriminant != self.order.disc or not form.is_primitive:
            raise NotASubgroup(f"{form} is not a class of discriminant {self.order.disc}")
        return self._index[form.reduce()]  # type: ignore[attr-defined]

    def multiply(self, f1: BQF, f2: BQF) -> BQF:
        return compose(f1, f2)

    def power(self, form: BQF, k: int) -> BQF:
        result = self.identity
        for _ in range(k % self.h if self.h else 0):
            result = compose(result, form)
        return result

    def element_order(self, form: BQF) -> int:
        identity = self.identity
        current, k = form.reduce(), 1
        while current != identity:
            current = compose(current, form)
            k += 1
        return k

    @property
    def structure(self) -> Tuple[int, ...]:
        """Invariant factors, ascending; () for the trivial group"""
        return _invariant_factors([self.element_order(f) for f in self.elements])

    @property
    def two_torsion_rank(self) -> int:
        identity = self.identity
        count = sum(1 for f in self.elements if compose(f, f) == identity)
        return count.bit_length() - 1

    def squares(self) -> Tuple[BQF, ...]:
        """Pic(R)^2"""
        return tuple(sorted({compose(f, f) for f in self.elements}, key=BQF.sort_key))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "disc": self.order.disc,
            "h": self.h,
            "elements": [f.to_list() for f in self.elements],
            "structure": list(self.structure),
            "two_torsion_rank": self.two_torsion_rank,
        }


@lru_cache(maxsize=1024)
@execution_tracker("classfield", "class_group")
def class_group(disc: int) -> ClassGroup:
    """
    Raises:
        BadDiscriminant
    """
    order = QuadOrder.from_disc(disc)
    return ClassGroup(order, _reduced_forms(disc))


# -- represented values -----------------------------------------------------

def _smallest_value(form: BQF, coprime_to: int, window: int) -> Optional[int]:
    disc = -form.discriminant
    best: Optional[int] = None
    y_max = math.isqrt(4 * form.a * window // disc) + 1
    x_max = math.isqrt(4 * form.c * window // disc) + 1
    for y in range(0, y_max + 1):
        for x in range(-x_max, x_max + 1):
            if math.gcd(x, y) != 1:
                continue
            value = form.evaluate(x, y)
            if 0 < value <= window and math.gcd(value, coprime_to) == 1:
                if best is None or value < best:
                    best = value
    return best


@lru_cache(maxsize=65536)
def represented_value(form: BQF, coprime_to: int = 1, bound: Optional[int] = None) -> int:
    """
    Smallest positive integer primitively represented by form and coprime to
    coprime_to.

    Raises:
        NoClassFound: if no such value exists below the bound
            (default representation_bound_factor * disc^2)
    """
    form = form.reduce()
    limit = bound or get_config().representation_bound_factor * form.discriminant ** 2
    window = min(max(form.c, 16), limit)
    while True:
        value = _smallest_value(form, abs(coprime_to), window)
        if value is not None:
            return value
        if window >= limit:
            raise NoClassFound(f"{form} represents nothing coprime to {coprime_to} below {limit}")
        window = min(window * 4, limit)


def class_of_norm(disc: int, n: int) -> Optional[BQF]:
    """Reduced form (n, b, c) of discriminant disc, i.e. a class of norm n; None if there is none"""
    _check_disc(disc)
    if n == 1:
        return BQF.principal(disc).reduce()
    for b in range(0, 2 * n):
        if (b - disc) % 2 or (b * b - disc) % (4 * n):
            continue
        c = (b * b - disc) // (4 * n)
        if math.gcd(math.gcd(n, b), c) != 1:
            continue
        return BQF(n, b, c).reduce()
    return None


# -- genus theory -----------------------------------------------------------

def _prime_discriminant(p: int) -> int:
    return p if p % 4 == 1 else -p


def genus_generators(disc: int) -> List[int]:
    """
    Squarefree generators of the quadratic subfields of the genus field.

    Raises:
        BadDiscriminant
    """
    _check_disc(disc)
    if disc % 2:
        return [_prime_discriminant(p) for p in prime_factors(disc)]
    n = -disc // 4
    generators = [_prime_discriminant(p) for p in prime_factors(n) if p != 2]
    if n % 4 == 3:
        pass
    elif n % 4 == 1:
        generators.append(-1)
    elif n % 8 == 2:
        generators.append(-2)
    elif n % 8 == 6:
        generators.append(2)
    elif n % 8 == 4:
        generators.append(-1)
    else:
        generators.extend([-1, 2])
    return generators


def genus_subfields(disc: int) -> Tuple[int, ...]:
    """Squarefree m of every quadratic subfield Q(sqrt m) of the genus field, K included"""
    generators = genus_generators(disc)
    out = set()
    for size in range(1, len(generators) + 1):
        for subset in combinations(generators, size):
            value = 1
            for g in subset:
                value *= g
            out.add(squarefree_class(value))
    out.discard(1)
    return tuple(sorted(out))


def fundamental_of(m: int) -> int:
    """Discriminant of Q(sqrt m)"""
    return m if m % 4 == 1 else 4 * m


@dataclass(frozen=True)
class GenusCharacter:
    """Character of Pic(R) cutting out Q(sqrt m) inside the genus field; m = 1 is trivial"""
    disc: int
    m: int

    def value_at(self, n: int) -> int:
        """Character value on the classes representing n (n coprime to 2 disc)"""
        if self.m == 1:
            return 1
        return kronecker_symbol(fundamental_of(self.m), n)

    def __call__(self, form: BQF) -> int:
        return self.value_at(represented_value(form, 2 * self.disc))

    def to_dict(self) -> Dict[str, int]:
        return {"disc": self.disc, "m": self.m}


def genus_characters(disc: int) -> List[GenusCharacter]:
    """
    Trivial character first, then one per genus subfield.

    Raises:
        BadDiscriminant
    """
    return [GenusCharacter(disc, 1)] + [GenusCharacter(disc, m) for m in genus_subfields(disc)]


def principal_genus_represents(disc: int, v: int) -> bool:
    """
    True iff v is represented by a form of the principal genus.

    Raises:
        NotCoprime: if gcd(v, disc) != 1
    """
    _check_disc(disc)
    if v <= 0:
        raise ValueError(f"positive definite forms only represent positive values, got {v}")
    if math.gcd(v, disc) != 1:
        raise NotCoprime(f"{v} is not coprime to {disc}")
    return all(ch.value_at(v) == 1 for ch in genus_characters(disc))


# -- the generalized dihedral group Gal(H_R/Q) ------------------------------

class GaloisElement(NamedTuple):
    """sigma_form, or c * sigma_form when conjugate is set"""
    form: BQF
    conjugate: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {"form": self.form.to_list(), "conjugate": self.conjugate}


_Element = Tuple[int, int]


@dataclass(frozen=True)
class FixedFieldData:
    """A subfield of H_R given by its fixing subgroup"""
    degree: int
    closure_degree: int
    group: str
    subfields: Tuple[int, ...]
    closure_subfields: Tuple[int, ...]

    @property
    def fingerprint(self) -> FieldFingerprint:
        return FieldFingerprint(self.closure_degree, self.group, self.closure_subfields)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "closure_degree": self.closure_degree,
            "group": self.group,
            "subfields": list(self.subfields),
            "closure_subfields": list(self.closure_subfields),
        }


class DihedralGaloisModel:
    """
    Pic(R) x| <c> with c sigma c = sigma^-1.

    Elements are pairs (i, e) meaning c^e * sigma_i; class indices follow
    ClassGroup.elements.
    """

    def __init__(self, base: ClassGroup):
        self.base = base
        h = base.h
        self._table = [[base.index(compose(f, g)) for g in base.elements] for f in base.elements]
        self._inverse = [base.index(f.inverse()) for f in base.elements]
        self._identity = base.index(base.identity)
        self.elements: List[_Element] = [(i, e) for i in range(h) for e in (0, 1)]
        for x in self.elements:
            if x[1]:
                assert self.multiply(x, x) == (self._identity, 0)
        self._subfields = genus_subfields(base.order.disc)
        coprime = 2 * base.order.disc
        self._psi = {
            m: [kronecker_symbol(fundamental_of(m), represented_value(f, coprime)) for f in base.elements]
            for m in self._subfields
        }

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> _Element:
        return (self._identity, 0)

    def multiply(self, x: _Element, y: _Element) -> _Element:
        (i, e), (j, f) = x, y
        return (self._table[i][self._inverse[j] if e else j], e ^ f)

    def inverse(self, x: _Element) -> _Element:
        i, e = x
        return (i, 1) if e else (self._inverse[i], 0)

    def element(self, g: GaloisElement) -> _Element:
        return (self.base.index(g.form), int(g.conjugate))

    def closure(self, generators: Iterable[_Element]) -> List[_Element]:
        generators = list(generators)
        subgroup = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in generators:
                y = self.multiply(x, g)
                if y not in subgroup:
                    subgroup.add(y)
                    frontier.append(y)
        return sorted(subgroup)

    def core(self, subgroup: Sequence[_Element]) -> List[_Element]:
        """Largest normal subgroup contained in subgroup"""
        members = set(subgroup)
        return [h for h in subgroup
                if all(self.multiply(self.multiply(g, h), self.inverse(g)) in members for g in self.elements)]

    def character(self, m: int, x: _Element) -> int:
        """Character of Gal(H_R/Q) cutting out Q(sqrt m)"""
        i, e = x
        value = self._psi[m][i]
        return -value if e and m < 0 else value

    def _quotient_label(self, normal: Sequence[_Element]) -> str:
        members = set(normal)

        def coset_order(x: _Element) -> int:
            k, y = 1, x
            while y not in members:
                y = self.multiply(y, x)
                k += 1
            return k

        abelian = all(
            self.multiply(self.multiply(x, y), self.inverse(self.multiply(y, x))) in members
            for x in self.elements for y in self.elements
        )
        cosets = {frozenset(self.multiply(x, n) for n in normal): x for x in self.elements}
        if abelian:
            return abelian_label(_invariant_factors([coset_order(x) for x in cosets.values()]))
        rotations = [x for x in cosets.values() if x[1] == 0]
        factors = _invariant_factors([coset_order(x) for x in rotations])
        if len(factors) == 1:
            k = factors[0]
            return "S3" if k == 3 else f"D{k}"
        return f"Dih({abelian_label(factors)})"

    def fixed_field(self, generators: Iterable[GaloisElement]) -> FixedFieldData:
        """
        Raises:
            NotASubgroup: if a generator is not an element of this group
        """
        subgroup = self.closure(self.element(g) for g in generators)
        normal = self.core(subgroup)
        fixed = tuple(m for m in self._subfields if all(self.character(m, x) == 1 for x in subgroup))
        closure = tuple(m for m in self._subfields if all(self.character(m, x) == 1 for x in normal))
        return FixedFieldData(
            degree=self.order // len(subgroup),
            closure_degree=self.order // len(normal),
            group=self._quotient_label(normal),
            subfields=fixed,
            closure_subfields=closure,
        )


@lru_cache(maxsize=256)
def dihedral_model(disc: int) -> DihedralGaloisModel:
    return DihedralGaloisModel(class_group(disc))


def fixed_field_quadratic_subfields(g: DihedralGaloisModel, generators: Iterable[GaloisElement]) -> Tuple[int, ...]:
    """
    Quadratic subfields of the fixed field of the subgroup generated by generators.

    Raises:
        NotASubgroup
    """
    return g.fixed_field(generators).subfields


# -- Hilbert symbols --------------------------------------------------------

Place = Union[int, float]


def _square_class_integer(x: RationalLike) -> int:
    x = to_rational(x)
    if x == 0:
        raise ValueError("Hilbert symbol of zero")
    return x.numerator * x.denominator


def _split(p: int, x: int) -> Tuple[int, int]:
    alpha = sympy.multiplicity(p, x)
    return alpha, x // p ** alpha


def hilbert_symbol(a: RationalLike, b: RationalLike, v: Place) -> int:
    """(a, b)_v for a prime v, or math.inf for the real place"""
    a_int, b_int = _square_class_integer(a), _square_class_integer(b)
    if v == math.inf:
        return -1 if a_int < 0 and b_int < 0 else 1
    p = int(v)
    if not sympy.isprime(p):
        raise ValueError(f"{v} is not a place of Q")
    alpha, u = _split(p, a_int)
    beta, w = _split(p, b_int)
    if p == 2:
        def eps(x: int) -> int:
            return ((x - 1) // 2) % 2

        def omega(x: int) -> int:
            return ((x * x - 1) // 8) % 2

        exponent = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta) % 2 and p % 4 == 3 else 1
    if beta % 2:
        sign *= kronecker_symbol(u, p)
    if alpha % 2:
        sign *= kronecker_symbol(w, p)
    return sign


@dataclass(frozen=True)
class QuaternionDiscriminant:
    """Ramification of (a, b / Q)"""
    disc: int
    infinite_ramified: bool

    @property
    def is_indefinite(self) -> bool:
        return not self.infinite_ramified

    def to_dict(self) -> Dict[str, Any]:
        return {"disc": self.disc, "infinite_ramified": self.infinite_ramified}


def quaternion_discriminant(a: RationalLike, b: RationalLike) -> QuaternionDiscriminant:
    """Product of the finite ramified primes of (a, b / Q) and whether infinity ramifies"""
    a_int, b_int = _square_class_integer(a), _square_class_integer(b)
    places = {2} | set(prime_factors(a_int)) | set(prime_factors(b_int))
    disc = 1
    for p in sorted(places):
        if hilbert_symbol(a_int, b_int, p) == -1:
            disc *= p
    return QuaternionDiscriminant(disc, hilbert_symbol(a_int, b_int, math.inf) == -1)


def conjugation_ideal_class(order: QuadOrder, D: int, m: int) -> List[BQF]:
    """
    Classes a, one reduced representative per coset of Pic(R)^2, with
    (-s, m N(a) / Q) of discriminant D and split at infinity.

    Raises:
        NoClassFound
    """
    group = class_group(order.disc)
    coprime = 2 * D * m * order.disc
    admissible = []
    for form in group.elements:
        n = represented_value(form, coprime)
        ramification = quaternion_discriminant(-order.s, m * n)
        if ramification.disc == D and not ramification.infinite_ramified:
            admissible.append(form)
    if not admissible:
        raise NoClassFound(f"no class of {order} realises discriminant {D} with m = {m}")

    squares = group.squares()
    chosen: Dict[frozenset, BQF] = {}
    for form in admissible:
        coset = frozenset(compose(form, sq) for sq in squares)
        best = chosen.get(coset)
        if best is None or form.sort_key() < best.sort_key():
            chosen[coset] = form
    classes = sorted(chosen.values(), key=BQF.sort_key)
    logger.debug("conjugation_classes", disc=order.disc, D=D, m=m, classes=[f.to_list() for f in classes])
    return classes
