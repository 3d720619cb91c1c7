"""
Exact integer, rational and univariate polynomial arithmetic.

Rationals are ``fractions.Fraction`` (always in lowest terms with a positive
denominator). Polynomials are immutable coefficient tuples, lowest degree
first. Nothing in the package ever touches floating point.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.functions.combinatorial.numbers import jacobi_symbol
from sympy.ntheory import factorint

from .shared.config import get_config
from .shared.errors import DegreeTooHigh, DegreeUnsupported, UnfactoredResidue

Rational = Fraction
RationalLike = Union[int, str, Fraction]


def to_rational(value: RationalLike) -> Fraction:
    """Parse ints, Fractions and wire strings such as "-695374/27" """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    """Wire form "p/q", or "p" for integers"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _to_sympy(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial over Q; coeffs[i] is the coefficient of x**i"""
    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [to_rational(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def of(cls, *coeffs: RationalLike) -> "Poly":
        return cls(tuple(to_rational(c) for c in coeffs))

    @classmethod
    def x(cls) -> "Poly":
        return cls.of(0, 1)

    @classmethod
    def constant(cls, c: RationalLike) -> "Poly":
        return cls.of(c)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial"""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coefficient(i) + other.coefficient(i) for i in range(n)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: Union["Poly", RationalLike]) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(to_rational(other))
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Poly.of(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: RationalLike) -> "Poly":
        c = to_rational(c)
        return Poly(tuple(a * c for a in self.coeffs))

    def __call__(self, x: RationalLike) -> Fraction:
        x = to_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading)

    def divmod(self, divisor: "Poly") -> Tuple["Poly", "Poly"]:
        """Long division; returns (quotient, remainder)"""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        remainder = list(self.coeffs)
        quotient = [Fraction(0)] * max(len(remainder) - divisor.degree, 1)
        lead = divisor.leading
        while len(remainder) - 1 >= divisor.degree and any(remainder):
            shift = len(remainder) - 1 - divisor.degree
            factor = remainder[-1] / lead
            quotient[shift] = factor
            for i, c in enumerate(divisor.coeffs):
                remainder[i + shift] -= factor * c
            remainder.pop()
            while remainder and remainder[-1] == 0:
                remainder.pop()
        return Poly(tuple(quotient)), Poly(tuple(remainder))

    def gcd(self, other: "Poly") -> "Poly":
        """Monic greatest common divisor"""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def to_sympy(self, symbol: Optional[sympy.Symbol] = None) -> sympy.Poly:
        symbol = symbol or sympy.Symbol("x")
        return sympy.Poly([_to_sympy(c) for c in reversed(self.coeffs)] or [0], symbol, domain="QQ")

    def to_json(self) -> List[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[RationalLike]) -> "Poly":
        return cls(tuple(to_rational(c) for c in data))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                text = mono
            else:
                text = format_rational(abs(c)) + ("*" + mono if mono else "")
            terms.append(("- " if c < 0 else "+ ") + text)
        joined = " ".join(terms)
        return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]


# -- integers ---------------------------------------------------------------

def _integer_sqrt(n: int) -> Optional[int]:
    if n < 0:
        return None
    root, exact = sympy.integer_nthroot(n, 2)
    return int(root) if exact else None


def squarefree_part(n: int, trial_bound: Optional[int] = None,
                    residue_limit: Optional[int] = None) -> Tuple[int, int]:
    """
    Write n = s * m**2 with s squarefree and sign(s) = sign(n).

    Trial division runs up to ``trial_bound``. A cofactor left above the bound
    is accepted as prime only up to ``residue_limit`` (at most the square of
    the bound); beyond that it must be a perfect square.

    Raises:
        UnfactoredResidue: for an unclassifiable large cofactor
    """
    if n == 0:
        raise ValueError("squarefree_part of 0")
    if trial_bound is None or residue_limit is None:
        config = get_config()
        trial_bound = trial_bound or config.trial_division_bound
        residue_limit = residue_limit or config.residue_limit
    return _squarefree_part(n, trial_bound, residue_limit)


@lru_cache(maxsize=65536)
def _squarefree_part(n: int, trial_bound: int, residue_limit: int) -> Tuple[int, int]:
    s, m = (-1 if n < 0 else 1), 1
    for p, e in factorint(abs(n), limit=trial_bound).items():
        if p > trial_bound:
            if e % 2 == 0:
                m *= p ** (e // 2)
                continue
            root = _integer_sqrt(p)
            if root is not None:
                m *= root ** e
                continue
            if p > residue_limit:
                raise UnfactoredResidue(f"cofactor {p} of {n} is beyond the residue limit")
            if not sympy.isprime(p):
                raise UnfactoredResidue(f"composite cofactor {p} of {n} could not be split")
        m *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, m


def squarefree_class(x: RationalLike) -> int:
    """Squarefree integer s with x = s * (rational square); x nonzero"""
    x = to_rational(x)
    return squarefree_part(x.numerator * x.denominator)[0]


def is_rational_square(x: RationalLike) -> bool:
    x = to_rational(x)
    return x >= 0 and _integer_sqrt(x.numerator) is not None and _integer_sqrt(x.denominator) is not None


def rational_sqrt(x: RationalLike) -> Optional[Fraction]:
    """Nonnegative square root when x is a rational square, else None"""
    return rational_root(x, 2)


def rational_root(x: RationalLike, k: int) -> Optional[Fraction]:
    """Real k-th root of x when it is rational (nonnegative for even k)"""
    x = to_rational(x)
    sign = 1
    if x < 0:
        if k % 2 == 0:
            return None
        sign, x = -1, -x
    num, exact_num = sympy.integer_nthroot(x.numerator, k)
    den, exact_den = sympy.integer_nthroot(x.denominator, k)
    if not (exact_num and exact_den):
        return None
    return sign * Fraction(int(num), int(den))


def prime_factors(n: int) -> List[int]:
    """Sorted distinct primes dividing |n|"""
    if n == 0:
        raise ValueError("prime_factors of 0")
    return sorted(int(p) for p in factorint(abs(n)))


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorint(abs(n)).values())


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extending the Jacobi symbol to all n"""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(jacobi_symbol(a % n, n))


# -- polynomials ------------------------------------------------------------

def _clear_denominators(f: Poly) -> List[int]:
    lcm = 1
    for c in f.coeffs:
        lcm = lcm * c.denominator // sympy.gcd(lcm, c.denominator)
    return [int(c * lcm) for c in f.coeffs]


def _deflate(f: Poly, r: Fraction) -> Poly:
    quotient, remainder = f.divmod(Poly.of(-r, 1))
    assert remainder.is_zero()
    return quotient


def rational_roots(f: Poly) -> List[Fraction]:
    """All rational roots of f, with multiplicity, in ascending order"""
    if f.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    roots: List[Fraction] = []
    while f.degree >= 1 and f.coefficient(0) == 0:
        roots.append(Fraction(0))
        f = Poly(f.coeffs[1:])
    if f.degree < 1:
        return sorted(roots)

    ints = _clear_denominators(f)
    candidates = sorted({
        sign * Fraction(p, q)
        for p in sympy.divisors(abs(ints[0]))
        for q in sympy.divisors(abs(ints[-1]))
        for sign in (1, -1)
    })
    for r in candidates:
        while f.degree >= 1 and f(r) == 0:
            roots.append(r)
            f = _deflate(f, r)
    return sorted(roots)


def _quadratic_split(f: Poly) -> Optional[Tuple[Poly, Poly]]:
    """Split a monic quartic into two rational quadratics via its resolvent cubic"""
    e, d, c, b = (f.coefficient(i) for i in range(4))
    resolvent = Poly.of(-(b * b * e + d * d - 4 * c * e), b * d - 4 * e, -c, 1)
    for t in sorted(set(rational_roots(resolvent))):
        su = rational_sqrt(t * t - 4 * e)
        sv = rational_sqrt(b * b - 4 * (c - t))
        if su is None or sv is None:
            continue
        q1, q2 = (t + su) / 2, (t - su) / 2
        for sign in (1, -1):
            s1, s2 = (-b + sign * sv) / 2, (-b - sign * sv) / 2
            if -(s1 * q2 + s2 * q1) == d:
                return Poly.of(q1, -s1, 1), Poly.of(q2, -s2, 1)
    return None


def factor_low_degree(f: Poly) -> List[Poly]:
    """
    Monic irreducible factors of f over Q (degree at most 4), with multiplicity.

    f equals its leading coefficient times the product of the returned
    factors. Linear factors come first, in ascending root order.

    Raises:
        DegreeTooHigh: if deg f > 4
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.degree > 4:
        raise DegreeTooHigh(f"degree {f.degree} exceeds 4")

    g = f.monic()
    factors: List[Poly] = []
    for r in rational_roots(g):
        factors.append(Poly.of(-r, 1))
        g = _deflate(g, r)
    if g.degree == 4:
        split = _quadratic_split(g)
        if split is not None:
            factors.extend(sorted(split, key=lambda p: p.coeffs))
            return factors
    if g.degree >= 1:
        factors.append(g)
    return factors


def discriminant(f: Poly) -> Fraction:
    """
    Discriminant via the resultant of f and f'.

    Raises:
        DegreeUnsupported: unless deg f is 2, 3 or 4
    """
    if f.degree not in (2, 3, 4):
        raise DegreeUnsupported(f"discriminant needs degree 2..4, got {f.degree}")
    return _from_sympy(f.to_sympy().discriminant())


def product(polys: Iterable[Poly]) -> Poly:
    out = Poly.of(1)
    for p in polys:
        out = out * p
    return out


def coefficient_map(f: Poly) -> Dict[str, str]:
    """{"a0": ..., "a4": ...} view used by reports"""
    return {f"a{i}": format_rational(c) for i, c in enumerate(f.coeffs)}
