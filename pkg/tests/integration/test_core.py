"""
Tests for exact rational and polynomial arithmetic
Cross-checked against sympy where an independent computation exists
"""

import os
import random
import sys
from fractions import Fraction

import pytest
import sympy

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from shimura.core import (
    Poly, to_rational, format_rational, squarefree_part, squarefree_class,
    is_rational_square, rational_sqrt, rational_root, prime_factors, is_squarefree,
    kronecker_symbol, rational_roots, factor_low_degree, discriminant, product,
    coefficient_map
)
from shimura.shared.errors import DegreeTooHigh, DegreeUnsupported, UnfactoredResidue

X = sympy.Symbol("x")


def random_poly(rng: random.Random, degree: int, bound: int = 20) -> Poly:
    coeffs = [Fraction(rng.randint(-bound, bound), rng.randint(1, 6)) for _ in range(degree)]
    coeffs.append(Fraction(rng.choice([-3, -2, -1, 1, 2, 5])))
    return Poly.of(*coeffs)


def as_sympy(f: Poly) -> sympy.Expr:
    return f.to_sympy(X).as_expr()


class TestRationals:
    """Wire format of rationals"""

    def test_parse_and_format(self):
        """Strings, ints and Fractions parse to the same value"""
        assert to_rational("-695374/27") == Fraction(-695374, 27)
        assert to_rational(7) == Fraction(7)
        assert to_rational(" 4/6 ") == Fraction(2, 3)
        assert format_rational(Fraction(-4945, 3)) == "-4945/3"
        assert format_rational(Fraction(12, 4)) == "3"

    def test_rejects_bad_input(self):
        """Empty strings and booleans are not rationals"""
        with pytest.raises(ValueError):
            to_rational("")
        with pytest.raises(TypeError):
            to_rational(True)
        with pytest.raises(TypeError):
            to_rational(1.5)


class TestPoly:
    """Polynomial arithmetic against sympy"""

    def test_normalizes_trailing_zeros(self):
        """Trailing zero coefficients are dropped; zero has degree -1"""
        assert Poly.of(1, 2, 0, 0).degree == 1
        assert Poly.of(0, 0).degree == -1
        assert Poly.of(0).is_zero()

    def test_ring_operations_match_sympy(self):
        """Sum, difference, product and powers agree with sympy expansion"""
        rng = random.Random(1729)
        for _ in range(50):
            f = random_poly(rng, rng.randint(0, 4))
            g = random_poly(rng, rng.randint(0, 4))
            assert sympy.expand(as_sympy(f + g) - (as_sympy(f) + as_sympy(g))) == 0
            assert sympy.expand(as_sympy(f - g) - (as_sympy(f) - as_sympy(g))) == 0
            assert sympy.expand(as_sympy(f * g) - as_sympy(f) * as_sympy(g)) == 0
            assert sympy.expand(as_sympy(f ** 3) - as_sympy(f) ** 3) == 0

    def test_division_identity(self):
        """f = q*g + r with deg r < deg g"""
        rng = random.Random(7)
        for _ in range(50):
            f = random_poly(rng, rng.randint(2, 5))
            g = random_poly(rng, rng.randint(1, 3))
            q, r = f.divmod(g)
            assert q * g + r == f
            assert r.degree < g.degree

    def test_division_by_zero(self):
        """Dividing by the zero polynomial raises"""
        with pytest.raises(ZeroDivisionError):
            Poly.of(1, 1).divmod(Poly())

    def test_gcd_is_monic_common_factor(self):
        """gcd((x-1)(x+2), (x-1)(x-3)) = x - 1"""
        a = Poly.of(-1, 1) * Poly.of(2, 1)
        b = Poly.of(-1, 1) * Poly.of(-3, 1)
        assert a.gcd(b) == Poly.of(-1, 1)

    def test_evaluation_and_derivative(self):
        """Horner evaluation and formal derivative"""
        f = Poly.of(-3, -26, -53, 26, -3)
        assert f(0) == -3
        assert f(Fraction(1, 2)) == Fraction(str(as_sympy(f).subs(X, sympy.Rational(1, 2))))
        assert f.derivative() == Poly.of(-26, -106, 78, -12)

    def test_json_form(self):
        """Coefficients travel as rational strings, lowest degree first"""
        f = Poly.of(Fraction(1, 3), 0, -2)
        assert f.to_json() == ["1/3", "0", "-2"]
        assert Poly.from_json(f.to_json()) == f
        assert coefficient_map(f) == {"a0": "1/3", "a1": "0", "a2": "-2"}

    def test_product(self):
        """Product of an empty family is 1"""
        assert product([]) == Poly.of(1)
        assert product([Poly.of(1, 1), Poly.of(-1, 1)]) == Poly.of(-1, 0, 1)


class TestIntegers:
    """Squarefree parts, roots and symbols"""

    def test_squarefree_part_brute_force(self):
        """n = s m^2 with s squarefree, for every n in a window"""
        for n in list(range(-500, 0)) + list(range(1, 500)):
            s, m = squarefree_part(n)
            assert s * m * m == n
            assert is_squarefree(s)

    def test_squarefree_class_of_rationals(self):
        """The class ignores rational squares"""
        assert squarefree_class(-12) == -3
        assert squarefree_class(Fraction(1, 2)) == 2
        assert squarefree_class(Fraction(-27, 4)) == -3
        assert squarefree_class(49) == 1

    def test_unfactored_residue(self):
        """A large composite cofactor beyond a tiny trial bound cannot be classified"""
        n = 1000003 * 1000033
        with pytest.raises(UnfactoredResidue):
            squarefree_part(n, trial_bound=100, residue_limit=10**4)

    def test_square_cofactor_is_accepted(self):
        """A perfect-square cofactor above the bound still has squarefree part 1"""
        assert squarefree_part(1000003 ** 2, trial_bound=100, residue_limit=10**4) == (1, 1000003)

    def test_prime_cofactor_beyond_limit_is_not_assumed(self):
        """A prime cofactor above the residue limit is reported, not trusted"""
        with pytest.raises(UnfactoredResidue):
            squarefree_part(2 * 1000003, trial_bound=100, residue_limit=10**4)
        assert squarefree_part(2 * 1009, trial_bound=100, residue_limit=10**4) == (2018, 1)

    def test_squarefree_part_of_zero(self):
        with pytest.raises(ValueError):
            squarefree_part(0)

    def test_rational_roots_of_numbers(self):
        """Square and cube roots of rationals"""
        assert is_rational_square(Fraction(9, 4))
        assert not is_rational_square(-4)
        assert rational_sqrt(Fraction(1296)) == 36
        assert rational_sqrt(2) is None
        assert rational_root(Fraction(-8, 27), 3) == Fraction(-2, 3)
        assert rational_root(-4, 2) is None

    def test_prime_factors(self):
        assert prime_factors(-330) == [2, 3, 5, 11]
        assert prime_factors(1) == []
        assert is_squarefree(462)
        assert not is_squarefree(12)

    def test_kronecker_symbol(self):
        """Agrees with Jacobi for odd positive moduli; the 2-adic rule otherwise"""
        for a in range(-60, 61):
            for n in range(1, 60, 2):
                assert kronecker_symbol(a, n) == sympy.jacobi_symbol(a % n, n)
        assert kronecker_symbol(5, 2) == -1
        assert kronecker_symbol(-7, 2) == 1
        assert kronecker_symbol(-4, 2) == 0
        assert kronecker_symbol(-3, -1) == -1
        assert kronecker_symbol(1, 0) == 1


class TestPolynomialFactoring:
    """Rational roots, low-degree factorisation and discriminants"""

    def test_rational_roots_match_sympy(self):
        """Rational roots with multiplicity"""
        f = Poly.of(-2, 1) * Poly.of(-2, 1) * Poly.of(Fraction(1, 3), 1) * Poly.of(1, 0, 1)
        assert rational_roots(f) == [Fraction(-1, 3), Fraction(2), Fraction(2)]
        rng = random.Random(11)
        for _ in range(30):
            f = random_poly(rng, 4)
            expected = sorted(
                Fraction(int(r.p), int(r.q))
                for r, k in sympy.roots(f.to_sympy(X), filter="Q").items()
                for _ in range(k)
            )
            assert rational_roots(f) == expected

    def test_factor_low_degree_recovers_polynomial(self):
        """Leading coefficient times the factors gives back f; count matches sympy"""
        cases = [
            Poly.of(-3, -26, -53, 26, -3),
            Poly.of(6912, 0, -156, 0, 1),
            Poly.of(1, 0, 1) * Poly.of(-5, 0, 1),
            Poly.of(-1, 1) * Poly.of(2, 1) * Poly.of(3, 0, 1),
            Poly.of(128, 0, -13, 0, 1),
        ]
        for f in cases:
            factors = factor_low_degree(f)
            assert product(factors).scale(f.leading) == f
            _, expected = sympy.factor_list(as_sympy(f), X)
            assert len(factors) == sum(k for _, k in expected)

    def test_factor_degree_limit(self):
        with pytest.raises(DegreeTooHigh):
            factor_low_degree(Poly.of(1, 0, 0, 0, 0, 1))

    def test_discriminant_matches_sympy(self):
        rng = random.Random(5)
        for degree in (2, 3, 4):
            for _ in range(10):
                f = random_poly(rng, degree)
                assert discriminant(f) == Fraction(str(sympy.discriminant(as_sympy(f), X)))

    def test_discriminant_degree_limit(self):
        with pytest.raises(DegreeUnsupported):
            discriminant(Poly.of(1, 1))
