"""
Tests for field specs and Galois fingerprints
"""

import os
import sys
from fractions import Fraction

import orjson
import pytest
import sympy
from pydantic import ValidationError

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from shimura.core import Poly
from shimura.fields import (
    FieldSpec, FieldFingerprint, FieldKind, TRIVIAL_FINGERPRINT, quadratic_closure,
    square_class_rank, resolvent_cubic, quartic_galois_group, splitting_fingerprint,
    fingerprint_of_spec, fingerprint_of_compositum, fingerprints_match, describe_quadratics
)
from shimura.shared.errors import DegenerateSpec, DegreeTooHigh, RepeatedRoots


class TestQuadraticClosure:
    """Square-class bookkeeping"""

    def test_closure_of_two_generators(self):
        assert quadratic_closure([-1, 2]) == (-2, -1, 2)
        assert quadratic_closure([-3, -7]) == (-7, -3, 21)
        assert quadratic_closure([5, 5]) == (5,)
        assert quadratic_closure([]) == ()

    def test_rank(self):
        assert square_class_rank([-1, 2, -2]) == 2
        assert square_class_rank([-14, 10, -35]) == 2
        assert square_class_rank([-1, 2, 3]) == 3


class TestFieldSpec:
    """Construction, validation and wire format"""

    def test_validation(self):
        """Non-squarefree and trivial generators are rejected"""
        with pytest.raises(ValueError):
            FieldSpec.quadratic(4)
        with pytest.raises(ValueError):
            FieldSpec.quadratic(1)
        with pytest.raises(ValueError):
            FieldSpec.biquadratic(-3, -3)
        with pytest.raises(ValueError):
            FieldSpec.nested_radical(3, 4)

    def test_quadratic_of(self):
        """Q(sqrt v) for a rational v, Q itself for squares"""
        assert FieldSpec.quadratic_of(Fraction(-128)) == FieldSpec.quadratic(-2)
        assert FieldSpec.quadratic_of(Fraction(9, 4)).kind is FieldKind.RATIONALS

    def test_wire_round_trip(self):
        """Every variant survives to_dict / from_dict through orjson"""
        specs = [
            FieldSpec.rationals(),
            FieldSpec.quadratic(-3),
            FieldSpec.biquadratic(-3, -7),
            FieldSpec.nested_radical(3, -8),
            FieldSpec.splitting(Poly.of(1, 0, 1)),
            FieldSpec.compositum([FieldSpec.quadratic(5), FieldSpec.nested_radical(-1, -16)]),
        ]
        for spec in specs:
            data = orjson.loads(orjson.dumps(spec.to_dict()))
            assert FieldSpec.from_dict(data) == spec

    def test_wire_examples(self):
        assert FieldSpec.biquadratic(-3, -7).to_dict() == {"type": "biquadratic", "m": [-3, -7]}
        assert FieldSpec.nested_radical(3, -8).to_dict() == {"type": "nested_radical", "a": "3", "b": "-8"}

    def test_unknown_type_rejected(self):
        with pytest.raises(ValidationError):
            FieldSpec.from_dict({"type": "cubic", "m": 2})


class TestSplittingFingerprint:
    """Galois closures of low-degree polynomials"""

    def test_small_degrees(self):
        assert splitting_fingerprint(Poly.of(-2, 1)) == TRIVIAL_FINGERPRINT
        assert splitting_fingerprint(Poly.of(1, 0, 1)) == FieldFingerprint(2, "C2", (-1,))
        assert splitting_fingerprint(Poly.of(-2, 0, 0, 1)) == FieldFingerprint(6, "S3", (-3,))
        assert splitting_fingerprint(Poly.of(1, -3, 0, 1)).group == "C3"

    def test_quartic_groups(self):
        """One quartic per transitive group"""
        assert quartic_galois_group(Poly.of(-2, 0, 0, 0, 1)) == "D4"
        assert quartic_galois_group(Poly.of(1, 0, 0, 0, 1)) == "V4"
        assert quartic_galois_group(Poly.of(1, 1, 1, 1, 1)) == "C4"
        assert quartic_galois_group(Poly.of(1, 1, 0, 0, 1)) == "S4"
        assert quartic_galois_group(Poly.of(12, 8, 0, 0, 1)) == "A4"

    def test_quartic_subfields(self):
        """x^4 - 2: D4 with quadratic subfields -2, -1, 2"""
        assert splitting_fingerprint(Poly.of(-2, 0, 0, 0, 1)) == FieldFingerprint(8, "D4", (-2, -1, 2))
        assert splitting_fingerprint(Poly.of(1, 0, 0, 0, 1)) == FieldFingerprint(4, "V4", (-2, -1, 2))

    def test_reducible_quartic(self):
        """(x^2 + 1)(x^2 - 5) splits over Q(i, sqrt 5)"""
        f = Poly.of(1, 0, 1) * Poly.of(-5, 0, 1)
        assert splitting_fingerprint(f) == FieldFingerprint(4, "V4", (-5, -1, 5))
        g = Poly.of(1, 1, 1) * Poly.of(3, 0, 1)
        assert splitting_fingerprint(g) == FieldFingerprint(2, "C2", (-3,))

    def test_resolvent_cubic_against_sympy(self):
        """Roots of the resolvent are x1x2 + x3x4 and its conjugates"""
        f = Poly.of(-2, 0, 0, 0, 1)
        x = sympy.Symbol("x")
        assert resolvent_cubic(f).to_sympy(x).as_expr() == x ** 3 + 8 * x

    def test_errors(self):
        with pytest.raises(RepeatedRoots):
            splitting_fingerprint(Poly.of(1, 0, -2, 0, 1))
        with pytest.raises(DegreeTooHigh):
            splitting_fingerprint(Poly.of(1, 0, 0, 0, 0, 1))


class TestSpecFingerprints:
    """Fingerprints of explicitly presented fields"""

    def test_nested_radicals(self):
        """Q(sqrt(3 +- sqrt -8)) is D4 with subfields -34, -2, 17"""
        assert fingerprint_of_spec(FieldSpec.nested_radical(3, -8)) == FieldFingerprint(8, "D4", (-34, -2, 17))
        assert fingerprint_of_spec(FieldSpec.nested_radical(-1, -16)) == FieldFingerprint(8, "D4", (-17, -1, 17))

    def test_cyclic_nested_radical(self):
        """Q(sqrt(2 + sqrt 2)) is cyclic of degree 4"""
        assert fingerprint_of_spec(FieldSpec.nested_radical(2, 2)) == FieldFingerprint(4, "C4", (2,))

    def test_degenerate_nested_radical(self):
        """a^2 - b a square splits the radical into two square roots"""
        # sqrt(3 + sqrt 5) = sqrt(5/2) + sqrt(1/2)
        assert fingerprint_of_spec(FieldSpec.nested_radical(3, 5)) == FieldFingerprint(4, "V4", (2, 5, 10))
        with pytest.raises(DegenerateSpec):
            fingerprint_of_spec(FieldSpec.nested_radical(3, 8))

    def test_nested_radical_matches_its_minimal_polynomial(self):
        """x^4 - 2a x^2 + (a^2 - b) generates the same closure"""
        for a, b in [(3, -8), (-1, -16), (-3, -23), (2, 2), (-1, -7)]:
            f = Poly.of(a * a - b, 0, -2 * a, 0, 1)
            assert fingerprint_of_spec(FieldSpec.nested_radical(a, b)) == splitting_fingerprint(f)

    def test_compositum(self):
        """Quadratics multiply out; a D4 field absorbs its own quadratic subfields"""
        assert fingerprint_of_spec(FieldSpec.compositum([FieldSpec.quadratic(-3), FieldSpec.quadratic(5)])) == \
            FieldFingerprint(4, "V4", (-15, -3, 5))
        d4 = fingerprint_of_spec(FieldSpec.nested_radical(3, -8))
        assert fingerprint_of_compositum([d4, FieldFingerprint(2, "C2", (17,))]) == d4
        bigger = fingerprint_of_compositum([d4, FieldFingerprint(2, "C2", (-3,))])
        assert bigger.degree == 16
        assert -3 in bigger.subfields
        assert fingerprint_of_compositum([]) == TRIVIAL_FINGERPRINT

    def test_matching_and_description(self):
        fp = fingerprint_of_spec(FieldSpec.biquadratic(-14, 10))
        assert fingerprints_match(fp, FieldFingerprint(4, "V4", (10, -14, -35)))
        assert describe_quadratics(fp.subfields) == ["Q(sqrt(-35))", "Q(sqrt(-14))", "Q(sqrt(10))"]
        assert FieldFingerprint.from_dict(fp.to_dict()) == fp
