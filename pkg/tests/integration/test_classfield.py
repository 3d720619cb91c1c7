"""
Tests for class groups, genus theory, the dihedral Galois model and Hilbert symbols
"""

import math
import os
import random
import sys
from itertools import product

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from shimura.classfield import (
    QuadOrder, BQF, GaloisElement, reduced_forms, compose, class_group, abelian_label,
    represented_value, class_of_norm, genus_subfields, principal_genus_represents,
    dihedral_model, hilbert_symbol, quaternion_discriminant, conjugation_ideal_class
)
from shimura.core import kronecker_symbol, prime_factors
from shimura.shared.errors import BadDiscriminant, DiscMismatch, NoClassFound, NotCoprime


def analytic_class_number(disc: int) -> int:
    """Dirichlet's formula for a fundamental discriminant"""
    w = {-3: 6, -4: 4}.get(disc, 2)
    total = sum(kronecker_symbol(disc, a) * a for a in range(1, -disc))
    return -w * total // (2 * -disc)


class TestQuadOrder:
    """Discriminants, conductors and fundamental parts"""

    def test_from_disc(self):
        order = QuadOrder.from_disc(-56)
        assert (order.fundamental_disc, order.conductor, order.s) == (-56, 1, 14)
        assert order.is_maximal
        order = QuadOrder.from_disc(-12)
        assert (order.fundamental_disc, order.conductor, order.s) == (-3, 2, 3)
        assert not order.is_maximal

    def test_bad_discriminants(self):
        for disc in (-5, -2, 0, 8):
            with pytest.raises(BadDiscriminant):
                QuadOrder.from_disc(disc)


class TestClassGroup:
    """Reduced forms and Gauss composition"""

    def test_reduction(self):
        assert BQF(5, 12, 8).reduce() == BQF(1, 0, 4)
        assert BQF(3, 2, 5).is_reduced
        with pytest.raises(ValueError):
            BQF(1, 0, -1).reduce()

    def test_compose_non_principal_forms(self):
        """(3, 2, 5) generates Pic(-56) = C4"""
        assert compose(BQF(3, 2, 5), BQF(3, -2, 5)) == BQF(1, 0, 14)
        assert compose(BQF(3, 2, 5), BQF(3, 2, 5)) == BQF(2, 0, 7)
        assert compose(BQF(2, 0, 7), BQF(3, 2, 5)) == BQF(3, -2, 5)

    def test_class_numbers_match_analytic_formula(self):
        """h from reduced forms equals Dirichlet's sum for every fundamental |disc| <= 2000"""
        for disc in range(-3, -2001, -1):
            if disc % 4 not in (0, 1) or not QuadOrder.from_disc(disc).is_maximal:
                continue
            assert len(reduced_forms(disc)) == analytic_class_number(disc), disc

    def test_known_structures(self):
        assert class_group(-56).structure == (4,)
        assert class_group(-84).structure == (2, 2)
        assert class_group(-420).structure == (2, 2, 2)
        assert class_group(-163).h == 1
        assert class_group(-56).two_torsion_rank == 1
        assert set(class_group(-56).squares()) == {BQF(1, 0, 14), BQF(2, 0, 7)}

    def test_abelian_labels(self):
        assert abelian_label(()) == "1"
        assert abelian_label((4,)) == "C4"
        assert abelian_label((2, 4)) == "C2xC4"

    def test_composition_axioms(self):
        """Identity, inverses, commutativity and associativity on whole groups"""
        for disc in (-56, -104, -260, -420, -47):
            group = class_group(disc)
            identity = group.identity
            for f in group.elements:
                assert compose(f, identity) == f
                assert compose(f, f.inverse()) == identity
            for f, g in product(group.elements, repeat=2):
                assert compose(f, g) == compose(g, f)
            rng = random.Random(disc)
            for _ in range(20):
                f, g, k = (rng.choice(group.elements) for _ in range(3))
                assert compose(compose(f, g), k) == compose(f, compose(g, k))

    def test_element_orders_divide_h(self):
        group = class_group(-104)
        for f in group.elements:
            assert group.h % group.element_order(f) == 0
        assert group.power(BQF(3, 2, 9), group.h) == group.identity

    def test_disc_mismatch(self):
        with pytest.raises(DiscMismatch):
            compose(BQF(1, 0, 14), BQF(1, 0, 5))


class TestRepresentation:
    """Values represented by forms"""

    def test_represented_value(self):
        assert represented_value(BQF(1, 0, 14)) == 1
        assert represented_value(BQF(2, 0, 7)) == 2
        assert represented_value(BQF(2, 0, 7), coprime_to=2) == 7
        assert represented_value(BQF(3, 2, 5), coprime_to=2) == 3

    def test_class_of_norm(self):
        assert class_of_norm(-56, 1) == BQF(1, 0, 14)
        assert class_of_norm(-56, 2) == BQF(2, 0, 7)
        assert class_of_norm(-56, 5) == BQF(3, -2, 5)
        assert class_of_norm(-56, 11) is None


class TestGenusTheory:
    """Genus fields and the principal genus"""

    def test_genus_subfields(self):
        assert genus_subfields(-56) == (-14, -7, 2)
        assert genus_subfields(-4) == (-1,)
        assert genus_subfields(-3) == (-3,)
        assert genus_subfields(-84) == (-21, -7, -3, -1, 3, 7, 21)

    def test_principal_genus(self):
        assert principal_genus_represents(-56, 1)
        assert principal_genus_represents(-56, 15)
        assert not principal_genus_represents(-56, 3)
        with pytest.raises(NotCoprime):
            principal_genus_represents(-56, 7)
        with pytest.raises(ValueError):
            principal_genus_represents(-56, 0)


class TestDihedralModel:
    """Gal(H/Q) for the order of discriminant -56"""

    def test_whole_ring_class_field(self):
        g = dihedral_model(-56)
        assert g.order == 8
        fixed = g.fixed_field([])
        assert (fixed.degree, fixed.closure_degree, fixed.group) == (8, 8, "D4")
        assert fixed.subfields == (-14, -7, 2)

    def test_real_subfield(self):
        """Complex conjugation fixes a non-Galois quartic containing Q(sqrt 2)"""
        fixed = dihedral_model(-56).fixed_field([GaloisElement(BQF(1, 0, 14), conjugate=True)])
        assert (fixed.degree, fixed.closure_degree, fixed.group) == (4, 8, "D4")
        assert fixed.subfields == (2,)

    def test_fixed_field_of_pic_is_k(self):
        fixed = dihedral_model(-56).fixed_field([GaloisElement(BQF(3, 2, 5))])
        assert (fixed.degree, fixed.group, fixed.subfields) == (2, "C2", (-14,))
        assert fixed.fingerprint.subfields == (-14,)


class TestHilbertSymbols:
    """Local symbols and quaternion ramification"""

    def test_product_formula(self):
        """The number of places where (a, b) = -1 is even"""
        rng = random.Random(2024)
        for _ in range(300):
            a = rng.choice([-1, 1]) * rng.randint(1, 400)
            b = rng.choice([-1, 1]) * rng.randint(1, 400)
            places = [math.inf, 2] + prime_factors(a) + prime_factors(b)
            values = [hilbert_symbol(a, b, v) for v in sorted(set(places), key=float)]
            assert values.count(-1) % 2 == 0

    def test_quaternion_discriminants(self):
        assert quaternion_discriminant(-1, -1).to_dict() == {"disc": 2, "infinite_ramified": True}
        assert quaternion_discriminant(-14, 3).to_dict() == {"disc": 14, "infinite_ramified": False}
        assert quaternion_discriminant(-6, 2).disc == 6
        assert quaternion_discriminant(1, 5).disc == 1

    def test_bad_places(self):
        with pytest.raises(ValueError):
            hilbert_symbol(3, 0, 2)
        with pytest.raises(ValueError):
            hilbert_symbol(3, 5, 4)

    def test_conjugation_ideal_class(self):
        """Only the principal class of Z[sqrt -6] realises (-6, 2n) of discriminant 6"""
        order = QuadOrder.from_disc(-24)
        assert conjugation_ideal_class(order, 6, 2) == [BQF(1, 0, 6)]
        with pytest.raises(NoClassFound):
            conjugation_ideal_class(order, 35, 2)
