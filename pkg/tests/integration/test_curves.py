"""
Tests for genus, Atkin-Lehner involutions, CM loci and fields of definition on X0(D, N)
"""

import os
import sys

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from shimura.classfield import BQF, QuadOrder
from shimura.curves import (
    Level, genus, elliptic_point_count, scan_genus_one, atkin_lehner_group, atkin_lehner_compose,
    eichler_symbol, cm_locus, fixed_point_orders, fixed_point_count, quotient_genus,
    galois_vs_atkin_lehner, conjugation_pairing, cm_field_of_definition, quotient_cm_field, fixed_point_fingerprint,
    quadratic_point_orders, rational_cm_point
)
from shimura.fields import FieldFingerprint
from shimura.shared.errors import (
    DisOne, EmptyLocus, InvalidLevel, MEqualsOne, MNotInGroup, NSquarefreeRequired
)

GENUS_ONE_LEVELS = [
    (6, 5), (6, 7), (6, 13), (10, 3), (10, 7),
    (14, 1), (15, 1), (21, 1), (33, 1), (34, 1), (46, 1),
]

GENUS_ONE_QUOTIENTS = [
    (39, 13), (55, 5), (62, 2), (69, 3), (77, 11), (85, 17), (94, 2), (178, 89),
    (210, 30), (210, 42), (210, 70), (210, 105), (330, 3), (330, 22), (330, 33), (330, 165), (462, 154),
]


def order(disc: int) -> QuadOrder:
    return QuadOrder.from_disc(disc)


class TestLevel:
    """Validation of (D, N)"""

    def test_invalid_levels(self):
        with pytest.raises(DisOne):
            Level(1, 1)
        for D, N in [(2, 1), (12, 1), (6, 3), (0, 1), (6, 0)]:
            with pytest.raises(InvalidLevel):
                Level(D, N)

    def test_ordering(self):
        assert sorted([Level(14, 1), Level(6, 7), Level(6, 5)]) == [Level(6, 5), Level(6, 7), Level(14, 1)]
        assert Level(34).to_dict() == {"D": 34, "N": 1}


class TestGenus:
    """Genus formula and the genus-one scan"""

    def test_small_genera(self):
        assert genus(Level(6, 1)) == 0
        assert genus(Level(10, 1)) == 0
        assert genus(Level(14, 1)) == 1
        assert genus(Level(34, 1)) == 1
        assert genus(Level(6, 5)) == 1

    def test_elliptic_points(self):
        assert elliptic_point_count(Level(6, 1), 3) == 2
        assert elliptic_point_count(Level(6, 1), 4) == 2
        assert elliptic_point_count(Level(34, 1), 3) == 4
        assert elliptic_point_count(Level(34, 1), 4) == 0
        with pytest.raises(ValueError):
            elliptic_point_count(Level(6, 1), 2)

    def test_scan(self):
        """Exactly eleven curves X0(D, N) have genus one"""
        assert scan_genus_one(1000) == [Level(D, N) for D, N in sorted(GENUS_ONE_LEVELS)]
        assert scan_genus_one(14) == [Level(14, 1)]
        assert scan_genus_one(13) == []


class TestAtkinLehner:
    """The group W(D, N)"""

    def test_group_and_composition(self):
        level = Level(6, 5)
        assert atkin_lehner_group(level) == [1, 2, 3, 5, 6, 10, 15, 30]
        assert atkin_lehner_compose(level, 6, 10) == 15
        assert atkin_lehner_compose(level, 30, 30) == 1
        with pytest.raises(MNotInGroup):
            atkin_lehner_compose(level, 4, 2)

    def test_squarefree_n_required(self):
        with pytest.raises(NSquarefreeRequired):
            atkin_lehner_group(Level(10, 9))


class TestCMLoci:
    """CM(R) counts and fixed points"""

    def test_eichler_symbol(self):
        assert eichler_symbol(order(-12), 2) == 1
        assert eichler_symbol(order(-3), 2) == -1
        assert eichler_symbol(order(-56), 7) == 0

    def test_cm_locus(self):
        locus = cm_locus(Level(14, 1), order(-56))
        assert (locus.nonempty, locus.count, locus.DR) == (True, 4, 1)
        locus = cm_locus(Level(6, 1), order(-3))
        assert (locus.nonempty, locus.count, locus.branch_count, locus.DR) == (True, 2, 2, 2)
        assert not cm_locus(Level(6, 1), order(-7)).nonempty
        assert cm_locus(Level(6, 1), order(-7)).count == 0

    def test_fixed_point_orders(self):
        assert [o.disc for o in fixed_point_orders(2)] == [-4, -8]
        assert [o.disc for o in fixed_point_orders(7)] == [-28, -7]
        assert [o.disc for o in fixed_point_orders(14)] == [-56]
        with pytest.raises(MEqualsOne):
            fixed_point_orders(1)

    def test_fixed_point_counts(self):
        """On X0(14) w_14 and w_2 have four fixed points, w_7 none"""
        level = Level(14, 1)
        assert fixed_point_count(level, 14) == 4
        assert fixed_point_count(level, 2) == 4
        assert fixed_point_count(level, 7) == 0
        assert fixed_point_count(Level(6, 1), 2) == 2

    def test_quotient_genus(self):
        assert quotient_genus(Level(14, 1), 7) == 1
        assert quotient_genus(Level(14, 1), 14) == 0
        with pytest.raises(MNotInGroup):
            quotient_genus(Level(14, 1), 3)

    @pytest.mark.parametrize("D,m", GENUS_ONE_QUOTIENTS)
    def test_catalogued_quotients_have_genus_one(self, D, m):
        assert quotient_genus(Level(D, 1), m) == 1

    def test_galois_action_of_involutions(self):
        assert galois_vs_atkin_lehner(Level(14, 1), order(-56), 2) == BQF(2, 0, 7)
        assert galois_vs_atkin_lehner(Level(14, 1), order(-4), 7) is None

    def test_quadratic_point_orders(self):
        assert [o.disc for o in quadratic_point_orders(Level(14, 1), 20)] == [-4, -8, -11]

    def test_conjugation_pairing(self):
        """D(R) N*(R) = 1 for disc -56 on X0(14); one class per coset of Pic^2"""
        m, classes = conjugation_pairing(Level(14, 1), order(-56))
        assert m == 1
        assert 1 <= len(classes) <= 2
        assert all(c.discriminant == -56 and c.is_reduced for c in classes)


class TestFieldsOfDefinition:
    """Fields generated by CM points"""

    def test_fixed_points_of_w14(self):
        """CM(-56) on X0(14) is defined over a D4 quartic containing Q(sqrt -7)"""
        field = cm_field_of_definition(Level(14, 1), order(-56))
        assert field.degree_over_Q == 4
        assert not field.is_full_ring_class_field
        assert field.fixed.subfields == (-7,)
        assert field.fingerprint == FieldFingerprint(8, "D4", (-14, -7, 2))
        assert fixed_point_fingerprint(Level(14, 1), 14) == field.fingerprint

    def test_quotient_field(self):
        field = quotient_cm_field(Level(14, 1), order(-56), 14)
        assert field.degree_over_Q == 4
        assert field.m_r == 14
        assert field.m_r_agrees

    def test_empty_locus(self):
        with pytest.raises(EmptyLocus):
            cm_field_of_definition(Level(6, 1), order(-7))

    @pytest.mark.parametrize("D,m,disc", [(35, 7, -35), (51, 3, -51), (115, 23, -115)])
    def test_rational_cm_points_on_quotients(self, D, m, disc):
        """Class number two orders giving rational points on elliptic quotients"""
        assert rational_cm_point(D, m, order(disc))
