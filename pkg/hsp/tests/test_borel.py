import numpy as np
from django.test import SimpleTestCase

from hsp import borel, exceptions, gf, linalg
from hsp.linalg import Subspace


class FlagTests(SimpleTestCase):

    def setUp(self):
        self.field = gf.get_field(3)
        self.rng = np.random.default_rng(3)

    def test_standard_flag(self):
        flag = borel.standard_flag(self.field, 3)
        self.assertEqual(len(flag), 2)
        self.assertEqual(flag.last, Subspace.coordinate(self.field, 3, [2]))
        self.assertEqual(flag, borel.flag_from_conjugator(
            self.field, linalg.identity(self.field, 3)))

    def test_degree_one_flag_is_empty(self):
        flag = borel.standard_flag(self.field, 1)
        self.assertEqual(flag.members(), [])

    def test_validation(self):
        U = Subspace.coordinate(self.field, 3, [2])
        with self.assertRaises(exceptions.DimensionMismatch):
            borel.Flag(self.field, 3, [U])
        V = Subspace.coordinate(self.field, 3, [0, 1])
        with self.assertRaises(exceptions.DimensionMismatch):
            borel.Flag(self.field, 3, [V, U])

    def test_adapted_basis_round_trip(self):
        for n in (1, 2, 3, 4):
            X = linalg.random_invertible(self.field, n, self.rng)
            flag = borel.flag_from_conjugator(self.field, X)
            P = borel.adapted_basis(flag)
            self.assertEqual(borel.flag_from_conjugator(
                self.field, linalg.inverse(self.field, P)), flag)
            self.assertEqual(borel.flag_from_conjugator(
                self.field, borel.conjugator_from_flag(flag)), flag)

    def test_stabilizes(self):
        field = self.field
        flag = borel.standard_flag(field, 3)
        lower = linalg.as_matrix(field, [[1, 0, 0], [2, 2, 0], [1, 1, 1]])
        upper = linalg.as_matrix(field, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
        self.assertTrue(borel.stabilizes(field, lower, flag))
        self.assertFalse(borel.stabilizes(field, upper, flag))

    def test_flag_ignores_lower_triangular_factors(self):
        for q in (2, 3):
            field = gf.get_field(q)
            lower = list(borel.lower_triangular_elements(field, 2))
            for X in linalg.general_linear_group(field, 2):
                flag = borel.flag_from_conjugator(field, X)
                for L in lower:
                    self.assertEqual(borel.flag_from_conjugator(
                        field, linalg.mat_mul(field, L, X)), flag)

    def test_stabilizes_is_conjugation_equivariant(self):
        field = self.field
        for _ in range(10):
            X = linalg.random_invertible(field, 3, self.rng)
            W = linalg.random_invertible(field, 3, self.rng)
            flag = borel.flag_from_conjugator(field, X)
            moved = borel.flag_from_conjugator(field,
                                               linalg.mat_mul(field, X, W))
            members = list(borel.enumerate_borel(flag))
            candidates = members[:5] + [
                linalg.random_invertible(field, 3, self.rng)
                for _ in range(20)]
            for A in candidates:
                self.assertEqual(
                    borel.stabilizes(field, A, flag),
                    borel.stabilizes(field, linalg.conjugate(field, W, A),
                                     moved))

    def test_stabilizers_form_a_group(self):
        field = self.field
        X = linalg.random_invertible(field, 3, self.rng)
        flag = borel.flag_from_conjugator(field, X)
        members = list(borel.enumerate_borel(flag))
        for _ in range(50):
            i, j = self.rng.integers(len(members), size=2)
            A, B = members[i], members[j]
            self.assertTrue(borel.stabilizes(
                field, linalg.mat_mul(field, A, B), flag))
            self.assertTrue(borel.stabilizes(
                field, linalg.inverse(field, A), flag))

    def test_restrict_and_lift(self):
        field = self.field
        for _ in range(10):
            X = linalg.random_invertible(field, 3, self.rng)
            flag = borel.flag_from_conjugator(field, X)
            Z = linalg.complete_to_invertible(field, flag.last.basis[0])
            moved = borel.flag_from_conjugator(field,
                                               linalg.mat_mul(field, X, Z))
            self.assertEqual(moved.last, Subspace.coordinate(field, 3, [2]))
            sub = borel.restrict_flag(moved)
            self.assertEqual(sub.n, 2)
            self.assertEqual(borel.lift_flag(sub, Z), flag)

    def test_lift_shape(self):
        sub = borel.standard_flag(self.field, 2)
        with self.assertRaises(exceptions.DimensionMismatch):
            borel.lift_flag(sub, linalg.identity(self.field, 4))


class GroupTests(SimpleTestCase):

    def setUp(self):
        self.rng = np.random.default_rng(5)

    def test_borel_order(self):
        self.assertEqual(borel.borel_order(3, 2), 12)
        self.assertEqual(borel.borel_order(3, 2, frozenset([1])), 6)
        self.assertEqual(borel.borel_order(4, 3), 27 * 64)

    def test_generated_group_is_the_stabilizer(self):
        for n, q in ((2, 3), (3, 2), (2, 4)):
            field = gf.field_from_order(q)
            X = linalg.random_invertible(field, n, self.rng)
            flag = borel.flag_from_conjugator(field, X)
            group = borel.generate_group(field,
                                         borel.stabilizer_generators(flag))
            self.assertEqual(len(group), borel.borel_order(q, n))
            for A in group.values():
                self.assertTrue(borel.stabilizes(field, A, flag))
            enumerated = {A.tobytes() for A in borel.enumerate_borel(flag)}
            self.assertEqual(enumerated, set(group))

    def test_stabilizer_count_over_the_whole_group(self):
        for n, q in ((2, 2), (2, 3), (3, 2)):
            field = gf.field_from_order(q)
            X = linalg.random_invertible(field, n, self.rng)
            flag = borel.flag_from_conjugator(field, X)
            stabilizer = {A.tobytes()
                          for A in linalg.general_linear_group(field, n)
                          if borel.stabilizes(field, A, flag)}
            self.assertEqual(len(stabilizer),
                             (q - 1) ** n * q ** (n * (n - 1) // 2))
            self.assertEqual(len(stabilizer), borel.borel_order(q, n))
            self.assertEqual(stabilizer,
                             {A.tobytes()
                              for A in borel.enumerate_borel(flag)})

    def test_special_generators(self):
        for n, q in ((2, 3), (2, 5), (3, 3)):
            field = gf.field_from_order(q)
            X = linalg.random_invertible(field, n, self.rng)
            flag = borel.flag_from_conjugator(field, X)
            generators = borel.stabilizer_generators(flag, special=True)
            for G in generators:
                self.assertEqual(linalg.det(field, G), 1)
            group = borel.generate_group(field, generators)
            self.assertEqual(len(group),
                             (q - 1) ** (n - 1) * q ** (n * (n - 1) // 2))

    def test_restricted_enumeration(self):
        field = gf.get_field(5)
        squares = field.nth_powers(2)
        elements = list(borel.lower_triangular_elements(field, 2, squares))
        self.assertEqual(len(elements), borel.borel_order(5, 2, squares))
        for A in elements:
            self.assertIn(linalg.det(field, A), squares)

    def test_generation_cap(self):
        field = gf.get_field(3)
        generators = borel.stabilizer_generators(
            borel.standard_flag(field, 3))
        with self.assertRaises(exceptions.CapExceeded):
            borel.generate_group(field, generators, cap=10)
