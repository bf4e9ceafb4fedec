import math
import random
import warnings
from itertools import product

from django.test import SimpleTestCase
from sympy import Integer, Rational
from sympy.utilities.exceptions import SymPyDeprecationWarning

from Orbit_app.exceptions import FieldArithmeticError
from Orbit_app.localfield import HILBERT_TABLE, LocalField, to_field_element
from Orbit_app.verification import brute_force_unit_classes, check_counting, check_hilbert


class LocalFieldTests(SimpleTestCase):

    def test_epsilon_convention(self):
        self.assertEqual(LocalField.for_prime(3).epsilon, -1)
        self.assertEqual(LocalField.for_prime(5).epsilon, 2)
        self.assertEqual(LocalField.for_prime(7).epsilon, -1)
        self.assertEqual(LocalField.for_prime(13).epsilon, 2)
        self.assertEqual(LocalField.for_prime(17).epsilon, 3)

    def test_rejects_bad_primes(self):
        for p in (2, 9, 1, 0, "x"):
            with self.assertRaises(FieldArithmeticError):
                LocalField.for_prime(p)

    def test_legendre_matches_euler_criterion_without_deprecations(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", SymPyDeprecationWarning)
            for p in (3, 5, 7, 11, 13, 19):
                field = LocalField.for_prime(p)
                for a in range(1, p):
                    expected = 1 if pow(a, (p - 1) // 2, p) == 1 else -1
                    self.assertEqual(field.legendre(a), expected, (p, a))
                    self.assertIs(type(field.legendre(a * p * p)), int)

    def test_to_field_element(self):
        self.assertEqual(to_field_element("-3/25"), Rational(-3, 25))
        self.assertEqual(to_field_element(4), Integer(4))
        with self.assertRaises(FieldArithmeticError):
            to_field_element(0.5)
        with self.assertRaises(FieldArithmeticError):
            to_field_element("abc")

    def test_valuation_and_unit_part(self):
        field = LocalField.for_prime(5)
        self.assertEqual(field.valuation(Rational(50, 3)), 2)
        self.assertEqual(field.valuation(Rational(3, 25)), -2)
        self.assertEqual(field.valuation(7), 0)
        self.assertEqual(field.valuation(0), math.inf)
        self.assertEqual(field.unit_part(50), 2)
        with self.assertRaises(FieldArithmeticError):
            field.unit_part(0)

    def test_square_class_labels(self):
        field = LocalField.for_prime(5)
        self.assertEqual(field.square_class_label(4), "1")
        self.assertEqual(field.square_class_label(-1), "1")
        self.assertEqual(field.square_class_label(3), "eps")
        self.assertEqual(field.square_class_label(20), "pi")
        self.assertEqual(field.square_class_label(Rational(2, 5)), "eps*pi")
        field7 = LocalField.for_prime(7)
        self.assertEqual(field7.square_class_label(-1), "eps")
        self.assertEqual(field7.square_class(-28), -7)
        with self.assertRaises(FieldArithmeticError):
            field7.square_class(0)

    def test_hilbert_table_per_branch(self):
        for p, minus_one_square in ((3, False), (5, True), (7, False), (11, False), (13, True)):
            field = LocalField.for_prime(p)
            self.assertEqual(field.minus_one_is_square, minus_one_square)
            reps = field.square_class_representatives
            table = tuple(tuple(field.hilbert_symbol(a, b) for b in reps) for a in reps)
            self.assertEqual(table, HILBERT_TABLE[minus_one_square])
            for a, b in product(reps, repeat=2):
                self.assertEqual(field.hilbert_symbol(a, b), field.hilbert_symbol_formula(a, b))

    def test_hilbert_eps_pi(self):
        field = LocalField.for_prime(5)
        self.assertEqual(field.hilbert_symbol(field.epsilon, field.p), -1)
        with self.assertRaises(FieldArithmeticError):
            field.hilbert_symbol(0, 3)

    def test_hilbert_properties_on_random_pairs(self):
        for p in (5, 7):
            field = LocalField.for_prime(p)
            self.assertEqual(check_hilbert(field, random.Random(p), samples=200), [])

    def test_power_class_counts(self):
        field = LocalField.for_prime(5)
        self.assertEqual(field.power_class_count(2), (4, 2))
        self.assertEqual(field.power_class_count(5), (25, 5))
        self.assertEqual(brute_force_unit_classes(5, 5), 5)
        with self.assertRaises(FieldArithmeticError):
            field.power_class_count(1)

    def test_counting_matches_brute_force(self):
        for p in (3, 5, 7):
            self.assertEqual(check_counting(LocalField.for_prime(p)), [])

    def test_power_class_representatives(self):
        field = LocalField.for_prime(5)
        reps = field.power_class_representatives(2)
        self.assertEqual([d for _, d in reps], [1, 2, 5, 10])
        for cls, d in reps:
            self.assertEqual(field.power_class(d, 2), cls)

    def test_collision_when_p_divides_m(self):
        # 1 and 4 have equal valuation, differ by 3, and are not cube-equivalent over Q_3.
        field = LocalField.for_prime(3)
        self.assertEqual(field.valuation(4 - 1), 1)
        self.assertNotEqual(field.power_class(1, 3), field.power_class(4, 3))
        # Without p | m, units congruent mod p always share a class.
        field7 = LocalField.for_prime(7)
        for u in range(1, 49):
            if u % 7:
                self.assertEqual(field7.power_class(u, 3), field7.power_class(u + 7, 3))

    def test_residual_characteristic_check(self):
        field = LocalField.for_prime(5)
        with self.assertLogs("Orbit_app.localfield", level="WARNING"):
            checked = field.check_residual_characteristic("sp", 2)
        self.assertEqual(checked.coxeter_bound_checked_for, 2)
        self.assertEqual(checked.p, 5)
