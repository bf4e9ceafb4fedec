import random

import mpmath
from django.test import SimpleTestCase
from sympy import Matrix, Rational

from Orbit_app.building import (
    AffineRoot,
    RootDatum,
    Root,
    RScalar,
    facet_from_equalities,
    hit_offset,
    moy_prasad_contains,
    root_decompose,
)
from Orbit_app.exceptions import FacetError, LieAlgebraError
from Orbit_app.localfield import LocalField

R = RScalar.sqrt2_multiple(Rational(1, 2))


def high_precision(x: RScalar):
    return mpmath.mpf(int(x.q.p)) / int(x.q.q) + mpmath.mpf(int(x.c.p)) / int(x.c.q) * mpmath.sqrt(2)


class RScalarTests(SimpleTestCase):

    def test_sign_of_mixed_terms(self):
        self.assertLess(RScalar(1, -1), 0)
        self.assertGreater(RScalar(-1, 1), 0)
        self.assertGreater(RScalar(3, -2), 0)
        self.assertLess(RScalar(-3, 2), 0)
        self.assertEqual(RScalar(0, 0).sign(), 0)

    def test_ordering_against_high_precision(self):
        rng = random.Random(60)
        with mpmath.workdps(60):
            for _ in range(500):
                a, b = (
                    RScalar(Rational(rng.randint(-60, 60), rng.randint(1, 12)), Rational(rng.randint(-40, 40), rng.randint(1, 12)))
                    for _ in range(2)
                )
                self.assertEqual(a < b, high_precision(a) < high_precision(b), (a, b))
                self.assertEqual(a == b, high_precision(a) == high_precision(b), (a, b))

    def test_arithmetic(self):
        self.assertEqual(R + R, RScalar(0, 1))
        self.assertEqual(R * R, RScalar(Rational(1, 2), 0))
        self.assertEqual(1 - R, RScalar(1, Rational(-1, 2)))
        self.assertEqual(-R + 1, 1 - R)
        self.assertEqual(hash(RScalar(2, 0)), hash(RScalar.coerce(2)))

    def test_floor(self):
        self.assertEqual(R.floor(), 0)
        self.assertEqual((-R).floor(), -1)
        self.assertEqual(RScalar(1, 1).floor(), 2)
        self.assertEqual(RScalar(-3, 0).floor(), -3)
        self.assertTrue(RScalar(4, 0).is_integer())
        self.assertFalse(R.is_integer())

    def test_text_round_trip(self):
        for text in ("1/2", "-3", "sqrt2", "-sqrt2", "1/2*sqrt2", "1+sqrt2", "1-1/2*sqrt2", "-2/3+5*sqrt2"):
            self.assertEqual(str(RScalar.parse(text)), text)
        self.assertEqual(RScalar.parse("√2"), RScalar(0, 1))
        self.assertEqual(str(R), "1/2*sqrt2")
        for bad in ("", "1sqrt2", "abc", "sqrt3"):
            with self.assertRaises(ValueError):
                RScalar.parse(bad)


class RootTests(SimpleTestCase):

    def test_labels(self):
        self.assertEqual(Root((1, -1)).label(), "e1-e2")
        self.assertEqual(Root((0, 2)).label(), "2e2")
        self.assertEqual(Root((-1, -1)).label(), "-e1-e2")
        self.assertEqual(AffineRoot(Root((1, -1)), 1).label(), "e1-e2+1")
        self.assertEqual(AffineRoot(Root((0, -2)), -2).label(), "-2e2-2")

    def test_root_counts(self):
        self.assertEqual(len(RootDatum("sl", 3).roots), 6)
        self.assertEqual(len(RootDatum("sp", 2).roots), 8)
        self.assertEqual(len(RootDatum("sp", 3).roots), 18)
        self.assertEqual(RootDatum("sl", 3).apartment_dim, 2)
        self.assertEqual(RootDatum("sp", 3).matrix_size, 6)

    def test_positive_roots(self):
        self.assertTrue(Root((1, -1)).is_positive())
        self.assertFalse(Root((0, -2)).is_positive())
        self.assertEqual(Root((-1, 1)).positive(), Root((1, -1)))

    def test_hit_offset(self):
        datum = RootDatum("sp", 2)
        x = datum.point([R, RScalar(1, 0)])
        self.assertEqual(hit_offset(Root((2, 0)), x, R), None)
        self.assertEqual(hit_offset(Root((0, 2)), x, RScalar(0, 0)), -2)
        self.assertEqual(hit_offset(Root((1, 0)), x, R), 0)

    def test_point_validation(self):
        with self.assertRaises(FacetError):
            RootDatum("sl", 2).point([1, 0])
        with self.assertRaises(FacetError):
            RootDatum("sp", 2).point([1])
        with self.assertRaises(LieAlgebraError):
            RootDatum("so", 3)


class DecompositionTests(SimpleTestCase):

    def test_sl_round_trip(self):
        datum = RootDatum("sl", 3)
        M = Matrix([[1, 2, 0], [0, 0, 3], [4, 0, -1]])
        torus, components = root_decompose(M, datum)
        self.assertEqual(components[Root((1, -1, 0))], 2)
        self.assertEqual(components[Root((-1, 0, 1))], 4)
        self.assertEqual(datum.assemble(torus, components), M)

    def test_sp_round_trip(self):
        rng = random.Random(5)
        datum = RootDatum("sp", 3)
        for _ in range(10):
            components = {root: Rational(rng.randint(1, 9), rng.randint(1, 4)) for root in datum.roots}
            torus = [Rational(rng.randint(-5, 5)) for _ in range(3)]
            M = datum.assemble(torus, components)
            self.assertEqual(datum.decompose(M), (tuple(torus), components))

    def test_decompose_errors(self):
        with self.assertRaises(LieAlgebraError):
            RootDatum("sl", 2).decompose(Matrix([[1, 0], [0, 0]]))
        with self.assertRaises(LieAlgebraError):
            RootDatum("sl", 2).decompose(Matrix.zeros(3))
        with self.assertRaises(LieAlgebraError):
            RootDatum("sp", 2).decompose(Matrix([[0, 1, 0, 0], [0] * 4, [0] * 4, [0] * 4]))

    def test_moy_prasad_membership(self):
        field = LocalField.for_prime(5)
        datum = RootDatum("sl", 2)
        origin = datum.origin()
        self.assertTrue(moy_prasad_contains(field, datum, origin, R, Matrix([[0, 5], [0, 0]])))
        self.assertFalse(moy_prasad_contains(field, datum, origin, R, Matrix([[0, 1], [0, 0]])))
        self.assertTrue(moy_prasad_contains(field, datum, origin, 0, Matrix([[0, 1], [0, 0]])))
        self.assertFalse(moy_prasad_contains(field, datum, origin, 0, Matrix([[0, 1], [0, 0]]), strict=True))

    def test_moy_prasad_filtration_is_decreasing(self):
        field, rng = LocalField.for_prime(5), random.Random(4)
        levels = sorted([RScalar(-1), -R, RScalar(), R, RScalar(Rational(1, 2)), RScalar(1), R + 1, RScalar(2)])
        for group, n in (("sl", 3), ("sl", 4), ("sp", 2), ("sp", 3)):
            datum = RootDatum(group, n)
            for _ in range(10):
                coords = [RScalar(Rational(rng.randint(-4, 4), 3), Rational(rng.randint(-2, 2), 2)) for _ in range(n)]
                if group == "sl":
                    coords[-1] = -sum(coords[:-1], RScalar())
                x = datum.point(coords)
                components = {
                    root: rng.choice((1, 2, 3, 4)) * Rational(5) ** rng.randint(-2, 2)
                    for root in rng.sample(list(datum.roots), 3)
                }
                M = datum.assemble([0] * n, components)
                member = [moy_prasad_contains(field, datum, x, level, M) for level in levels]
                for i in range(1, len(levels)):
                    self.assertTrue(member[i - 1] or not member[i], (group, n, levels[i]))
                for level in levels:
                    if moy_prasad_contains(field, datum, x, level, M, strict=True):
                        self.assertTrue(moy_prasad_contains(field, datum, x, level, M))


class FacetTests(SimpleTestCase):

    def test_single_equality(self):
        datum = RootDatum("sl", 3)
        psi = AffineRoot(Root((1, -1, 0)), 0)
        facet = facet_from_equalities(datum, {psi}, R, seed=1)
        self.assertEqual(facet.dim, 1)
        self.assertEqual(psi.evaluate(facet.witness), R)
        self.assertIn(psi, facet.equalities)
        self.assertTrue(facet.contains(facet.witness))

    def test_closure_picks_up_forced_roots(self):
        datum = RootDatum("sp", 2)
        S = {AffineRoot(Root((2, 0)), 0), AffineRoot(Root((0, 2)), 0)}
        facet = facet_from_equalities(datum, S, R)
        self.assertEqual(facet.dim, 0)
        self.assertEqual(facet.defining, frozenset(S))
        self.assertIn(AffineRoot(Root((1, 1)), 0), facet.equalities)
        self.assertEqual(len(facet.equalities), 3)

    def test_empty_set_gives_a_chamber(self):
        facet = facet_from_equalities(RootDatum("sp", 2), set(), R, seed=3)
        self.assertEqual(facet.dim, 2)
        self.assertEqual(facet.equalities, frozenset())

    def test_dependent_gradients(self):
        datum = RootDatum("sl", 3)
        S = {
            AffineRoot(Root((1, -1, 0)), 0),
            AffineRoot(Root((0, 1, -1)), 0),
            AffineRoot(Root((1, 0, -1)), 0),
        }
        with self.assertRaises(FacetError):
            facet_from_equalities(datum, S, R)

    def test_gives_up_after_max_attempts(self):
        with self.assertRaises(FacetError):
            facet_from_equalities(RootDatum("sl", 3), {AffineRoot(Root((1, -1, 0)), 0)}, R, max_attempts=0)
