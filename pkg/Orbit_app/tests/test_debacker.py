import logging
from dataclasses import replace

from django.test import SimpleTestCase
from sympy import Integer, Matrix, Rational

from Orbit_app.building import AffineRoot, Root, RootDatum, RScalar
from Orbit_app.debacker import (
    DEFAULT_LEVEL,
    ApartmentSlice,
    SliceConstraint,
    apartment_slice,
    blocks_gcd,
    coset_min_probe,
    exampledist_triples,
    fourier_motzkin_feasible,
    orbit_facet,
    positional_blocks,
    shift_check,
    sl_associate_normal_form,
    sl_equalities,
    sl_facet,
    sp_equalities,
    sp_facet_dimension,
)
from Orbit_app.lie_core import LieTriple
from Orbit_app.localfield import LocalField
from Orbit_app.partitions import Partition
from Orbit_app.quadform import FormInvariants, hyperbolic_invariants
from Orbit_app.sl_orbits import SLOrbit, enumerate_sl_orbits
from Orbit_app.sp_orbits import SpOrbit, classify_sp, enumerate_sp_orbits
from Orbit_app.verification import (
    check_associativity,
    check_exampledist,
    check_facets,
    check_shift,
    diagonal_conjugation_class,
)

R = DEFAULT_LEVEL


def affine(coeffs, offset=0):
    return AffineRoot(Root(tuple(coeffs)), offset)


class EqualityTests(SimpleTestCase):

    def setUp(self):
        self.field = LocalField.for_prime(5)

    def test_sl_regular_orbit_carries_d_on_the_last_root(self):
        orbit = SLOrbit(Partition((3,)), (1, 0), Integer(5))
        self.assertEqual(sl_equalities(orbit, self.field), {affine((1, -1, 0)), affine((0, 1, -1), 1)})

    def test_sl_block_ends_are_skipped(self):
        orbit = SLOrbit(Partition((2, 2)), (0, 0), Integer(1))
        self.assertEqual(sl_equalities(orbit, self.field), {affine((1, -1, 0, 0)), affine((0, 0, 1, -1))})
        zero = SLOrbit(Partition((1, 1, 1)), (0, 0), Integer(1))
        self.assertEqual(sl_equalities(zero, self.field), set())

    def test_sp_single_part(self):
        unit = SpOrbit(Partition((4,)), ((4, FormInvariants(1, 1, 1)),))
        self.assertEqual(sp_equalities(unit, self.field), {affine((1, -1)), affine((0, 2))})
        uniformizer = SpOrbit(Partition((4,)), ((4, FormInvariants(1, 5, 1)),))
        self.assertEqual(sp_equalities(uniformizer, self.field), {affine((1, -1)), affine((0, 2), 1)})

    def test_sp_hyperbolic_pair(self):
        orbit = SpOrbit(Partition((2, 2)), ((2, hyperbolic_invariants(self.field, 1)),))
        self.assertEqual(sp_equalities(orbit, self.field), {affine((1, 1))})
        self.assertEqual(sp_facet_dimension(self.field, orbit), 1)

    def test_sp_odd_parts(self):
        orbit = SpOrbit(Partition((3, 3)))
        self.assertEqual(sp_equalities(orbit, self.field), {affine((1, -1, 0)), affine((0, 1, -1))})


class FacetTests(SimpleTestCase):

    def setUp(self):
        self.field = LocalField.for_prime(5)

    def test_sl2_regular_orbit(self):
        orbit = SLOrbit(Partition((2,)), (1, 0), Integer(5))
        d = sl_facet(self.field, orbit)
        self.assertEqual(d.facet.dim, 0)
        self.assertEqual(d.adapted, (1, -1))
        self.assertEqual(d.facet.witness.coords[0] - d.facet.witness.coords[1], R - 1)
        self.assertEqual(d.membership(self.field), {"X": True, "H": True, "Y": True})

    def test_dimensions_and_membership(self):
        with self.assertLogs("Orbit_app.verification", level=logging.INFO):
            self.assertEqual(check_facets(self.field, "sl", 3, R), [])
        self.assertEqual(check_facets(self.field, "sp", 2, R), [])

    def test_facets_are_maximal_in_large_residual_characteristic(self):
        field = LocalField.for_prime(23)
        for n in (2, 3, 4):
            self.assertEqual(check_facets(field, "sl", n, R), [], n)
        for n in (2, 3, 4):
            self.assertEqual(check_facets(field, "sp", n, R), [], n)

    def test_every_sl_orbit_up_to_rank_five(self):
        field = LocalField.for_prime(17)
        for n in range(2, 7):
            self.assertEqual(check_facets(field, "sl", n, R), [], n)


class SliceTests(SimpleTestCase):

    def setUp(self):
        self.field = LocalField.for_prime(5)

    def test_principal_sl2_slice_is_a_point(self):
        X, Y = Matrix([[0, 1], [0, 0]]), Matrix([[0, 0], [1, 0]])
        triple = LieTriple.of(Y, X * Y - Y * X, X)
        region = apartment_slice(self.field, RootDatum("sl", 2), triple)
        self.assertTrue(region.feasible)
        self.assertEqual(region.dim, 0)
        self.assertEqual(region.forced_equalities(), frozenset({affine((1, -1))}))
        self.assertEqual(str(region.constraints[0]), "1/2*sqrt2 <= e1-e2 <= 1/2*sqrt2")

    def test_infeasible_constraint(self):
        self.assertFalse(SliceConstraint(Root((1, -1)), R, RScalar()).feasible())
        self.assertTrue(SliceConstraint(Root((1, -1)), None, RScalar()).feasible())
        self.assertFalse(SliceConstraint(Root((1, -1)), R).forced)

    def test_shift_identity(self):
        for n in range(2, 6):
            self.assertEqual(check_shift(self.field, "sl", n, R), [], n)
        for n in (1, 2, 3):
            self.assertEqual(check_shift(self.field, "sp", n, R), [], n)
        self.assertEqual(check_shift(LocalField.for_prime(7), "sp", 2, 2 * R), [])
        d = orbit_facet(self.field, enumerate_sl_orbits(self.field, 2)[0])
        self.assertTrue(shift_check(self.field, d, RScalar(3, 1)))

    def test_chained_equalities_empty_the_slice(self):
        # e3-e4 and e2-e3 force e2-e4 = -1+2r, above the bound 1-r
        region = ApartmentSlice(RootDatum("sl", 4), R, (
            SliceConstraint(Root((0, 0, 1, -1)), R - 3, R - 3),
            SliceConstraint(Root((0, 1, -1, 0)), R + 2, R + 2),
            SliceConstraint(Root((0, 1, 0, -1)), R - 1, 1 - R),
        ))
        self.assertTrue(all(c.feasible() for c in region.constraints))
        self.assertFalse(region.feasible)
        self.assertIsNone(region.dim)

    def test_chained_inequalities_imply_equalities(self):
        region = ApartmentSlice(RootDatum("sl", 3), R, (
            SliceConstraint(Root((1, -1, 0)), R),
            SliceConstraint(Root((0, 1, -1)), R),
            SliceConstraint(Root((1, 0, -1)), None, 2 * R),
        ))
        self.assertTrue(region.feasible)
        self.assertEqual(len(region.forced), 3)
        self.assertEqual(region.dim, 0)
        self.assertEqual(region.forced_equalities(), frozenset({affine((1, -1, 0)), affine((0, 1, -1))}))

    def test_symplectic_implicit_equalities(self):
        region = ApartmentSlice(RootDatum("sp", 2), R, (
            SliceConstraint(Root((1, -1)), R),
            SliceConstraint(Root((0, 2)), 2 * R),
            SliceConstraint(Root((1, 1)), None, 3 * R),
        ))
        self.assertEqual(region.dim, 0)
        self.assertEqual(region.forced_equalities(), frozenset({affine((1, -1))}))
        loose = replace(region, constraints=region.constraints[:2] + (SliceConstraint(Root((1, 1)), None, 4 * R),))
        self.assertEqual(loose.dim, 2)
        self.assertEqual(loose.forced, ())

    def test_one_sided_and_empty_slices(self):
        datum = RootDatum("sl", 3)
        half_open = ApartmentSlice(datum, R, (SliceConstraint(Root((1, -1, 0)), R),))
        self.assertEqual((half_open.feasible, half_open.dim), (True, 2))
        band = ApartmentSlice(datum, R, (SliceConstraint(Root((1, -1, 0)), -R, R), SliceConstraint(Root((0, 1, -1)), RScalar(), None)))
        self.assertEqual(band.dim, 2)
        self.assertIsNone(ApartmentSlice(datum, R, torus_ok=False).dim)
        crossed = ApartmentSlice(datum, R, (SliceConstraint(Root((1, -1, 0)), R, RScalar()),))
        self.assertIsNone(crossed.dim)

    def test_elimination_handles_strict_rows(self):
        one = Rational(1)
        # x <= r and -x < -r
        self.assertFalse(fourier_motzkin_feasible([], [((one,), R, False), ((-one,), -R, True)]))
        self.assertTrue(fourier_motzkin_feasible([], [((one,), R, False), ((-one,), -R, False)]))
        self.assertFalse(fourier_motzkin_feasible([((one, one), R), ((one, one), 2 * R)], []))
        self.assertTrue(fourier_motzkin_feasible([((one, -one), R)], [((one, one), RScalar(), True)]))

    def test_scaled_sl2_slice_is_shifted(self):
        X, Y = Matrix([[0, 5], [0, 0]]), Matrix([[0, 0], [Rational(1, 5), 0]])
        triple = LieTriple.of(Y, X * Y - Y * X, X)
        region = apartment_slice(self.field, RootDatum("sl", 2), triple)
        self.assertEqual(region.dim, 0)
        self.assertEqual(region.forced_equalities(), frozenset({affine((1, -1), 1)}))


class AssociativityTests(SimpleTestCase):

    def test_positional_blocks(self):
        self.assertEqual(positional_blocks({1, 3}, 4), [(1, 2), (3, 2)])
        self.assertEqual(positional_blocks(set(), 3), [(1, 1), (2, 1), (3, 1)])
        self.assertEqual(blocks_gcd({1, 3}, 4), 2)
        self.assertEqual(blocks_gcd({1}, 3), 1)

    def test_start_anchor_matches_diagonal_conjugation(self):
        offsets = {3: 1}
        self.assertEqual(sl_associate_normal_form({1, 3}, offsets, 4), {1: 0, 3: 1})
        self.assertEqual(diagonal_conjugation_class({1, 3}, offsets, 4, 5), 1)
        # reading x_l as a partial sum loses the offset on the second block
        self.assertEqual(sl_associate_normal_form({1, 3}, offsets, 4, anchor="end"), {1: 0, 3: 0})

    def test_single_block(self):
        offsets = {1: 0, 2: 0, 3: 1}
        self.assertEqual(sl_associate_normal_form({1, 2, 3}, offsets, 4)[3], 1)
        self.assertEqual(diagonal_conjugation_class({1, 2, 3}, offsets, 4, 7), 1)

    def test_without_last_root(self):
        self.assertEqual(sl_associate_normal_form({1}, {1: 2}, 3), {1: 0})

    def test_exhaustive_against_oracle(self):
        for n in range(2, 6):
            self.assertEqual(check_associativity(n, 5), [], n)


class CosetMinimalityTests(SimpleTestCase):

    def assert_cosets_dominate(self, field, orbits, samples, seed):
        for o in orbits:
            result = coset_min_probe(field, orbit_facet(field, o), samples=samples, seed=seed)
            self.assertTrue(result.passed, (o.orbit_id, result.failures))
            self.assertEqual(result.sampled, samples)
            self.assertGreaterEqual(result.nilpotent, samples // 2)

    def test_sl_cosets_only_reach_larger_orbits(self):
        field = LocalField.for_prime(13)
        for n in range(2, 6):
            self.assert_cosets_dominate(field, enumerate_sl_orbits(field, n), 100, seed=n)

    def test_sp_cosets_only_reach_larger_orbits(self):
        field = LocalField.for_prime(17)
        for n in (1, 2, 3):
            self.assert_cosets_dominate(field, enumerate_sp_orbits(field, n), 100, seed=n)

    def test_small_prime_sample(self):
        field = LocalField.for_prime(11)
        orbit = SpOrbit(Partition((2, 2)), ((2, hyperbolic_invariants(field, 1)),))
        self.assert_cosets_dominate(field, [orbit], 20, seed=2)


class ExampledistTests(SimpleTestCase):

    def setUp(self):
        self.field = LocalField.for_prime(5)

    def test_slices_differ_in_dimension(self):
        datum = RootDatum("sp", 2)
        triples = exampledist_triples(self.field)
        self.assertEqual(apartment_slice(self.field, datum, triples["X1"]).dim, 1)
        self.assertEqual(apartment_slice(self.field, datum, triples["X0"]).dim, 0)
        for triple in triples.values():
            self.assertTrue(triple.is_valid())
            self.assertTrue(triple.in_sp())

    def test_same_rational_orbit(self):
        expected = SpOrbit(Partition((2, 2)), ((2, hyperbolic_invariants(self.field, 1)),))
        for triple in exampledist_triples(self.field).values():
            self.assertEqual(classify_sp(self.field, triple.X), expected)
        self.assertEqual(check_exampledist(self.field, R), [])
