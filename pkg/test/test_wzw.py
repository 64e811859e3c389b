import unittest
import numpy as np

from gerbecalc.gerbedata.jandl import su2_involution, check_involution_sign
from gerbecalc.fields.forms import scale_form, zero_form
from gerbecalc.gerbedata.branes import DBraneRecord, BiBraneRecord, biconjugacy_world_volume, validate_dbrane, \
    validate_bibrane
from gerbecalc.ops.quaternion import qmul, pure, random_quaternions
from gerbecalc.wzw.classes import ConjugacyClass, BiconjugacyClass, BraneLabel, conjugate_points, random_conjugation
from gerbecalc.wzw.forms import canonical_three_form, haar_integral, omega_h, maurer_cartan_form, varpi, \
    su2_pair_target
from gerbecalc.wzw.fusion import fusion_bounds_check, fusion_table, verlinde_su2, quantum_dimensions, \
    class_product_interval, class_product_monte_carlo, brane_angles, admissible_in_interval, \
    verlinde_multiplicities, omega_abc, FusionFiber
from gerbecalc.wzw.branes import symmetric_dbrane, symmetric_bibrane, validate_symmetric_branes
from gerbecalc.wzw.census import jandl_census, count_involutions, involution_ids, cohomology_z2, census_consistency


class TestClasses(unittest.TestCase):

    def test_labels(self):
        label = BraneLabel(2, 1)
        self.assertTrue(abs(label.theta - np.pi / 2) < 1e-12)
        self.assertRaises(ValueError, BraneLabel, 2, 3)
        self.assertRaises(ValueError, BraneLabel, 0, 0)
        self.assertEqual(len(brane_angles(4)), 5)

    def test_conjugacy_class(self):
        self.assertTrue(ConjugacyClass(0.0).is_singleton)
        self.assertEqual(ConjugacyClass(np.pi).dim, 0)
        c = ConjugacyClass(1.0)
        self.assertEqual(c.dim, 2)
        points = c.sample(50, seed=2)
        self.assertTrue(c.contains(points))
        self.assertFalse(c.contains(ConjugacyClass(1.1).sample(5)))
        self.assertRaises(ValueError, ConjugacyClass, 4.0)

    def test_biconjugacy_class(self):
        b = BiconjugacyClass(0.7)
        self.assertEqual(b.sample(20, seed=1).shape, (20, 8))
        self.assertTrue(b.contains(b.sample(20, seed=1)))
        self.assertTrue(b.contains(b.sample(20, seed=1, low_discrepancy=False)))


class TestForms(unittest.TestCase):

    def test_haar_integral(self):
        for k in [1, 2, 3]:
            self.assertTrue(abs(haar_integral(canonical_three_form(k), n_samples=20000) - k) < 0.02 * k)
        self.assertRaises(ValueError, haar_integral, maurer_cartan_form(0))
        self.assertRaises(ValueError, canonical_three_form, 0)

    def test_inversion_sign(self):
        for z in [1, -1]:
            report = check_involution_sign(canonical_three_form(1), su2_involution(z), n_samples=50)
            self.assertTrue(report.passed)
        self.assertRaises(ValueError, su2_involution, 2)

    def test_three_form_bi_invariant(self):
        rng = np.random.default_rng(4)
        h = canonical_three_form(2)
        identity = np.array([1.0, 0.0, 0.0, 0.0])
        for g in random_quaternions(10, rng):
            x, y, z = [pure(v) for v in rng.normal(size=(3, 3))]
            expected = h(identity, x, y, z)
            self.assertTrue(abs(h(g, qmul(g, x), qmul(g, y), qmul(g, z)) - expected) < 1e-9)
            self.assertTrue(abs(h(g, qmul(x, g), qmul(y, g), qmul(z, g)) - expected) < 1e-9)
            self.assertTrue(abs(h(g, y, x, z) + h(g, x, y, z)) < 1e-9)
            self.assertTrue(abs(h(g, z, x, y) - h(g, x, y, z)) < 1e-9)

    def test_omega_h_ad_invariant(self):
        rng = np.random.default_rng(5)
        label = BraneLabel(3, 1)
        form = omega_h(label)
        for p in label.conjugacy_class.sample(20, seed=3):
            x = random_conjugation(rng)
            u, v = rng.normal(size=(2, 4))
            moved = form(conjugate_points(x, p), conjugate_points(x, u), conjugate_points(x, v))
            self.assertTrue(abs(moved - form(p, u, v)) < 1e-8)
        self.assertTrue(abs(omega_h(0.0)(np.array([1.0, 0.0, 0.0, 0.0]), u, v)) < 1e-15)

    def test_dbrane_rescaled(self):
        h = canonical_three_form(2)
        brane = symmetric_dbrane(2, 1)
        self.assertTrue(validate_dbrane(h, brane, n_samples=50).passed)
        for scale in [2.0, 1.1]:
            rescaled = DBraneRecord(brane.world_volume, scale_form(brane.omega, scale), brane.module)
            report = validate_dbrane(h, rescaled, n_samples=50)
            self.assertFalse(report.passed)
            self.assertTrue(report["max_residual"] > 1e-3)

    def test_varpi_cross_term(self):
        h = canonical_three_form(1)
        bibrane = symmetric_bibrane(1, 0)
        report = validate_bibrane(h, h, bibrane, n_samples=50)
        self.assertTrue(report.passed)
        self.assertTrue(report["max_residual"] < 1e-4)
        biconj = BiconjugacyClass(BraneLabel(1, 0).theta)
        bare = BiBraneRecord(biconjugacy_world_volume(biconj), varpi(biconj, k=1, cross_term=False),
                             zero_form(su2_pair_target(), 1))
        report = validate_bibrane(h, h, bare, n_samples=50)
        self.assertFalse(report.passed)
        self.assertTrue(report["max_residual"] > 1e-2)

    def test_class_form_off_class(self):
        form = omega_h(np.pi / 2)
        tangent = np.array([0.0, 0.0, 1.0, 0.0])
        self.assertRaises(ValueError, form, np.array([1.0, 0.0, 0.0, 0.0]), tangent, tangent)

    def test_symmetric_branes(self):
        self.assertEqual(symmetric_dbrane(2, 0).world_volume.dim, 2)
        for bibranes in [False, True]:
            report = validate_symmetric_branes(1, n_samples=50, bibranes=bibranes)
            self.assertTrue(report.passed)
            self.assertEqual(report["labels"], [0, 1])


class TestFusion(unittest.TestCase):

    def test_bounds(self):
        report = fusion_bounds_check(10)
        self.assertTrue(report["passed"])
        self.assertEqual(report["summary"], "121/121 pairs match")
        for k in [1, 2, 5]:
            self.assertEqual(fusion_bounds_check(k)["matched"], (k + 1) ** 2)

    def test_interval_endpoints_excluded(self):
        self.assertEqual(admissible_in_interval(3, 0, 0), [0])
        self.assertEqual(admissible_in_interval(2, 0, 2), [2])
        self.assertEqual(admissible_in_interval(2, 1, 1), [0, 1, 2])
        self.assertEqual(verlinde_su2(2, 0, 2), [2])

    def test_verlinde(self):
        self.assertEqual(verlinde_su2(3, 1, 1), [0, 2])
        self.assertEqual(verlinde_su2(2, 2, 2), [0])
        self.assertEqual(verlinde_su2(4, 2, 1), [1, 3])
        self.assertTrue(np.max(np.abs(quantum_dimensions(1) - 1.0)) < 1e-12)
        self.assertRaises(ValueError, verlinde_su2, 2, 3, 0)

    def test_table(self):
        table = fusion_table(2)
        self.assertEqual(len(table), 10)
        self.assertTrue(np.all(table["N"] == 1))
        self.assertEqual(list(table.columns), ["a", "b", "c", "N", "interval_low", "interval_high", "unit"])

    def test_class_product(self):
        low, high = class_product_interval(np.pi / 3, np.pi / 2)
        self.assertTrue(abs(low - np.pi / 6) < 1e-12)
        self.assertTrue(abs(high - 5 * np.pi / 6) < 1e-12)
        low_mc, high_mc = class_product_monte_carlo(np.pi / 3, np.pi / 2, n_samples=5000)
        self.assertTrue(low_mc >= low - 1e-9)
        self.assertTrue(high_mc <= high + 1e-9)
        self.assertTrue(high_mc - low_mc > 0.5 * (high - low))


    def test_angles(self):
        self.assertTrue(np.max(np.abs(np.array(brane_angles(1)) - np.array([np.pi / 3, 2 * np.pi / 3]))) < 1e-12)
        self.assertTrue(np.max(np.abs(np.array(brane_angles(2)) - np.pi * np.array([0.25, 0.5, 0.75]))) < 1e-12)
        angles = np.array(brane_angles(5))
        self.assertTrue(np.max(np.abs(angles + angles[::-1] - np.pi)) < 1e-12)

    def test_class_product_values(self):
        for theta1, theta2, expected in [(np.pi / 2, np.pi / 2, (0.0, np.pi)),
                                         (np.pi / 3, np.pi / 3, (0.0, 2 * np.pi / 3)),
                                         (0.9, 0.0, (0.9, 0.9))]:
            low, high = class_product_interval(theta1, theta2)
            self.assertTrue(abs(low - expected[0]) < 1e-12)
            self.assertTrue(abs(high - expected[1]) < 1e-12)
        low_mc, high_mc = class_product_monte_carlo(np.pi / 2, np.pi / 2, n_samples=20000)
        self.assertTrue(low_mc >= -1e-9 and high_mc <= np.pi + 1e-9)
        self.assertTrue(low_mc < 0.1 and high_mc > np.pi - 0.1)
        self.assertRaises(ValueError, class_product_interval, 4.0, 0.0)

    def test_omega_abc_forbidden(self):
        for k in [1, 2, 3]:
            n = verlinde_multiplicities(k)
            for a in range(k + 1):
                for b in range(k + 1):
                    for c in range(k + 1):
                        if n[b, c, a] == 0:
                            self.assertRaises(ValueError, omega_abc, a, b, c, k)
                        else:
                            sample, form = omega_abc(a, b, c, k)
                            self.assertEqual(form.degree, 2)
        self.assertRaises(ValueError, FusionFiber, 1, 1, 1, 1)

    def test_fiber_sampler(self):
        for k, labels in [(1, (1, 1, 0)), (2, (1, 1, 2)), (3, (1, 1, 2)), (3, (2, 3, 1))]:
            fiber = FusionFiber(*labels, k=k)
            points = fiber.sample(100, seed=2)
            self.assertEqual(points.shape, (100, 8))
            self.assertTrue(np.max(fiber.residual(points)) <= 1e-10)
            self.assertTrue(np.max(np.abs(np.linalg.norm(points.reshape((100, 2, 4)), axis=-1) - 1.0)) < 1e-12)

    def test_omega_abc_invariant(self):
        rng = np.random.default_rng(6)
        sample, form = omega_abc(1, 1, 2, 3)
        for p in sample(20, seed=1):
            x = random_conjugation(rng)
            u, v = rng.normal(size=(2, 8))
            moved = form(conjugate_points(x, p), conjugate_points(x, u), conjugate_points(x, v))
            self.assertTrue(abs(moved - form(p, u, v)) < 1e-8)

class TestCensus(unittest.TestCase):

    def test_counts(self):
        self.assertEqual(jandl_census("SU2", 1)["count"], 2)
        self.assertEqual(jandl_census("SU2", 3, "minus_inv")["twist"], -1)
        self.assertEqual(jandl_census("SO3", 2)["count"], 4)
        self.assertEqual(jandl_census("PSO4n", 4)["total"], 16)
        self.assertEqual(count_involutions("SU2"), 2)
        self.assertEqual(involution_ids("SU2"), ["inv", "minus_inv"])

    def test_errors(self):
        self.assertRaises(ValueError, jandl_census, "SO3", 3)
        self.assertRaises(ValueError, jandl_census, "SU3", 1)
        self.assertRaises(ValueError, jandl_census, "SO3", 2, "minus_inv")
        self.assertRaises(ValueError, jandl_census, "SU2", 0)

    def test_cohomology(self):
        for m in [1, 2, 3]:
            self.assertEqual(cohomology_z2(2, m)["name"], "Z2")
            self.assertEqual(cohomology_z2(3, m)["invariants"], [2])
        self.assertEqual(cohomology_z2(0, 2)["order"], 2)
        self.assertRaises(ValueError, cohomology_z2, 5)
        self.assertTrue(census_consistency("SU2", 1, max_m=4)["passed"])


if __name__ == '__main__':
    unittest.main()
