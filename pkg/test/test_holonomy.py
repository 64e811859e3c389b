import unittest
import numpy as np
from fractions import Fraction

from gerbecalc.data import fixtures
from gerbecalc.fields.target import TorusTarget
from gerbecalc.fields.forms import volume_form, fourier_two_form, zero_form, constant_form, add_forms, \
    FourierConnection
from gerbecalc.fields.transport import tensor_line, direct_sum
from gerbecalc.fields.maps import SurfaceMap
from gerbecalc.fields.quadrature import pullback_integrate
from gerbecalc.gerbedata.branes import DBraneRecord, BiBraneRecord, full_world_volume, point_world_volume, \
    diagonal_world_volume, diagonal_bibrane
from gerbecalc.gerbedata.deligne import trivial_data, flat_torus_data, constant_jandl_data
from gerbecalc.holonomy.closed import holonomy_closed
from gerbecalc.holonomy.boundary import holonomy_boundary
from gerbecalc.holonomy.defect import split_map_from_functions, glue_split_map, holonomy_defect
from gerbecalc.holonomy.deligne import holonomy_deligne
from gerbecalc.holonomy.harness import independence_harness, lift_variants, subdivision_variants
from gerbecalc.holonomy.lifts import count_lifts, enumerate_lifts, LiftStructure
from gerbecalc.holonomy.result import HolonomyResult
from gerbecalc.holonomy.unoriented import holonomy_unoriented
from gerbecalc.mesh.refine import subdivide
from gerbecalc.mesh.base import reverse_orientation, components, disjoint_union
from gerbecalc.cli.suite import klein_jandl, wilson_defect_holonomy


class TestDeligneHolonomy(unittest.TestCase):

    def test_trivial(self):
        result = holonomy_deligne(trivial_data(fixtures.load_mesh("sphere_octa")))
        self.assertTrue(abs(result.value - 1.0) < 1e-12)
        self.assertTrue(result.check_unit_modulus())

    def test_discrete_torsion(self):
        surface = fixtures.load_mesh("torus_2f")
        for theta in [np.pi / 2, np.pi, 4 * np.pi / 3]:
            result = holonomy_deligne(flat_torus_data(surface, theta))
            self.assertTrue(abs(result.value - np.exp(1j * theta)) < 1e-12)

    def test_lift_structure_for_oriented_data(self):
        data = trivial_data(fixtures.load_mesh("sphere_tetra"))
        cover_data = constant_jandl_data(fixtures.load_mesh("rp2_min"))
        self.assertRaises(ValueError, holonomy_deligne, data, LiftStructure.default(cover_data.cover))

    def test_non_oriented(self):
        self.assertRaises(ValueError, holonomy_deligne, trivial_data(fixtures.load_mesh("klein_min")))


class TestLifts(unittest.TestCase):

    def test_count(self):
        self.assertEqual(count_lifts(constant_jandl_data(fixtures.load_mesh("rp2_min")).cover), 128)
        self.assertEqual(count_lifts(constant_jandl_data(fixtures.load_mesh("klein_min")).cover), 64)

    def test_enumerate_limit(self):
        cover = constant_jandl_data(fixtures.load_mesh("rp2_min")).cover
        self.assertEqual(len(list(enumerate_lifts(cover))), 128)
        self.assertRaises(ValueError, lambda: list(enumerate_lifts(cover, max_count=100)))

    def test_bad_sheets(self):
        self.assertRaises(ValueError, LiftStructure, [1, 0], [0, 0, 0], [0, 0])

    def test_constant_phase_independent(self):
        for name in ["rp2_min", "klein_min"]:
            data = constant_jandl_data(fixtures.load_mesh(name), phi=-1.0)
            report = independence_harness(lambda x: holonomy_deligne(data, unoriented_mode=x),
                                          lift_variants(data.cover), name=name, tolerance=1e-12)
            self.assertTrue(report.passed)
            self.assertTrue(abs(abs(report["reference"]) - 1.0) < 1e-12)


    def test_projective_plane_all_lifts(self):
        data = constant_jandl_data(fixtures.load_mesh("rp2_min"), phi=-1.0)
        values = np.array([holonomy_deligne(data, unoriented_mode=x).value for x in enumerate_lifts(data.cover)])
        self.assertEqual(len(values), 128)
        self.assertTrue(np.max(np.abs(values + 1.0)) < 1e-12)

class TestUnorientedHolonomy(unittest.TestCase):

    def test_klein(self):
        for scale in [0.3, 0.5]:
            data, equivariant_map = klein_jandl(scale)
            result = holonomy_unoriented(data, equivariant_map)
            self.assertTrue(abs(result.value - np.exp(1j * np.pi * scale)) < 1e-6)
            self.assertEqual(result.engine, "unoriented")

    def test_klein_subdivided(self):
        data, equivariant_map = klein_jandl(surface=subdivide(fixtures.load_mesh("klein_min")))
        result = holonomy_unoriented(data, equivariant_map)
        self.assertTrue(abs(result.value - np.exp(0.3j * np.pi)) < 1e-6)

    def test_klein_lifts(self):
        data, equivariant_map = klein_jandl()
        report = independence_harness(lambda x: holonomy_unoriented(data, equivariant_map, lifts=x),
                                      lift_variants(equivariant_map.cover), tolerance=1e-6)
        self.assertTrue(report.passed)
        self.assertEqual(report["n_variants"], 64)


class TestClosedHolonomy(unittest.TestCase):

    def test_volume(self):
        target = TorusTarget()
        fmap = SurfaceMap.from_function(fixtures.load_mesh("torus_fine"), target, lambda x: np.asarray(x))
        for scale, expected in [(3.0, 1.0), (0.25, 1j), (0.5, -1.0)]:
            result = holonomy_closed(volume_form(target, scale=scale), fmap)
            self.assertTrue(abs(result.value - expected) < 1e-6)

    def test_refinement(self):
        target = TorusTarget()
        omega = fourier_two_form(target, [{"m": [1, -1], "amp": 0.2, "phase": 0.4}], scale=0.3)
        fmap = SurfaceMap.from_function(fixtures.load_mesh("torus_fine"), target, lambda x: np.asarray(x))
        report = independence_harness(lambda m: holonomy_closed(omega, m), subdivision_variants(fmap, levels=1),
                                      tolerance=1e-5)
        self.assertTrue(report.passed)

    def test_orientation_reversal(self):
        target = TorusTarget()
        omega = fourier_two_form(target, [{"m": [1, 2], "amp": 0.3, "phase": 0.7}], scale=0.37)
        fmap = SurfaceMap.from_function(fixtures.load_mesh("torus_fine"), target, lambda x: np.asarray(x))
        reversed_map = fmap.with_surface(reverse_orientation(fmap.surface))
        value = holonomy_closed(omega, fmap).value
        self.assertTrue(abs(holonomy_closed(omega, reversed_map).value - np.conj(value)) < 1e-9)

    def test_multiplicative(self):
        target = TorusTarget()
        first = fourier_two_form(target, [{"m": [1, -1], "amp": 0.2, "phase": 0.4}], scale=0.3)
        second = volume_form(target, scale=0.45)
        fmap = SurfaceMap.from_function(fixtures.load_mesh("torus_fine"), target, lambda x: np.asarray(x))
        product = holonomy_closed(first, fmap).value * holonomy_closed(second, fmap).value
        self.assertTrue(abs(holonomy_closed(add_forms(first, second), fmap).value - product) < 1e-9)

    def test_disjoint_union(self):
        target = TorusTarget()
        omega = fourier_two_form(target, [{"m": [0, 1], "amp": 0.1, "phase": 0.2}], scale=0.6)
        a = SurfaceMap.from_function(fixtures.torus_grid(3, 3), target, lambda x: np.asarray(x))
        b = SurfaceMap.from_function(fixtures.torus_grid(4, 4), target,
                                     lambda x: np.array([[2.0, 1.0], [0.0, 1.0]]) @ np.asarray(x))
        union = disjoint_union([a.surface, b.surface])
        self.assertEqual(len(components(union)), 2)
        self.assertEqual(union.euler_characteristic, 0)
        fmap = SurfaceMap(union, target, np.concatenate([a.corners, b.corners]))
        expected = holonomy_closed(omega, a).value * holonomy_closed(omega, b).value
        self.assertTrue(abs(holonomy_closed(omega, fmap).value - expected) < 1e-9)

    def test_degree(self):
        target = TorusTarget()
        surface = fixtures.load_mesh("torus_fine")
        c = 0.13
        for matrix, d in [([[2.0, 1.0], [0.0, 1.0]], 2), ([[3.0, 0.0], [1.0, 1.0]], 3),
                          ([[0.0, 1.0], [1.0, 0.0]], -1)]:
            fmap = SurfaceMap.from_function(surface, target, lambda x, m=np.array(matrix): m @ np.asarray(x))
            result = holonomy_closed(volume_form(target, scale=c), fmap)
            self.assertTrue(abs(result.value - np.exp(2j * np.pi * d * c)) < 1e-6)

    def test_requires_closed(self):
        target = TorusTarget()
        fmap = SurfaceMap.from_function(fixtures.hexagon_disk(scale=0.1), target, lambda x: np.asarray(x))
        self.assertRaises(ValueError, holonomy_closed, volume_form(target), fmap)


class TestBoundaryHolonomy(unittest.TestCase):

    def setUp(self):
        self.target = TorusTarget()
        disk = subdivide(fixtures.hexagon_disk(scale=0.05, center=(0.5, 0.5)))
        self.fmap = SurfaceMap.from_function(disk, self.target, lambda x: np.asarray(x))

    def test_trivial_module(self):
        rho = volume_form(self.target, scale=2.0)
        brane = DBraneRecord(full_world_volume(self.target), module=zero_form(self.target, 1))
        result = holonomy_boundary(rho, brane, self.fmap)
        expected = np.exp(2j * np.pi * pullback_integrate(rho, self.fmap))
        self.assertTrue(abs(result.value - expected) < 1e-9)

    def test_stokes(self):
        rng = np.random.default_rng(8)
        disk = subdivide(subdivide(fixtures.hexagon_disk(scale=0.05, center=(0.5, 0.5))))
        fmap = SurfaceMap.from_function(disk, self.target, lambda x: np.asarray(x))
        rho = fourier_two_form(self.target, [{"m": [1, 0], "amp": 0.4, "phase": 0.3}], scale=0.2)
        module = FourierConnection.random(self.target, rng, max_mode=1).one_form()
        brane = DBraneRecord(full_world_volume(self.target), module=module)
        reference = holonomy_boundary(rho, brane, fmap).value
        for _ in range(5):
            line = FourierConnection.random(self.target, rng, max_mode=1)
            changed = DBraneRecord(brane.world_volume, brane.omega, tensor_line(module, line.one_form(), -1))
            value = holonomy_boundary(add_forms(rho, line.curvature()), changed, fmap).value
            self.assertTrue(abs(value - reference) < 1e-6)

    def test_direct_sum(self):
        rho = volume_form(self.target, scale=2.0)
        module = direct_sum(constant_form(self.target, [0.3, 0.1], 1), constant_form(self.target, [-0.2, 0.5], 1))
        result = holonomy_boundary(rho, DBraneRecord(full_world_volume(self.target), module=module), self.fmap)
        expected = 2.0 * np.exp(2j * np.pi * pullback_integrate(rho, self.fmap))
        self.assertTrue(abs(result.value - expected) < 1e-9)
        self.assertEqual(result.diagnostics["rank"], 2)

    def test_rank_zero(self):
        brane = DBraneRecord(full_world_volume(self.target))
        self.assertRaises(ValueError, holonomy_boundary, volume_form(self.target), brane, self.fmap)

    def test_off_brane(self):
        brane = DBraneRecord(point_world_volume(self.target, [0.0, 0.0]), module=zero_form(self.target, 1))
        self.assertRaises(ValueError, holonomy_boundary, volume_form(self.target), brane, self.fmap)


class TestDefectHolonomy(unittest.TestCase):

    def test_invisible_defect(self):
        target = TorusTarget()
        omega = fourier_two_form(target, [{"m": [1, 1], "amp": 0.25, "phase": 0.1}], scale=0.41)
        split = split_map_from_functions(fixtures.split_torus(), target, lambda x: np.asarray(x))
        defect = holonomy_defect(omega, omega, diagonal_bibrane(target), split)
        closed = holonomy_closed(omega, glue_split_map(split))
        self.assertTrue(abs(defect.value - closed.value) < 1e-6)

    def test_wilson_factor(self):
        for u, a, w in [(Fraction(1, 4), Fraction(1, 3), 1), (Fraction(0), Fraction(3, 4), -1)]:
            result = wilson_defect_holonomy(u, a, w)
            self.assertTrue(abs(result.value - np.exp(2j * np.pi * float(a) * w)) < 1e-6)

    def test_rank_zero_bibrane(self):
        target = TorusTarget()
        split = split_map_from_functions(fixtures.split_torus(), target, lambda x: np.asarray(x))
        bibrane = BiBraneRecord(diagonal_world_volume(target))
        omega = volume_form(target)
        self.assertRaises(ValueError, holonomy_defect, omega, omega, bibrane, split)


class TestHarness(unittest.TestCase):

    def test_spread(self):
        report = independence_harness(lambda x: x, [1.0, 1.0 + 1e-3, 1.0], tolerance=1e-6)
        self.assertFalse(report.passed)
        self.assertEqual(report["failing"], [1])
        self.assertTrue(abs(report["spread"] - 1e-3) < 1e-12)

    def test_result(self):
        result = HolonomyResult(1j, "test")
        self.assertTrue(abs(result.angle - np.pi / 2) < 1e-12)
        self.assertEqual(result.to_dict()["value"], [0.0, 1.0])
        self.assertTrue(result.distance(-1j) - 2.0 < 1e-12)


if __name__ == '__main__':
    unittest.main()
