import unittest
import numpy as np

from gerbecalc.data.fixtures import torus_grid, hexagon_disk, octahedron_sphere
from gerbecalc.mesh.refine import subdivide
from gerbecalc.fields.target import TorusTarget, CircleTarget, SU2Target, ProductTarget, make_target, \
    low_discrepancy_points
from gerbecalc.fields.forms import FormOracle, FourierConnection, volume_form, constant_form, fourier_two_form, \
    wedge, add_forms, scale_form, alternation_residual
from gerbecalc.fields.exterior import exterior_derivative_fd, exterior_derivative
from gerbecalc.fields.maps import SurfaceMap, Loop, map_from_dict
from gerbecalc.fields.quadrature import pullback_integrate
from gerbecalc.fields.serial import deserialize
from gerbecalc.fields.transport import line_holonomy, tensor_line, linear_gauge_field, holonomy_trace, direct_sum, \
    gauss_legendre_line_integral, linear_transport
from gerbecalc.ops.quaternion import slerp
from gerbecalc.wzw.forms import maurer_cartan_form, maurer_cartan_curvature, sphere_area_form


class TestTargets(unittest.TestCase):

    def test_make_target(self):
        self.assertEqual(make_target({"kind": "circle", "radius": 2.0}), CircleTarget(radius=2.0))
        self.assertEqual(make_target("torus"), TorusTarget())
        self.assertEqual(make_target({"kind": "product", "factors": ["su2", "su2"]}),
                         ProductTarget(SU2Target(), SU2Target()))
        self.assertRaises(ValueError, make_target, {"kind": "sphere"})
        self.assertRaises(TypeError, make_target, 3)

    def test_torus_distance(self):
        target = TorusTarget()
        self.assertTrue(abs(target.distance(np.array([0.95, 0.0]), np.array([0.05, 0.0])) - 0.1) < 1e-12)

    def test_low_discrepancy_su2(self):
        points = low_discrepancy_points(SU2Target(), 50, seed=1)
        self.assertEqual(points.shape, (50, 4))
        self.assertTrue(np.max(np.abs(np.linalg.norm(points, axis=-1) - 1.0)) < 1e-12)


class TestForms(unittest.TestCase):

    def test_wedge(self):
        target = TorusTarget()
        dx, dy = constant_form(target, [1, 0], 1), constant_form(target, [0, 1], 1)
        form = wedge(dx, dy)
        self.assertTrue(abs(form(np.zeros(2), [1.0, 0.0], [0.0, 1.0]) - 1.0) < 1e-12)
        self.assertTrue(abs(form(np.zeros(2), [0.0, 1.0], [1.0, 0.0]) + 1.0) < 1e-12)

    def test_algebra(self):
        target = TorusTarget()
        vol = volume_form(target, scale=2.0)
        form = add_forms(vol, scale_form(vol, -0.5))
        self.assertTrue(abs(form(np.zeros(2), [1.0, 0.0], [0.0, 1.0]) - 1.0) < 1e-12)
        self.assertRaises(ValueError, add_forms, vol, constant_form(target, [1, 0], 1))

    def test_wrong_arguments(self):
        vol = volume_form(TorusTarget())
        self.assertRaises(ValueError, vol, np.zeros(2), [1.0, 0.0])
        self.assertRaises(ValueError, FormOracle, 4, lambda p: 0.0, TorusTarget())

    def test_alternation(self):
        form = fourier_two_form(TorusTarget(), [{"m": [1, 2], "amp": 0.3, "phase": 0.2}], scale=0.5)
        self.assertTrue(alternation_residual(form, np.random.default_rng(0)) < 1e-12)

    def test_fourier_curvature(self):
        target = TorusTarget((1.0, 2.0))
        rng = np.random.default_rng(3)
        connection = FourierConnection.random(target, rng, max_mode=1)
        curvature = connection.curvature()
        one_form = connection.one_form()
        for p in target.random_points(10, rng):
            x, y = rng.normal(size=(2, 2))
            result = exterior_derivative_fd(one_form, p, x, y)
            expected = curvature(p, x, y)
            self.assertTrue(np.max(np.abs(result - expected)) < 1e-4)

    def test_constant_curl(self):
        target = TorusTarget()
        form = constant_form(target, [0.3, -0.7], 1)
        rng = np.random.default_rng(9)
        for p in target.random_points(5, rng):
            x, y = rng.normal(size=(2, 2))
            self.assertTrue(abs(exterior_derivative_fd(form, p, x, y)) < 1e-6)

    def test_d_squared(self):
        rng = np.random.default_rng(10)
        torus = TorusTarget((1.0, 2.0))
        function = FormOracle(0, lambda p: np.sin(2 * np.pi * p[0]) * np.cos(np.pi * p[1]), torus, name="f")
        connection = FourierConnection.random(torus, rng, max_mode=1).one_form()
        for p in torus.random_points(5, rng):
            x, y, z = rng.normal(size=(3, 2))
            self.assertTrue(abs(exterior_derivative_fd(exterior_derivative(function), p, x, y)) < 1e-3)
            self.assertTrue(abs(exterior_derivative_fd(exterior_derivative(connection), p, x, y, z)) < 1e-3)
        su2 = SU2Target()
        for component in [0, 1, 2]:
            form = maurer_cartan_form(component)
            curvature = maurer_cartan_curvature(component)
            for g in low_discrepancy_points(su2, 5, seed=component):
                x, y, z = su2.random_tangents(g, 3, rng)
                self.assertTrue(abs(exterior_derivative_fd(form, g, x, y) - curvature(g, x, y)) < 1e-5)
                self.assertTrue(abs(exterior_derivative_fd(exterior_derivative(form), g, x, y, z)) < 1e-3)

    def test_deserialize(self):
        form = deserialize({"class_name": "torus.vol", "config": {"scale": 3.0}})
        self.assertTrue(abs(form(np.zeros(2), [1.0, 0.0], [0.0, 1.0]) - 3.0) < 1e-12)
        self.assertEqual(form.degree, 2)
        zero = deserialize({"class_name": "zero", "config": {"degree": 1, "target": "torus"}})
        self.assertEqual(zero.degree, 1)
        self.assertEqual(zero.target, TorusTarget())
        self.assertRaises(ValueError, deserialize, {"class_name": "torus.unknown"})
        self.assertRaises(TypeError, deserialize, 3)


class TestIntegration(unittest.TestCase):

    def test_volume_integral(self):
        target = TorusTarget()
        surface = torus_grid(4, 4)
        for matrix, expected in [(np.eye(2), 1.0), (np.array([[2.0, 1.0], [0.0, 1.0]]), 2.0),
                                 (np.array([[1.0, 0.0], [0.0, -1.0]]), -1.0)]:
            fmap = SurfaceMap.from_function(surface, target, lambda x, m=matrix: m @ np.asarray(x))
            result = pullback_integrate(volume_form(target, scale=3.0), fmap)
            self.assertTrue(np.max(np.abs(result - 3.0 * expected)) < 1e-6)

    def test_seam_mismatch(self):
        surface = torus_grid(3, 3)
        target = TorusTarget()
        fmap = SurfaceMap.from_function(surface, target, lambda x: np.asarray(x))
        corners = fmap.corners.copy()
        corners[0] += 0.1
        self.assertRaises(ValueError, SurfaceMap, surface, target, corners)

    def test_affine_map_dict(self):
        surface = torus_grid(4, 4)
        fmap = map_from_dict(surface, {"target": "torus", "matrix": [[2.0, 1.0], [0.0, 1.0]], "offset": [0.3, 0.1]})
        self.assertTrue(abs(pullback_integrate(volume_form(TorusTarget()), fmap) - 2.0) < 1e-6)
        self.assertRaises(ValueError, map_from_dict, surface, {"matrix": [[1.0, 0.0], [0.0, 1.0]]})
        self.assertRaises(ValueError, map_from_dict, surface, {"target": "torus"})
        self.assertRaises(ValueError, map_from_dict, surface, {"target": "torus", "matrix": [[1.0, 0.0], [0.0, 1.0]],
                                                               "offset": [0.0, 0.0, 0.0]})

    def _octahedron_map(self):
        images = [[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]
        return SurfaceMap.from_vertex_images(octahedron_sphere(), SU2Target(), np.array(images, dtype="float"))

    def test_su2_midpoint(self):
        fmap = self._octahedron_map()
        for face in range(fmap.surface.n_faces):
            corners = fmap.corners[face]
            self.assertTrue(np.max(np.abs(fmap.interpolate(face, [1.0, 0.0, 0.0]) - corners[0])) < 1e-12)
            middle = fmap.interpolate(face, [0.5, 0.5, 0.0])
            self.assertTrue(np.max(np.abs(middle - slerp(corners[0], corners[1], 0.5))) < 1e-12)
            self.assertTrue(abs(np.linalg.norm(middle) - 1.0) < 1e-12)

    def test_circle_winding_midpoint(self):
        surface = torus_grid(3, 3)
        target = CircleTarget(radius=1.0)
        period = target.period
        fmap = SurfaceMap.from_function(surface, target, lambda x: np.array([3.0 * period * x[0]]))
        windings = np.zeros((surface.n_edges, 1), dtype="int")
        for e, sides in enumerate(surface.edge_sides):
            f, j = sides[0]
            step = fmap.corners[f, (j + 1) % 3] - fmap.corners[f, j]
            windings[e] = int(np.rint(surface.side_sign[f, j] * step[0] / period))
        declared = SurfaceMap.from_vertex_images(surface, target, np.zeros(surface.n_vertices), windings)
        self.assertTrue(np.max(np.abs(windings)) == 1)
        for face in [0, 1, 7]:
            for j in range(3):
                bary = np.zeros(3)
                bary[j] = bary[(j + 1) % 3] = 0.5
                middle = declared.interpolate(face, bary)
                self.assertTrue(target.distance(middle, fmap.interpolate(face, bary)) < 1e-9)
        self.assertTrue(target.distance(declared.interpolate(0, [1.0, 0.0, 0.0]), np.zeros(1)) < 1e-12)
        self.assertTrue(target.distance(declared.interpolate(0, [0.5, 0.5, 0.0]), np.array([0.5 * period])) < 1e-9)

    def test_sphere_area(self):
        fmap = self._octahedron_map()
        errors = []
        for _ in range(3):
            errors.append(abs(pullback_integrate(sphere_area_form(), fmap) - 1.0))
            fmap = fmap.refine(subdivide(fmap.surface))
        self.assertTrue(errors[-1] < 1e-3)
        for coarse, fine in zip(errors[:-1], errors[1:]):
            if coarse > 1e-8:
                self.assertTrue(fine <= 0.25 * coarse)

    def test_missing_coordinates(self):
        from gerbecalc.data.fixtures import tetrahedron_sphere
        self.assertRaises(ValueError, SurfaceMap.from_function, tetrahedron_sphere(), TorusTarget(), lambda x: x)


class TestTransport(unittest.TestCase):

    def _disk_loop(self):
        disk = subdivide(subdivide(hexagon_disk(scale=0.05, center=(0.5, 0.5))))
        fmap = SurfaceMap.from_function(disk, TorusTarget(), lambda x: np.asarray(x))
        return fmap, Loop.from_circle(fmap, disk.boundary_circles[0])

    def test_stokes(self):
        fmap, loop = self._disk_loop()
        connection = FourierConnection.random(fmap.target, np.random.default_rng(5), max_mode=1)
        boundary = gauss_legendre_line_integral(connection.one_form(), loop)
        interior = pullback_integrate(connection.curvature(), fmap)
        self.assertTrue(np.max(np.abs(boundary - interior)) < 1e-6)

    def test_constant_form_exact(self):
        _, loop = self._disk_loop()
        hol = line_holonomy(constant_form(TorusTarget(), [0.3, -0.7], 1), loop)
        self.assertTrue(np.max(np.abs(hol - 1.0)) < 1e-10)

    def test_tensor_line(self):
        fmap, loop = self._disk_loop()
        rng = np.random.default_rng(7)
        a = FourierConnection.random(fmap.target, rng, max_mode=1).one_form()
        line = FourierConnection.random(fmap.target, rng, max_mode=1).one_form()
        result = line_holonomy(tensor_line(a, line, -1), loop)
        expected = line_holonomy(a, loop) / line_holonomy(line, loop)
        self.assertTrue(np.max(np.abs(result - expected)) < 1e-10)

    def test_direct_sum_trace(self):
        fmap, loop = self._disk_loop()
        rng = np.random.default_rng(11)
        a = FourierConnection.random(fmap.target, rng, max_mode=1).one_form()
        b = FourierConnection.random(fmap.target, rng, max_mode=1).one_form()
        result = holonomy_trace(direct_sum(a, b), loop)
        expected = line_holonomy(a, loop) + line_holonomy(b, loop)
        self.assertTrue(np.max(np.abs(result - expected)) < 1e-10)

    def test_path_ordered_unitary(self):
        fmap, loop = self._disk_loop()
        sigma = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]]])
        hol = line_holonomy(linear_gauge_field(fmap.target, 0.5 * sigma), loop)
        self.assertTrue(np.max(np.abs(hol.dot(np.conj(hol.T)) - np.eye(2))) < 1e-6)
        self.assertTrue(np.max(np.abs(hol - linear_transport(0.5 * sigma, loop))) < 1e-6)

    def test_non_hermitian(self):
        self.assertRaises(ValueError, linear_gauge_field, TorusTarget(), np.array([[[0, 1], [0, 0]]] * 2))


if __name__ == '__main__':
    unittest.main()
