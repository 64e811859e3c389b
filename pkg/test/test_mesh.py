import unittest
import numpy as np

from gerbecalc.mesh.base import build_surface, surface_from_dict, reverse_orientation, components
from gerbecalc.mesh.refine import subdivide, cut_along_defect
from gerbecalc.mesh.cover import orientation_double_cover
from gerbecalc.data.fixtures import tetrahedron_sphere, octahedron_sphere, minimal_torus, minimal_projective_plane, \
    minimal_klein_bottle, torus_grid, split_torus, hexagon_disk


class TestBuildSurface(unittest.TestCase):

    def test_sphere(self):
        surface = tetrahedron_sphere()
        self.assertEqual(surface.n_edges, 6)
        self.assertEqual(surface.euler_characteristic, 2)
        self.assertTrue(surface.is_oriented)
        self.assertTrue(surface.is_closed)
        self.assertEqual(len(components(surface)), 1)
        self.assertEqual(octahedron_sphere().euler_characteristic, 2)

    def test_minimal_meshes(self):
        torus = minimal_torus()
        self.assertEqual((torus.n_vertices, torus.n_edges, torus.n_faces), (1, 3, 2))
        self.assertTrue(torus.is_oriented)
        for surface, chi in [(minimal_projective_plane(), 1), (minimal_klein_bottle(), 0)]:
            self.assertEqual(surface.euler_characteristic, chi)
            self.assertFalse(surface.is_orientable)
            self.assertTrue(surface.is_closed)

    def test_grid_torus(self):
        surface = torus_grid(4, 5)
        self.assertEqual(surface.n_faces, 40)
        self.assertEqual(surface.euler_characteristic, 0)
        self.assertTrue(surface.is_oriented)
        self.assertRaises(ValueError, torus_grid, 2, 4)

    def test_declared_euler_characteristic(self):
        faces = [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]
        self.assertRaises(ValueError, build_surface, faces, euler_characteristic=0)

    def test_non_manifold_edge(self):
        faces = [[0, 1, 2], [1, 0, 3], [0, 1, 4]]
        self.assertRaises(ValueError, build_surface, faces)

    def test_unused_vertex(self):
        self.assertRaises(ValueError, build_surface, [[0, 1, 2]], n_vertices=4)

    def test_declared_oriented_non_orientable(self):
        self.assertRaises(ValueError, build_surface, [[0, 1, 0], [0, 0, 1]], n_vertices=2, oriented=True,
                          gluings=[[0, 0, 1, 1, 0], [0, 1, 1, 2, 0], [0, 2, 1, 0, 1]], infer_gluings=False)

    def test_bad_gluing(self):
        self.assertRaises(ValueError, build_surface, [[0, 1, 2], [0, 2, 3]], gluings=[[0, 0, 1, 0, 1]],
                          infer_gluings=False)

    def test_dict_round_trip(self):
        surface = minimal_projective_plane()
        loaded = surface_from_dict(surface.to_dict())
        self.assertEqual(loaded.n_edges, surface.n_edges)
        self.assertEqual(loaded.euler_characteristic, 1)
        self.assertTrue(np.all(loaded.faces == surface.faces))
        self.assertTrue(np.max(np.abs(loaded.metadata["corner_coordinates"] -
                                      surface.metadata["corner_coordinates"])) < 1e-12)


class TestBoundary(unittest.TestCase):

    def test_disk(self):
        disk = hexagon_disk()
        self.assertEqual(disk.euler_characteristic, 1)
        self.assertEqual(len(disk.boundary_circles), 1)
        circle = disk.boundary_circles[0]
        self.assertEqual(len(circle), 6)
        self.assertEqual(disk.boundary_orientation_sign(circle), 1)

    def test_reverse_orientation(self):
        disk = hexagon_disk()
        reverse = reverse_orientation(disk)
        self.assertTrue(np.all(reverse.flags == -disk.flags))
        self.assertEqual(reverse.boundary_orientation_sign(reverse.boundary_circles[0]), 1)
        self.assertEqual(disk.boundary_circles[0].reversed().reversed(), disk.boundary_circles[0])


class TestSubdivide(unittest.TestCase):

    def test_counts(self):
        for surface in [tetrahedron_sphere(), minimal_torus(), minimal_projective_plane(), hexagon_disk()]:
            refined = subdivide(surface)
            self.assertEqual(refined.n_faces, 6 * surface.n_faces)
            self.assertEqual(refined.euler_characteristic, surface.euler_characteristic)
            self.assertEqual(refined.orientability, surface.orientability)

    def test_boundary_refined(self):
        refined = subdivide(hexagon_disk())
        self.assertEqual(len(refined.boundary_circles), 1)
        self.assertEqual(len(refined.boundary_circles[0]), 12)

    def test_corner_coordinates(self):
        surface = minimal_klein_bottle()
        refined = subdivide(surface)
        coordinates = refined.metadata["corner_coordinates"]
        self.assertEqual(coordinates.shape, (12, 3, 2))
        # Sub-faces of face 0 share its barycenter.
        self.assertTrue(np.max(np.abs(coordinates[0, 2] - np.mean(surface.metadata["corner_coordinates"][0],
                                                                  axis=0))) < 1e-12)


class TestCutAndCover(unittest.TestCase):

    def test_cut_split_torus(self):
        surface = split_torus(4, 4)
        self.assertEqual(len(surface.defect_circles), 1)
        self.assertFalse(surface.defect_separates[0])
        cut = cut_along_defect(surface)
        self.assertFalse(cut.separates)
        self.assertEqual(len(cut.surface.boundary_circles), 2)
        self.assertEqual(cut.surface.boundary_orientation_sign(cut.plus), 1)
        self.assertEqual(cut.surface.boundary_orientation_sign(cut.minus), -1)
        self.assertEqual(cut.surface.n_vertices, surface.n_vertices + 4)

    def test_cut_requires_defect(self):
        self.assertRaises(ValueError, cut_along_defect, minimal_torus())

    def test_cover_projective_plane(self):
        cover = orientation_double_cover(minimal_projective_plane())
        self.assertTrue(cover.check())
        self.assertTrue(cover.total.is_oriented)
        self.assertEqual(cover.total.euler_characteristic, 2)
        self.assertEqual(cover.n_components(), 1)

    def test_cover_oriented(self):
        cover = orientation_double_cover(minimal_torus())
        self.assertTrue(cover.check())
        self.assertEqual(cover.n_components(), 2)

    def test_cover_bounded(self):
        self.assertRaises(ValueError, orientation_double_cover, hexagon_disk())


if __name__ == '__main__':
    unittest.main()
