import os
import json
import tempfile
import unittest
import numpy as np

from gerbecalc.data.fixtures import tetrahedron_sphere, torus_grid, minimal_projective_plane, minimal_klein_bottle
from gerbecalc.fields.target import TorusTarget, SU2Target
from gerbecalc.fields.forms import constant_form, volume_form, zero_form
from gerbecalc.gerbedata.report import ValidationReport, merge_reports
from gerbecalc.gerbedata.deligne import DeligneSurfaceData, DeligneGauge, trivial_data, flat_torus_data, \
    random_gauge, gauge_transform, constant_jandl_data, jandl_gauge_transform, random_jandl_gauge, validate_cocycle
from gerbecalc.gerbedata.jandl import JandlTrivialData, reflection, make_involution, validate_jandl, \
    check_involution_sign, pullback_jandl
from gerbecalc.gerbedata.branes import TrivialGerbe, DBraneRecord, BiBraneRecord, full_world_volume, \
    point_world_volume, diagonal_world_volume, diagonal_bibrane
from gerbecalc.holonomy.deligne import holonomy_deligne


def klein_data(scale=0.3, phi=1.0):
    target = TorusTarget()
    involution = reflection(target, axes=[1], shift=[0.5, 0.0])
    return JandlTrivialData(constant_form(target, [0, 1], 2, scale=scale, name="torus.dxdy"), phi=phi,
                            involution=involution, name="klein")


class TestValidationReport(unittest.TestCase):

    def test_from_residuals(self):
        report = ValidationReport.from_residuals("test", [1e-12, 3e-5, np.nan], 1e-4)
        self.assertFalse(report.passed)
        self.assertEqual(report["failing"], [2])
        self.assertEqual(report["max_residual"], float("inf"))
        self.assertTrue(ValidationReport.from_residuals("empty", [], 1e-4).passed)

    def test_merge(self):
        good = ValidationReport.from_residuals("good", [0.0], 1e-4)
        bad = ValidationReport.from_residuals("bad", [1.0], 1e-4)
        merged = merge_reports("both", [good, bad])
        self.assertFalse(merged.passed)
        self.assertEqual(merged["failing"], [["bad", 0]])

    def test_save(self):
        report = ValidationReport.from_residuals("test", [1e-5], 1e-4, reference=1j)
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "report.json")
            report.save(path)
            with open(path, "r") as file:
                loaded = json.load(file)
        self.assertTrue(loaded["passed"])
        self.assertEqual(loaded["reference"], [0.0, 1.0])
        self.assertEqual(report.to_json(), ValidationReport.from_residuals("test", [1e-5], 1e-4,
                                                                           reference=1j).to_json())


class TestDeligneData(unittest.TestCase):

    def test_trivial(self):
        data = trivial_data(tetrahedron_sphere())
        self.assertTrue(validate_cocycle(data).passed)
        self.assertTrue(np.max(np.abs(holonomy_deligne(data).value - 1.0)) < 1e-12)

    def test_shapes(self):
        surface = tetrahedron_sphere()
        self.assertRaises(ValueError, DeligneSurfaceData, surface, np.zeros(4), np.zeros(4), np.zeros(5),
                          np.ones(4))

    def test_corrupted_phase(self):
        data = trivial_data(tetrahedron_sphere())
        data.g[0] = 2.0
        report = validate_cocycle(data)
        self.assertFalse(report.passed)
        self.assertIn(["vertex", 0], report["failing"])
        self.assertRaises(ValueError, holonomy_deligne, data)

    def test_gauge_invariance(self):
        rng = np.random.default_rng(0)
        theta = 0.7
        data = flat_torus_data(torus_grid(3, 3), theta)
        for _ in range(20):
            transformed = gauge_transform(data, random_gauge(data, rng))
            self.assertTrue(validate_cocycle(transformed).passed)
            result = holonomy_deligne(transformed).value
            self.assertTrue(np.max(np.abs(result - np.exp(1j * theta))) < 1e-12)

    def test_gauge_inverse(self):
        rng = np.random.default_rng(1)
        data = flat_torus_data(torus_grid(3, 3), 1.1)
        gauge = random_gauge(data, rng)
        back = gauge_transform(gauge_transform(data, gauge), gauge.inverse())
        self.assertTrue(np.max(np.abs(back.b - data.b)) < 1e-12)
        self.assertTrue(np.max(np.abs(back.a - data.a)) < 1e-12)
        self.assertTrue(np.max(np.abs(back.g - data.g)) < 1e-12)

    def test_zero_gauge(self):
        data = flat_torus_data(torus_grid(3, 3), 0.9)
        data = gauge_transform(data, random_gauge(data, np.random.default_rng(2)))
        same = gauge_transform(data, DeligneGauge.zeros(data))
        self.assertTrue(np.all(same.b == data.b))
        self.assertTrue(np.all(same.a == data.a))
        self.assertTrue(np.all(same.g == data.g))

    def test_phase_gauge(self):
        theta = 0.7
        data = flat_torus_data(torus_grid(3, 3), theta)
        gauge = random_gauge(data, np.random.default_rng(3), edges=False)
        self.assertTrue(np.all(gauge.lam == 0.0))
        transformed = gauge_transform(data, gauge)
        self.assertTrue(np.max(np.abs(transformed.b - data.b)) < 1e-15)
        self.assertTrue(np.max(np.abs(transformed.a - data.a)) < 1e-15)
        self.assertTrue(np.max(np.abs(transformed.g - data.g)) > 1e-3)
        self.assertTrue(validate_cocycle(transformed).passed)
        self.assertTrue(np.max(np.abs(holonomy_deligne(transformed).value - np.exp(1j * theta))) < 1e-12)

    def test_edge_gauge(self):
        data = flat_torus_data(torus_grid(3, 3), 0.7)
        transformed = gauge_transform(data, random_gauge(data, np.random.default_rng(4), phases=False))
        self.assertTrue(np.all(transformed.g == data.g))
        self.assertTrue(np.max(np.abs(transformed.b - data.b)) > 1e-3)

    def test_bad_gauge(self):
        data = flat_torus_data(torus_grid(3, 3), 0.7)
        n_e = data.surface.n_edges
        self.assertRaises(ValueError, DeligneGauge, np.zeros((n_e, 2)), 2.0 * np.ones(n_e))
        self.assertRaises(ValueError, DeligneGauge, np.zeros((n_e, 2)), np.ones(n_e - 1))
        trivial = trivial_data(tetrahedron_sphere())
        chi = np.ones(trivial.surface.n_edges, dtype="complex")
        chi[0] = 1j
        self.assertRaises(ValueError, gauge_transform, trivial, DeligneGauge(np.zeros((len(chi), 1)), chi))
        self.assertRaises(ValueError, gauge_transform, data, DeligneGauge(np.zeros((n_e, 3)), np.ones(n_e)))

    def test_dict_round_trip(self):
        data = flat_torus_data(torus_grid(3, 3), 0.4)
        loaded = DeligneSurfaceData.from_dict(json.loads(json.dumps(data.to_dict())))
        self.assertTrue(np.max(np.abs(holonomy_deligne(loaded).value - np.exp(0.4j))) < 1e-12)


class TestJandlSurfaceData(unittest.TestCase):

    def test_constant(self):
        for surface in [minimal_projective_plane(), minimal_klein_bottle()]:
            data = constant_jandl_data(surface, phi=-1.0)
            self.assertTrue(validate_cocycle(data).passed)
        self.assertRaises(ValueError, constant_jandl_data, minimal_projective_plane(), 1j)

    def test_gauge(self):
        rng = np.random.default_rng(2)
        data = constant_jandl_data(minimal_projective_plane(), phi=1.0)
        reference = holonomy_deligne(data).value
        for _ in range(10):
            p, lam = random_jandl_gauge(data, rng)
            transformed = jandl_gauge_transform(data, p=p, lam=lam)
            self.assertTrue(validate_cocycle(transformed).passed)
            self.assertTrue(np.max(np.abs(holonomy_deligne(transformed).value - reference)) < 1e-10)

    def test_gauge_shapes(self):
        data = constant_jandl_data(minimal_projective_plane())
        self.assertRaises(ValueError, jandl_gauge_transform, data, np.zeros(2))


class TestJandlData(unittest.TestCase):

    def test_klein(self):
        report = validate_jandl(klein_data(), n_samples=50)
        self.assertTrue(report.passed)

    def test_broken_phase(self):
        report = validate_jandl(klein_data(phi=1j), n_samples=20)
        self.assertFalse(report.passed)
        self.assertTrue(all(name == "phase" for name, _ in report["failing"]))

    def test_pullback(self):
        self.assertTrue(validate_jandl(pullback_jandl(klein_data()), n_samples=50).passed)

    def test_involution_sign(self):
        k = reflection(TorusTarget(), axes=[1], shift=[0.5, 0.0])
        self.assertTrue(check_involution_sign(volume_form(TorusTarget()), k).passed)
        shift = reflection(TorusTarget(), axes=[], shift=[0.5, 0.0])
        self.assertFalse(check_involution_sign(volume_form(TorusTarget()), shift).passed)
        self.assertTrue(k.residual() < 1e-12)

    def test_make_involution(self):
        k = make_involution({"name": "reflection", "target": {"kind": "torus", "periods": [1.0, 1.0]},
                             "axes": [1], "shift": [0.5, 0.0]})
        self.assertTrue(np.max(np.abs(k(np.array([0.1, 0.2])) - np.array([0.6, -0.2]))) < 1e-12)
        self.assertEqual(make_involution("minus_inv").target, SU2Target())
        self.assertRaises(TypeError, make_involution, {"kind": "reflection"})
        self.assertRaises(ValueError, make_involution, {"name": "rotation"})
        self.assertRaises(ValueError, reflection, TorusTarget(), [1], [0.3, 0.0])

    def test_target_mismatch(self):
        k = reflection(TorusTarget((1.0, 2.0)), axes=[1])
        self.assertRaises(ValueError, JandlTrivialData, volume_form(TorusTarget()), involution=k)


class TestBranes(unittest.TestCase):

    def test_trivial_gerbe(self):
        self.assertRaises(ValueError, TrivialGerbe, constant_form(TorusTarget(), [1, 0], 1))
        gerbe = TrivialGerbe(volume_form(TorusTarget()))
        self.assertEqual(gerbe.target, TorusTarget())

    def test_world_volumes(self):
        target = TorusTarget()
        point = point_world_volume(target, [0.25, 0.5])
        self.assertTrue(point.contains([1.25, -0.5]))
        self.assertFalse(point.contains([0.3, 0.5]))
        self.assertTrue(full_world_volume(target).contains([0.7, 0.1]))
        diagonal = diagonal_world_volume(target)
        self.assertTrue(diagonal.contains([0.2, 0.3, 1.2, 0.3]))
        self.assertFalse(diagonal.contains([0.2, 0.3, 0.2, 0.4]))
        for p in diagonal.sample(20, seed=3):
            self.assertTrue(diagonal.contains(p))

    def test_records(self):
        target = TorusTarget()
        brane = DBraneRecord(full_world_volume(target))
        self.assertEqual(brane.rank, 0)
        self.assertRaises(ValueError, DBraneRecord, full_world_volume(target), zero_form(target, 1))
        self.assertRaises(ValueError, BiBraneRecord, full_world_volume(target))
        bibrane = diagonal_bibrane(target)
        self.assertEqual(bibrane.rank, 1)
        self.assertEqual(bibrane.varpi.degree, 2)


if __name__ == '__main__':
    unittest.main()
