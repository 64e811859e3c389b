import os
import json
import shutil
import tempfile
import unittest
import numpy as np
from contextlib import redirect_stdout, redirect_stderr
from io import StringIO
from unittest import mock

from gerbecalc.cli.main import main, make_parser
from gerbecalc.cli.jobs import load_local_data, load_map_job, run_holonomy, run_freeboson, parse_fraction
from gerbecalc.cli.suite import corpus_suite
from gerbecalc.data.fixtures import load_mesh, load_fixture, export_meshes, MESH_GENERATORS, \
    PACKAGE_FIXTURE_DIRECTORY
from gerbecalc.data.utils import dump_json_string
from gerbecalc.gerbedata.deligne import DeligneSurfaceData
from gerbecalc.hyper.hyper import HyperParameter


def run_main(argv: list) -> tuple:
    out, err = StringIO(), StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class TestFixtures(unittest.TestCase):

    def test_meshes(self):
        expected = {"sphere_tetra": 2, "sphere_octa": 2, "torus_2f": 0, "torus_fine": 0, "rp2_min": 1,
                    "klein_min": 0, "disk": 1, "split_torus": 0}
        for name, chi in expected.items():
            self.assertEqual(load_mesh(name).euler_characteristic, chi)
        self.assertRaises(ValueError, load_mesh, "sphere_ico")

    def test_export(self):
        with tempfile.TemporaryDirectory() as directory:
            paths = export_meshes(directory, names=["rp2_min", "disk"])
            self.assertEqual(len(paths), 2)
            self.assertTrue(all(os.path.exists(p) for p in paths))

    def test_local_data(self):
        self.assertTrue(isinstance(load_local_data("trivial.json"), DeligneSurfaceData))
        data, equivariant_map = load_local_data("klein_jandl.json")
        self.assertEqual(equivariant_map.cover.base.euler_characteristic, 0)
        self.assertRaises(ValueError, load_fixture, "missing.json")
        self.assertEqual(len(MESH_GENERATORS), 8)


class TestHyper(unittest.TestCase):

    def test_defaults(self):
        hyper = HyperParameter()
        self.assertEqual(hyper["quadrature"]["degree"], 4)
        self.assertEqual(hyper.get("random", "seed"), 0)

    def test_merge(self):
        hyper = HyperParameter({"validation": {"tolerance": 1e-5}})
        self.assertEqual(hyper.get("validation", "tolerance"), 1e-5)
        self.assertEqual(hyper.get("validation", "samples"), 200)
        self.assertEqual(hyper.set_tolerance(1e-3).get("holonomy", "spread_tolerance"), 1e-3)

    def test_invalid(self):
        self.assertRaises(ValueError, HyperParameter, {"quadrature": {"degree": 3}})
        self.assertRaises(ValueError, HyperParameter, {"validation": {"tolerance": -1.0}})
        self.assertRaises(TypeError, HyperParameter, 5)
        self.assertRaises(ValueError, HyperParameter().set_tolerance, 0.0)

    def test_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "config.yaml")
            HyperParameter({"random": {"seed": 7}}).save(path)
            self.assertEqual(HyperParameter(path).get("random", "seed"), 7)


class TestJobs(unittest.TestCase):

    def test_holonomy(self):
        report = run_holonomy("trivial.json", samples=20)
        self.assertTrue(report["passed"])
        self.assertTrue(np.max(np.abs(np.array(report["value"]) - np.array([1.0, 0.0]))) < 1e-12)

    def test_unoriented(self):
        report = run_holonomy("klein_jandl.json", engine="unoriented", samples=10)
        self.assertTrue(report["passed"])
        expected = np.exp(0.3j * np.pi)
        self.assertTrue(abs(complex(*report["value"]) - expected) < 1e-6)

    def test_closed(self):
        report = run_holonomy("closed_torus.json", engine="closed")
        self.assertTrue(report["passed"])
        self.assertEqual(report["engine"], "closed")
        self.assertEqual(report["n_variants"], 2)
        self.assertTrue(abs(complex(*report["value"]) - np.exp(2j * np.pi * 0.6)) < 1e-6)

    def test_boundary(self):
        report = run_holonomy("boundary_disk.json", engine="boundary")
        self.assertTrue(report["passed"])
        self.assertIsNone(report["unit_modulus"])
        self.assertEqual(report["diagnostics"]["rank"], 2)
        area = 1.5 * np.sqrt(3.0) * 0.05 ** 2
        self.assertTrue(abs(complex(*report["value"]) - 2.0 * np.exp(2j * np.pi * area)) < 1e-6)

    def test_defect(self):
        report = run_holonomy("defect_wilson.json", engine="defect")
        self.assertTrue(report["passed"])
        self.assertTrue(report["unit_modulus"])
        self.assertTrue(abs(complex(*report["value"]) - np.exp(2j * np.pi / 3.0)) < 1e-6)

    def test_map_job(self):
        job = load_map_job("boundary_disk.json", "boundary")
        self.assertEqual(job["brane"].rank, 2)
        self.assertTrue(np.max(np.abs(job["map"].vertex_image(0) - np.array([0.5, 0.5]))) < 1e-12)
        self.assertRaises(ValueError, run_holonomy, "closed_torus.json", "boundary")
        self.assertRaises(ValueError, run_holonomy, "trivial.json", "closed")
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "job.json")
            config = load_fixture("defect_wilson.json")
            config["bibrane"] = {"kind": "wilson"}
            with open(path, "w") as file:
                json.dump(config, file)
            self.assertRaises(ValueError, load_map_job, path, "defect")

    def test_engine_mismatch(self):
        self.assertRaises(ValueError, run_holonomy, "klein_jandl.json", "deligne")
        self.assertRaises(ValueError, run_holonomy, "trivial.json", "unoriented")
        self.assertRaises(ValueError, run_holonomy, "trivial.json", "lattice")

    def test_freeboson(self):
        report = run_freeboson(0.7, "1/4,1/3", "bibrane:1/2,1/3")
        self.assertTrue(report["passed"])
        self.assertEqual(report["result"]["u"], parse_fraction("3/4"))
        self.assertEqual(report["result"]["a"], parse_fraction("2/3"))
        self.assertRaises(ValueError, run_freeboson, 0.7, "1/4", "d0:0")
        self.assertRaises(ValueError, run_freeboson, 0.7, "1/4,0", "d2:0")
        self.assertEqual(parse_fraction("0.5"), parse_fraction("1/2"))


class TestMain(unittest.TestCase):

    def test_holonomy(self):
        code, out, _ = run_main(["--samples", "20", "holonomy", "--data", "trivial.json"])
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(out)["passed"])

    def test_map_engines(self):
        for engine, data in [("closed", "closed_torus.json"), ("boundary", "boundary_disk.json"),
                             ("defect", "defect_wilson.json")]:
            code, out, _ = run_main(["holonomy", "--engine", engine, "--data", data])
            self.assertEqual(code, 0)
            self.assertEqual(json.loads(out)["engine"], engine)

    def test_corrupted_fixture(self):
        with tempfile.TemporaryDirectory() as directory:
            fixtures = os.path.join(directory, "fixtures")
            shutil.copytree(PACKAGE_FIXTURE_DIRECTORY, fixtures)
            path = os.path.join(fixtures, "trivial.json")
            with open(path, "r") as file:
                config = json.load(file)
            config["g"][0] = [0.0, 2.0]
            with open(path, "w") as file:
                json.dump(config, file)
            with mock.patch.dict(os.environ, {"GERBECALC_FIXTURES": fixtures}):
                code, out, _ = run_main(["validate", "--cocycle", "trivial.json"])
                criteria = ["gauge_invariance", "discrete_torsion", "fusion_bounds", "census", "freeboson_laws"]
                report = corpus_suite(criteria=criteria, verbose=False)
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(out)["failing"], [["vertex", 0]])
        self.assertFalse(report["passed"])
        self.assertEqual([r["criterion"] for r in report["criteria"] if not r["passed"]], ["gauge_invariance"])

    def test_missing_file(self):
        code, _, err = run_main(["holonomy", "--data", "missing.json"])
        self.assertEqual(code, 2)
        self.assertTrue(err.startswith("Error:"))

    def test_wzw(self):
        code, out, _ = run_main(["wzw", "check-bounds", "--k", "10"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["summary"], "121/121 pairs match")
        self.assertEqual(run_main(["wzw", "check-bounds"])[0], 2)
        self.assertEqual(run_main(["wzw", "jandl-census", "--group", "SO3", "--k", "3"])[0], 2)

    def test_fusion_table(self):
        code, out, _ = run_main(["wzw", "fusion-table", "--level", "2"])
        self.assertEqual(code, 0)
        self.assertEqual(len(json.loads(out)["rows"]), 10)

    def test_validate(self):
        self.assertEqual(run_main(["validate", "--cocycle", "trivial.json"])[0], 0)
        self.assertEqual(run_main(["--samples", "30", "validate", "--dbrane", "su2_dbrane_k2.json"])[0], 0)
        self.assertEqual(run_main(["validate", "--dbrane", "su2_varpi_k2.json"])[0], 2)

    def test_freeboson_out(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "fuse.json")
            code, out, _ = run_main(["--out", path, "freeboson", "fuse", "--radius", "0.7", "--bibrane", "1/4,1/3",
                                     "--target", "d0:1/2"])
            self.assertEqual(code, 0)
            with open(path, "r") as file:
                saved = json.load(file)
        self.assertEqual(saved["result"]["u"], "3/4")
        self.assertEqual(json.loads(out), saved)

    def test_bad_tolerance(self):
        self.assertEqual(run_main(["--tol", "-1", "wzw", "check-bounds", "--k", "2"])[0], 2)

    def test_parser(self):
        parser = make_parser()
        with redirect_stderr(StringIO()):
            self.assertRaises(SystemExit, parser.parse_args, ["holonomy", "--engine", "lattice", "--data", "x"])
            self.assertRaises(SystemExit, parser.parse_args, ["validate", "--cocycle", "a", "--jandl", "b"])
        args = vars(parser.parse_args(["wzw", "fusion-table", "--level", "3"]))
        self.assertEqual(args["k"], 3)


class TestSuite(unittest.TestCase):

    def test_subset(self):
        criteria = ["discrete_torsion", "fusion_bounds", "census", "freeboson_laws"]
        report = corpus_suite(criteria=criteria, verbose=False)
        self.assertTrue(report["passed"])
        self.assertEqual([r["criterion"] for r in report["criteria"]], criteria)
        self.assertEqual(dump_json_string(report), dump_json_string(corpus_suite(criteria=criteria,
                                                                                 verbose=False)))

    def test_unknown(self):
        self.assertRaises(ValueError, corpus_suite, criteria=["speed"], verbose=False)


if __name__ == '__main__':
    unittest.main()
