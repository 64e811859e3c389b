import sys
import time
import logging
import itertools
import numpy as np
import pandas as pd
from fractions import Fraction
from gerbecalc.data import fixtures
from gerbecalc.fields.forms import FourierConnection, fourier_two_form, volume_form, constant_form, zero_form, \
    add_forms
from gerbecalc.fields.maps import SurfaceMap
from gerbecalc.fields.quadrature import pullback_integrate
from gerbecalc.fields.target import TorusTarget
from gerbecalc.fields.transport import tensor_line
from gerbecalc.gerbedata.branes import DBraneRecord, full_world_volume, diagonal_bibrane
from gerbecalc.gerbedata.deligne import flat_torus_data, constant_jandl_data, jandl_gauge_transform, \
    random_jandl_gauge
from gerbecalc.gerbedata.jandl import JandlTrivialData, reflection
from gerbecalc.gerbedata.report import ValidationReport
from gerbecalc.holonomy.boundary import holonomy_boundary
from gerbecalc.holonomy.closed import holonomy_closed
from gerbecalc.holonomy.defect import split_map_from_functions, glue_split_map, holonomy_defect
from gerbecalc.holonomy.deligne import holonomy_deligne
from gerbecalc.holonomy.harness import independence_harness, gauge_variants, lift_variants, subdivision_variants
from gerbecalc.holonomy.unoriented import holonomy_unoriented, equivariant_map_from_function
from gerbecalc.mesh.refine import subdivide
from gerbecalc.hyper.hyper import HyperParameter
from gerbecalc.cli.jobs import load_local_data
from gerbecalc.wzw.branes import validate_symmetric_branes
from gerbecalc.wzw.census import jandl_census, census_consistency
from gerbecalc.wzw.forms import canonical_three_form, haar_integral
from gerbecalc.wzw.fusion import fusion_bounds_check
from gerbecalc.freeboson.branes import D0Brane, D1Brane, FreeBosonBiBrane, fuse_defect_d0, fuse_defect_d1, \
    fuse_defects, correspondence_bibrane, correspondence_d0, correspondence_d1

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

KLEIN_SCALE = 0.3


def _merge(name: str, parts: list) -> dict:
    return {"name": name, "passed": bool(all(p["passed"] for p in parts)),
            "max_residual": float(max([p.get("max_residual", 0.0) for p in parts] + [0.0])),
            "parts": [dict(p) for p in parts]}


def klein_jandl(scale: float = KLEIN_SCALE, surface=None) -> tuple:
    r"""Jandl data :math:`(I_{c\,dx \wedge dy}, 0, 1)` on the unit torus with the Klein bottle involution and the
    equivariant identity map from the Klein bottle fixture. Its holonomy is :math:`e^{\pi i c}`."""
    target = TorusTarget()
    involution = reflection(target, axes=[1], shift=[0.5, 0.0])
    data = JandlTrivialData(constant_form(target, [0, 1], 2, scale=scale, name="torus.dxdy"), involution=involution,
                            name="klein")
    surface = fixtures.load_mesh("klein_min") if surface is None else surface
    return data, equivariant_map_from_function(surface, target, lambda x: np.asarray(x), involution)


def gauge_invariance(hyper: HyperParameter, seed: int, samples: int) -> dict:
    tolerance = 1e-12
    n = max(samples, 1000)
    parts = []
    deligne = {"sphere_tetra": load_local_data("trivial.json"),
               "torus_2f": flat_torus_data(fixtures.load_mesh("torus_2f"), 1.0)}
    for name, data in deligne.items():
        parts.append(independence_harness(lambda d: holonomy_deligne(d, tolerance=1e-6),
                                          gauge_variants(data, n=n, seed=seed), name=name, tolerance=tolerance))
    rp2 = constant_jandl_data(fixtures.load_mesh("rp2_min"), phi=-1.0, name="rp2")
    parts.append(independence_harness(lambda d: holonomy_deligne(d, tolerance=1e-6),
                                      gauge_variants(rp2, n=n, seed=seed), name="rp2_min", tolerance=tolerance))
    return _merge("gauge_invariance", [dict(p, max_residual=p["spread"]) for p in parts])


def lift_independence(hyper: HyperParameter, seed: int, samples: int) -> dict:
    parts = []
    rng = np.random.default_rng(seed)
    for name in ["rp2_min", "klein_min"]:
        data = constant_jandl_data(fixtures.load_mesh(name), phi=-1.0, name=name)
        p, lam = random_jandl_gauge(data, rng)
        data = jandl_gauge_transform(data, p=p, lam=lam)
        lifts = lift_variants(data.cover, n_samples=samples, seed=seed)
        report = independence_harness(lambda x: holonomy_deligne(data, unoriented_mode=x, tolerance=1e-6), lifts,
                                      name=name, tolerance=1e-12)
        parts.append(dict(report, max_residual=report["spread"]))
    data, equivariant_map = klein_jandl()
    report = independence_harness(lambda x: holonomy_unoriented(data, equivariant_map, lifts=x),
                                  lift_variants(equivariant_map.cover, n_samples=samples, seed=seed),
                                  name="klein_geometric", tolerance=1e-6)
    parts.append(dict(report, max_residual=report["spread"]))
    return _merge("lift_independence", parts)


def triangulation_independence(hyper: HyperParameter, seed: int, samples: int) -> dict:
    target = TorusTarget()
    rng = np.random.default_rng(seed)
    modes = [{"m": rng.integers(-1, 2, size=2).tolist(), "amp": float(0.3 * rng.normal()),
              "phase": float(rng.uniform(0, 2 * np.pi))} for _ in range(2)]
    omega = fourier_two_form(target, modes, scale=0.37)
    fmap = SurfaceMap.from_function(fixtures.load_mesh("torus_fine"), target, lambda x: np.asarray(x))
    closed = independence_harness(lambda m: holonomy_closed(omega, m), subdivision_variants(fmap, levels=2),
                                  name="closed", tolerance=1e-5)
    values = []
    surface = fixtures.load_mesh("klein_min")
    for _ in range(3):
        data, equivariant_map = klein_jandl(surface=surface)
        values.append(holonomy_unoriented(data, equivariant_map))
        surface = subdivide(surface)
    unoriented = independence_harness(lambda x: x, values, name="unoriented", tolerance=1e-5)
    return _merge("triangulation_independence", [dict(r, max_residual=r["spread"]) for r in [closed, unoriented]])


def dirac_quantization(hyper: HyperParameter, seed: int, samples: int) -> dict:
    target = TorusTarget()
    residuals = []
    surface = fixtures.load_mesh("torus_fine")
    for scale, matrix in [(1.0, np.eye(2)), (3.0, np.eye(2)), (1.0, np.array([[2.0, 1.0], [0.0, 1.0]]))]:
        fmap = SurfaceMap.from_function(surface, target, lambda x, m=matrix: m @ np.asarray(x))
        integral = pullback_integrate(volume_form(target, scale=scale), fmap)
        residuals.append(abs(integral - np.round(integral)))
    curvature = ValidationReport.from_residuals("curvature_integrals", residuals, 1e-3)
    errors = []
    for k in [1, 2, 3]:
        estimate = haar_integral(canonical_three_form(k), n_samples=max(samples, 10000), seed=seed)
        errors.append(abs(estimate - k) / k)
    haar = ValidationReport.from_residuals("haar_h", errors, 0.02)
    return _merge("dirac_quantization", [curvature, haar])


def discrete_torsion(hyper: HyperParameter, seed: int, samples: int) -> dict:
    residuals = []
    surface = fixtures.load_mesh("torus_2f")
    for theta in [np.pi / 2, np.pi, 4 * np.pi / 3]:
        data = flat_torus_data(surface, theta)
        brute = complex(np.prod(data.g)) * np.exp(2j * np.pi * (np.sum(data.b) + np.sum(data.a)))
        value = holonomy_deligne(data).value
        residuals.append(max(abs(value - np.exp(1j * theta)), abs(value - brute)))
    return dict(ValidationReport.from_residuals("discrete_torsion", residuals, 1e-9))


def boundary_stokes(hyper: HyperParameter, seed: int, samples: int) -> dict:
    target = TorusTarget()
    rng = np.random.default_rng(seed)
    surface = subdivide(subdivide(fixtures.hexagon_disk(scale=0.05, center=(0.5, 0.5))))
    fmap = SurfaceMap.from_function(surface, target, lambda x: np.asarray(x))
    rho = fourier_two_form(target, [{"m": [1, 0], "amp": 0.4, "phase": 0.3}], scale=0.2)
    module = FourierConnection.random(target, rng, max_mode=1).one_form()
    brane = DBraneRecord(full_world_volume(target), zero_form(target, 2), module, name="full")
    values = []
    for _ in range(50):
        line = FourierConnection.random(target, rng, max_mode=1)
        changed = DBraneRecord(brane.world_volume, brane.omega, tensor_line(module, line.one_form(), -1))
        values.append(holonomy_boundary(add_forms(rho, line.curvature()), changed, fmap))
    report = independence_harness(lambda x: x, [holonomy_boundary(rho, brane, fmap)] + values, name="stokes",
                                  tolerance=1e-6)
    return dict(report, max_residual=report["spread"])


def defect_gluing(hyper: HyperParameter, seed: int, samples: int) -> dict:
    target = TorusTarget()
    omega = fourier_two_form(target, [{"m": [1, 1], "amp": 0.25, "phase": 0.1}], scale=0.41)
    split = split_map_from_functions(fixtures.split_torus(), target, lambda x: np.asarray(x))
    defect = holonomy_defect(omega, omega, diagonal_bibrane(target), split)
    closed = holonomy_closed(omega, glue_split_map(split))
    residuals = [abs(defect.value - closed.value)]
    for u, a, w in [(Fraction(1, 4), Fraction(1, 3), 1), (Fraction(1, 2), Fraction(2, 5), 2),
                    (Fraction(0), Fraction(3, 4), -1)]:
        residuals.append(abs(wilson_defect_holonomy(u, a, w).value - np.exp(2j * np.pi * float(a) * w)))
    return dict(ValidationReport.from_residuals("defect_gluing", residuals, 1e-6))


def wilson_defect_holonomy(u, a, winding: int, radius: float = 1.0 / (2 * np.pi)):
    r"""Defect holonomy of the free boson bi-brane :math:`(u, a)` on the split torus with the map
    :math:`\Phi(s, t) = w L t + x s`, which winds `winding` times along the defect circle."""
    bibrane = FreeBosonBiBrane(radius, u, a)
    period, x = bibrane.period, bibrane.x
    split = split_map_from_functions(fixtures.split_torus(), bibrane.target,
                                     lambda c: np.array([winding * period * c[1] + x * c[0]]))
    circle = bibrane.target
    return holonomy_defect(zero_form(circle, 2), zero_form(circle, 2), bibrane.record(), split)


def curvature_identities(hyper: HyperParameter, seed: int, samples: int) -> dict:
    parts = []
    for k in [1, 2, 3]:
        for bibranes in [False, True]:
            parts.append(validate_symmetric_branes(k, n_samples=samples, seed=seed, tolerance=1e-4,
                                                   bibranes=bibranes))
    return _merge("curvature_identities", parts)


def fusion_bounds(hyper: HyperParameter, seed: int, samples: int) -> dict:
    return _merge("fusion_bounds", [fusion_bounds_check(k) for k in range(1, 13)])


def census(hyper: HyperParameter, seed: int, samples: int) -> dict:
    expected = [("SU2", 1, "inv", 2), ("SU2", 3, "minus_inv", 2), ("SO3", 2, "inv", 4), ("PSO4n", 4, "inv", 16)]
    failing = [[g, k, z] for g, k, z, n in expected if jandl_census(g, k, z)["count"] != n]
    consistency = census_consistency("SU2", 1, max_m=8)
    return {"name": "census", "passed": len(failing) == 0 and consistency["passed"], "failing": failing,
            "max_residual": float(len(failing))}


def freeboson_laws(hyper: HyperParameter, seed: int, samples: int) -> dict:
    radius = 0.7
    grid = [Fraction(i, 10) for i in range(10)]
    failing, n_cases = [], 0
    for u1, a1, u2, a2 in itertools.product(grid, repeat=4):
        n_cases += 1
        b1, b2 = FreeBosonBiBrane(radius, u1, a1), FreeBosonBiBrane(radius, u2, a2)
        fused = fuse_defects(b1, b2)
        if fused != fuse_defects(b2, b1) or (fused.u, fused.a) != ((u1 + u2) % 1, (a1 + a2) % 1):
            failing.append(["bibrane", str(u1), str(a1), str(u2), str(a2)])
    for u, v in itertools.product(grid, repeat=2):
        if fuse_defect_d0(FreeBosonBiBrane(radius, u, 0), D0Brane(radius, v)).u != (u + v) % 1:
            failing.append(["d0", str(u), str(v)])
        if fuse_defect_d1(FreeBosonBiBrane(radius, 0, u), D1Brane(radius, v)).a != (u + v) % 1:
            failing.append(["d1", str(u), str(v)])
    oracles = [correspondence_bibrane(FreeBosonBiBrane(radius, Fraction(3, 10), Fraction(1, 7)),
                                      FreeBosonBiBrane(radius, Fraction(5, 8), Fraction(2, 3)), seed=seed),
               correspondence_d0(FreeBosonBiBrane(radius, Fraction(1, 4)), D0Brane(radius, Fraction(1, 2))),
               correspondence_d1(FreeBosonBiBrane(radius, 0, Fraction(1, 3)), D1Brane(radius, Fraction(1, 2)))]
    failing += [["correspondence", i] for i, o in enumerate(oracles) if not o["consistent"]]
    return {"name": "freeboson_laws", "passed": len(failing) == 0, "failing": failing, "n_cases": n_cases,
            "max_residual": float(max(o.get("residual", 0.0) for o in oracles))}


CRITERIA = [
    ("gauge_invariance", gauge_invariance),
    ("lift_independence", lift_independence),
    ("triangulation_independence", triangulation_independence),
    ("dirac_quantization", dirac_quantization),
    ("discrete_torsion", discrete_torsion),
    ("boundary_stokes", boundary_stokes),
    ("defect_gluing", defect_gluing),
    ("curvature_identities", curvature_identities),
    ("fusion_bounds", fusion_bounds),
    ("census", census),
    ("freeboson_laws", freeboson_laws),
]


def corpus_suite(hyper: HyperParameter = None, seed: int = None, samples: int = None, criteria: list = None,
                 verbose: bool = True) -> dict:
    """Run the numerical checks on the fixture corpus.

    Errors inside a criterion are recorded as failure of that criterion with the error message, so that one broken
    fixture fails exactly one row.

    Args:
        hyper (HyperParameter): Config. Default is None.
        seed (int): Seed. Default is None, which uses the config.
        samples (int): Number of samples for randomized criteria. Default is None, which uses the config.
        criteria (list): Names of criteria to run. Default is None, which runs all.
        verbose (bool): Whether to print the summary table to stderr. Default is True.

    Returns:
        dict: Report with 'passed', 'criteria' and 'failing'. Timings are only printed, not stored, so that equal
            seeds give identical reports.
    """
    hyper = HyperParameter() if hyper is None else hyper
    seed = hyper.get("random", "seed", 0) if seed is None else int(seed)
    samples = hyper.get("validation", "samples", 200) if samples is None else int(samples)
    selected = [(n, f) for n, f in CRITERIA if criteria is None or n in criteria]
    if criteria is not None and len(selected) != len(criteria):
        raise ValueError("Unknown criteria %s." % sorted(set(criteria) - set(n for n, _ in CRITERIA)))
    rows, results = [], []
    for name, criterion in selected:
        start = time.time()
        try:
            result = criterion(hyper, seed, samples)
        except Exception as e:  # noqa
            module_logger.warning("Criterion '%s' raised %s." % (name, e))
            result = {"name": name, "passed": False, "max_residual": float("inf"), "error": "%s: %s" % (
                type(e).__name__, e)}
        result["criterion"] = name
        results.append(result)
        rows.append({"criterion": name, "passed": bool(result["passed"]),
                     "max_residual": result.get("max_residual", float("nan")), "seconds": time.time() - start})
        module_logger.info("Criterion '%s' %s." % (name, "passed" if result["passed"] else "failed"))
    if verbose:
        print(pd.DataFrame(rows).to_string(index=False), file=sys.stderr)
    failing = [r["criterion"] for r in results if not r["passed"]]
    return {"schema": 1, "name": "suite", "seed": seed, "samples": samples, "passed": len(failing) == 0,
            "failing": failing, "criteria": results}
