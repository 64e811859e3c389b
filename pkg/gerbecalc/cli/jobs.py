import logging
import numpy as np
from fractions import Fraction
from gerbecalc.data.fixtures import load_fixture, load_mesh
from gerbecalc.data.utils import complex_from_pairs
from gerbecalc.fields.serial import deserialize
from gerbecalc.fields.target import make_target
from gerbecalc.fields.forms import zero_form
from gerbecalc.fields.maps import map_from_dict, affine_function
from gerbecalc.fields.transport import direct_sum
from gerbecalc.mesh.refine import subdivide
from gerbecalc.mesh.base import surface_from_dict
from gerbecalc.gerbedata.deligne import DeligneSurfaceData, JandlSurfaceData, validate_cocycle
from gerbecalc.gerbedata.jandl import JandlTrivialData, make_involution, validate_jandl
from gerbecalc.gerbedata.report import ValidationReport
from gerbecalc.holonomy.deligne import holonomy_deligne
from gerbecalc.holonomy.closed import holonomy_closed
from gerbecalc.holonomy.boundary import holonomy_boundary
from gerbecalc.holonomy.defect import holonomy_defect, split_map_from_functions
from gerbecalc.holonomy.unoriented import holonomy_unoriented, equivariant_map_from_function
from gerbecalc.holonomy.harness import independence_harness, gauge_variants, lift_variants, subdivision_variants, \
    rotation_variants
from gerbecalc.gerbedata.branes import DBraneRecord, full_world_volume, point_world_volume, diagonal_bibrane
from gerbecalc.hyper.hyper import HyperParameter
from gerbecalc.wzw.branes import validate_symmetric_branes
from gerbecalc.wzw.census import jandl_census, census_consistency, JANDL_TABLE
from gerbecalc.wzw.forms import canonical_three_form, haar_integral
from gerbecalc.wzw.fusion import fusion_bounds_check, fusion_table
from gerbecalc.freeboson.branes import D0Brane, D1Brane, FreeBosonBiBrane, fuse_defect_d0, fuse_defect_d1, \
    fuse_defects, correspondence_d0, correspondence_d1, correspondence_bibrane

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

ENGINES = ["closed", "deligne", "unoriented", "boundary", "defect"]
MAP_ENGINES = ["closed", "boundary", "defect"]


def _surface(description):
    if isinstance(description, dict):
        return surface_from_dict(description)
    if isinstance(description, str):
        return load_mesh(description)
    raise ValueError("Mesh must be given inline or as fixture name, got %s." % type(description))


def load_local_data(file_name: str):
    """Load combinatorial or geometric local data from a json fixture.

    The key 'kind' selects 'deligne', 'jandl' (combinatorial data on the double cover) or 'jandl.geometric'. A
    'mesh' entry is either inline or the name of a mesh fixture.

    Returns:
        DeligneSurfaceData, JandlSurfaceData or tuple: Local data, or Jandl data with its equivariant map.
    """
    config = load_fixture(file_name)
    if not isinstance(config, dict) or "mesh" not in config:
        raise ValueError("Local data '%s' requires a 'mesh'." % file_name)
    kind = config.get("kind", "deligne")
    surface = _surface(config["mesh"])
    if kind == "deligne":
        return DeligneSurfaceData.from_dict(config, surface=surface)
    if kind == "jandl":
        return JandlSurfaceData.from_dict(config, surface=surface)
    if kind == "jandl.geometric":
        return load_geometric_jandl(config, surface)
    raise ValueError("Unknown local data kind '%s'." % kind)


def load_geometric_jandl(config: dict, surface) -> tuple:
    """Jandl data on a flat target with the equivariant map given by corner coordinates, optionally transformed by
    an integer 'matrix'."""
    target = make_target(config.get("target", "torus"))
    involution_config = dict(config["involution"])
    involution_config.setdefault("target", target.get_config())
    involution = make_involution(involution_config)
    omega = deserialize(config["omega"])
    line = deserialize(config["line"]) if "line" in config else None
    phi = complex(complex_from_pairs(config.get("phi", [1.0, 0.0]))[0])
    data = JandlTrivialData(omega, line, phi, involution=involution, name=config.get("name", None))
    matrix = np.array(config.get("matrix", np.eye(target.dim)), dtype="float")

    def function(x):
        return matrix @ np.asarray(x, dtype="float")

    return data, equivariant_map_from_function(surface, target, function, involution)


def load_map_job(file_name: str, engine: str) -> dict:
    """Load a json job for the map based engines 'closed', 'boundary' and 'defect'.

    Every job names a 'mesh' and a 'map' in the format of :obj:`map_from_dict`. Closed jobs add the 2-form 'omega',
    boundary jobs the 2-form 'rho' and a 'brane', defect jobs the 2-forms 'rho1', 'rho2' and a 'bibrane'. Defect
    maps are affine in the corner coordinates, with an optional affine 'map2' for the second region.

    Args:
        file_name (str): Fixture file name or path.
        engine (str): Engine the job is run with, which must match its 'kind'.

    Returns:
        dict: Job with the loaded surface, map and forms.
    """
    config = load_fixture(file_name)
    if not isinstance(config, dict) or "mesh" not in config or "map" not in config:
        raise ValueError("Job '%s' requires a 'mesh' and a 'map'." % file_name)
    if config.get("kind", None) != engine:
        raise ValueError("Engine '%s' can not run job '%s' of kind '%s'." % (engine, file_name,
                                                                             config.get("kind", None)))
    surface = _surface(config["mesh"])
    job = {"name": config.get("name", file_name), "surface": surface}
    if engine == "closed":
        job["map"] = map_from_dict(surface, config["map"])
        job["omega"] = deserialize(config["omega"])
    elif engine == "boundary":
        job["map"] = map_from_dict(surface, config["map"])
        job["rho"] = deserialize(config["rho"])
        job["brane"] = _brane(config["brane"], job["map"].target)
    elif engine == "defect":
        if "matrix" not in config["map"]:
            raise ValueError("Defect job '%s' requires an affine map with 'matrix'." % file_name)
        target1 = make_target(config["map"]["target"])
        first = (target1, affine_function(target1, config["map"]))
        second = (None, None)
        if "map2" in config:
            target2 = make_target(config["map2"].get("target", target1.get_config()))
            second = (target2, affine_function(target2, config["map2"]))
        job["functions"] = first + second
        job["index"] = int(config.get("defect", 0))
        job["bibrane"] = _bibrane(config["bibrane"], target1)
        target2 = target1 if second[0] is None else second[0]
        job["rho1"] = deserialize(config["rho1"]) if "rho1" in config else zero_form(target1, 2)
        job["rho2"] = deserialize(config["rho2"]) if "rho2" in config else zero_form(target2, 2)
    else:
        raise ValueError("Unknown map engine '%s', available are %s." % (engine, MAP_ENGINES))
    return job


def _module(config):
    if config is None:
        return None
    if isinstance(config, list):
        if len(config) == 0:
            raise ValueError("Brane module requires at least one connection form.")
        return direct_sum(*[deserialize(c) for c in config])
    return deserialize(config)


def _brane(config: dict, target) -> DBraneRecord:
    """Brane from 'world_volume' ('full' or `{"point": [...]}`), optional 2-form 'omega' and 'module', a
    connection form or a list of forms for a direct sum."""
    world_volume = config.get("world_volume", "full")
    if world_volume == "full":
        world_volume = full_world_volume(target)
    elif isinstance(world_volume, dict) and "point" in world_volume:
        world_volume = point_world_volume(target, world_volume["point"])
    else:
        raise ValueError("Unknown world volume '%s'." % world_volume)
    omega = deserialize(config["omega"]) if "omega" in config else None
    return DBraneRecord(world_volume, omega, _module(config.get("module", None)), name=config.get("name", None))


def _bibrane(config: dict, target):
    """Bi-brane from `{"kind": "diagonal"}` with optional 'bundle', or `{"kind": "freeboson", "radius", "u", "a"}`
    with fractions of the circumference and the Wilson period."""
    kind = config.get("kind", None)
    if kind == "diagonal":
        return diagonal_bibrane(target, _module(config.get("bundle", None)))
    if kind == "freeboson":
        bibrane = FreeBosonBiBrane(float(config["radius"]), parse_fraction(config.get("u", 0)),
                                   parse_fraction(config.get("a", 0)))
        return bibrane.record()
    raise ValueError("Unknown bi-brane kind '%s'." % kind)


def _split_map(job: dict, surface):
    target1, function1, target2, function2 = job["functions"]
    return split_map_from_functions(surface, target1, function1, target2, function2, index=job["index"])


def run_map_job(data_file: str, engine: str, hyper: HyperParameter, levels: int = 1) -> dict:
    """Holonomy of a closed, boundary or defect job together with its spread over `levels` barycentric
    subdivisions and, for boundary circles, over all basepoints."""
    job = load_map_job(data_file, engine)
    degree = hyper.get("quadrature", "degree", 4)
    spread_tolerance = hyper.get("holonomy", "spread_tolerance", 1e-5)
    if engine == "closed":
        omega = job["omega"]
        result = holonomy_closed(omega, job["map"], degree=degree)
        spread = independence_harness(lambda m: holonomy_closed(omega, m, degree=degree),
                                      subdivision_variants(job["map"], levels=levels), name="subdivision",
                                      tolerance=spread_tolerance)
        return _values_report(result, spread, hyper)
    if engine == "boundary":
        rho, brane = job["rho"], job["brane"]
        result = holonomy_boundary(rho, brane, job["map"], degree=degree)
        variants = rotation_variants(job["map"]) + subdivision_variants(job["map"], levels=levels)[1:]
        spread = independence_harness(lambda m: holonomy_boundary(rho, brane, m, degree=degree), variants,
                                      name="basepoint", tolerance=spread_tolerance)
        return _values_report(result, spread, hyper, unit=brane.rank == 1)
    surfaces = [job["surface"]]
    for _ in range(int(levels)):
        surfaces.append(subdivide(surfaces[-1]))
    rho1, rho2, bibrane = job["rho1"], job["rho2"], job["bibrane"]
    result = holonomy_defect(rho1, rho2, bibrane, _split_map(job, surfaces[0]), degree=degree)
    spread = independence_harness(
        lambda s: holonomy_defect(rho1, rho2, bibrane, _split_map(job, s), degree=degree), surfaces,
        name="subdivision", tolerance=spread_tolerance)
    return _values_report(result, spread, hyper, unit=bibrane.rank == 1)


def _values_report(result, spread_report: ValidationReport, hyper: HyperParameter, unit: bool = True) -> dict:
    out = result.to_dict()
    out["spread"] = spread_report["spread"]
    out["n_variants"] = spread_report["n_variants"]
    out["unit_modulus"] = None
    out["passed"] = bool(spread_report.passed)
    if unit:
        out["unit_modulus"] = result.check_unit_modulus(hyper.get("holonomy", "unit_modulus_tolerance", 1e-9))
        out["passed"] = bool(out["unit_modulus"] and out["passed"])
    return out


def run_holonomy(data_file: str, engine: str = "deligne", hyper: HyperParameter = None, seed: int = None,
                 samples: int = None) -> dict:
    """Holonomy of a local data fixture, together with the spread over gauge transformations or lifts.

    Args:
        data_file (str): Fixture file name or path.
        engine (str): 'deligne' for combinatorial data, 'unoriented' for geometric Jandl data, 'closed',
            'boundary' or 'defect' for jobs with a mesh and a map.
        hyper (HyperParameter): Config. Default is None.
        seed (int): Seed of the variants. Default is None, which uses the config.
        samples (int): Number of gauge variants or sampled lifts. Default is None, which uses the config.

    Returns:
        dict: Report with 'value', 'spread', 'diagnostics' and 'passed'.
    """
    hyper = HyperParameter() if hyper is None else hyper
    seed = hyper.get("random", "seed", 0) if seed is None else int(seed)
    samples = hyper.get("validation", "samples", 200) if samples is None else int(samples)
    spread_tolerance = hyper.get("holonomy", "spread_tolerance", 1e-5)
    if engine not in ENGINES:
        raise ValueError("Unknown engine '%s', available are %s." % (engine, ENGINES))
    if engine in MAP_ENGINES:
        return run_map_job(data_file, engine, hyper, levels=hyper.get("holonomy", "subdivision_levels", 1))
    data = load_local_data(data_file)
    if engine == "deligne":
        if isinstance(data, tuple):
            raise ValueError("Engine 'deligne' requires combinatorial data, '%s' is geometric." % data_file)
        tolerance = hyper.get("validation", "cocycle_tolerance", 1e-9)
        result = holonomy_deligne(data, tolerance=tolerance)
        spread = independence_harness(lambda d: holonomy_deligne(d, tolerance=1e-6),
                                      gauge_variants(data, n=samples, seed=seed), name="gauge",
                                      tolerance=spread_tolerance)
        return _values_report(result, spread, hyper)
    if not isinstance(data, tuple):
        raise ValueError("Engine 'unoriented' requires geometric Jandl data, '%s' is combinatorial." % data_file)
    jandl, equivariant_map = data
    degree = hyper.get("quadrature", "degree", 4)
    result = holonomy_unoriented(jandl, equivariant_map, degree=degree)
    spread = independence_harness(
        lambda lifts: holonomy_unoriented(jandl, equivariant_map, lifts=lifts, degree=degree),
        lift_variants(equivariant_map.cover, n_samples=samples, seed=seed), name="lifts",
        tolerance=spread_tolerance)
    return _values_report(result, spread, hyper)


def run_validate(kind: str, file_name: str, hyper: HyperParameter = None, seed: int = None,
                 samples: int = None) -> dict:
    """Run a validator on a fixture. `kind` is one of 'bibrane', 'dbrane', 'cocycle' and 'jandl'."""
    hyper = HyperParameter() if hyper is None else hyper
    tolerance = hyper.get("validation", "tolerance", 1e-4)
    if kind in ["bibrane", "dbrane"]:
        config = load_fixture(file_name)
        expected = "su2.%s" % kind
        if config.get("kind", None) != expected:
            raise ValueError("Fixture '%s' is not of kind '%s'." % (file_name, expected))
        seed = int(config.get("seed", hyper.get("random", "seed", 0))) if seed is None else int(seed)
        samples = int(config.get("samples", hyper.get("validation", "samples", 200))) if samples is None else \
            int(samples)
        report = validate_symmetric_branes(int(config["k"]), labels=config.get("labels", None), n_samples=samples,
                                           seed=seed, tolerance=float(config.get("tolerance", tolerance)),
                                           bibranes=kind == "bibrane")
        return dict(report)
    if kind == "cocycle":
        data = load_local_data(file_name)
        if isinstance(data, tuple):
            raise ValueError("Cocycle validation requires combinatorial data, '%s' is geometric." % file_name)
        return dict(validate_cocycle(data, tolerance=hyper.get("validation", "cocycle_tolerance", 1e-9)))
    if kind == "jandl":
        data = load_local_data(file_name)
        if not isinstance(data, tuple):
            raise ValueError("Jandl validation requires geometric data, '%s' is combinatorial." % file_name)
        seed = hyper.get("random", "seed", 0) if seed is None else int(seed)
        samples = hyper.get("validation", "samples", 200) if samples is None else int(samples)
        return dict(validate_jandl(data[0], n_samples=samples, seed=seed, tolerance=tolerance))
    raise ValueError("Unknown validation kind '%s'." % kind)


def run_wzw(action: str, k: int = None, hyper: HyperParameter = None, seed: int = None,
            samples: int = None, group: str = None) -> dict:
    """SU(2) WZW computations: 'fusion-table', 'check-bounds', 'validate-forms' and 'jandl-census'."""
    hyper = HyperParameter() if hyper is None else hyper
    seed = hyper.get("random", "seed", 0) if seed is None else int(seed)
    samples = hyper.get("validation", "samples", 200) if samples is None else int(samples)
    if action == "fusion-table":
        table = fusion_table(_level(k))
        return {"name": "fusion_table", "k": int(k), "rows": table.to_dict(orient="records"), "passed": True}
    if action == "check-bounds":
        return dict(fusion_bounds_check(_level(k)))
    if action == "validate-forms":
        k = _level(k)
        tolerance = hyper.get("validation", "tolerance", 1e-4)
        parts = [validate_symmetric_branes(k, n_samples=samples, seed=seed, tolerance=tolerance),
                 validate_symmetric_branes(k, n_samples=samples, seed=seed, tolerance=tolerance, bibranes=True)]
        integral = haar_integral(canonical_three_form(k), n_samples=max(samples, 1000), seed=seed)
        quantized = abs(integral - k) <= 0.02 * k
        return {"name": "validate_forms", "k": k, "parts": [dict(p) for p in parts], "h_integral": integral,
                "passed": bool(all(p.passed for p in parts) and quantized)}
    if action == "jandl-census":
        groups = sorted(JANDL_TABLE) if group is None else [group]
        levels = [2] if k is None else [_level(k)]
        rows = []
        for name in groups:
            for level in levels:
                for involution in sorted(JANDL_TABLE[name]["involutions"]):
                    rows.append(jandl_census(name, level, involution))
        consistency = census_consistency("SU2", 1)
        return {"name": "jandl_census", "rows": rows, "cohomology": consistency,
                "passed": bool(consistency["passed"])}
    raise ValueError("Unknown wzw action '%s'." % action)


def _level(k) -> int:
    if k is None:
        raise ValueError("Level `--k` is required.")
    return int(k)


def parse_fraction(text: str):
    """Exact fraction from inputs like '1/4' or '0.25', otherwise a float."""
    text = str(text).strip()
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def _parse_pair(text: str) -> tuple:
    parts = [x for x in str(text).split(",")]
    if len(parts) != 2:
        raise ValueError("Expected a pair 'x,alpha', got '%s'." % text)
    return parse_fraction(parts[0]), parse_fraction(parts[1])


def run_freeboson(radius: float, bibrane: str, target: str, hyper: HyperParameter = None) -> dict:
    """Fuse a free boson bi-brane, given as fractions 'u,a' of the position and Wilson periods, with a target
    'd0:u', 'd1:a' or 'bibrane:u,a', and check the result against the correspondence computation."""
    radius = float(radius)
    u, a = _parse_pair(bibrane)
    defect = FreeBosonBiBrane(radius, u, a)
    if ":" not in str(target):
        raise ValueError("Target must be 'd0:u', 'd1:a' or 'bibrane:u,a', got '%s'." % target)
    kind, value = str(target).split(":", 1)
    if kind == "d0":
        brane = D0Brane(radius, parse_fraction(value))
        fused = fuse_defect_d0(defect, brane)
        oracle = correspondence_d0(defect, brane)
        result = {"kind": "d0", "u": fused.u, "x": fused.x}
    elif kind == "d1":
        brane = D1Brane(radius, parse_fraction(value))
        fused = fuse_defect_d1(defect, brane)
        oracle = correspondence_d1(defect, brane)
        result = {"kind": "d1", "a": fused.a, "alpha": fused.alpha}
    elif kind == "bibrane":
        other = FreeBosonBiBrane(radius, *_parse_pair(value))
        fused = fuse_defects(defect, other)
        oracle = correspondence_bibrane(defect, other)
        result = {"kind": "bibrane", "u": fused.u, "a": fused.a, "x": fused.x, "alpha": fused.alpha}
    else:
        raise ValueError("Unknown fusion target kind '%s'." % kind)
    return {"name": "freeboson_fuse", "schema": 1, "radius": radius, "bibrane": {"u": defect.u, "a": defect.a},
            "result": result, "correspondence": oracle, "passed": bool(oracle["consistent"])}
