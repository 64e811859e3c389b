import logging
import numpy as np
from typing import Callable, Iterable, Union
from gerbecalc.mesh.base import rebuild
from gerbecalc.mesh.refine import subdivide
from gerbecalc.mesh.cover import DoubleCover
from gerbecalc.fields.maps import SurfaceMap
from gerbecalc.gerbedata.deligne import DeligneSurfaceData, JandlSurfaceData, random_gauge, gauge_transform, \
    jandl_gauge_transform, random_jandl_gauge
from gerbecalc.gerbedata.report import ValidationReport
from gerbecalc.holonomy.lifts import enumerate_lifts, sample_lifts, count_lifts
from gerbecalc.holonomy.result import HolonomyResult

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


def independence_harness(compute: Callable, variants: Iterable, name: str = "independence",
                         tolerance: float = 1e-12, labels: list = None) -> ValidationReport:
    """Rerun a holonomy computation for a set of variants and report the maximum pairwise deviation.

    Args:
        compute (Callable): Function of one variant returning a :obj:`HolonomyResult` or complex number.
        variants (Iterable): Variants, e.g. gauge transformed data, lift structures or refined maps.
        name (str): Name of the report. Default is 'independence'.
        tolerance (float): Maximum allowed deviation from the first value. Default is 1e-12.
        labels (list): Identifiers of the variants used for failing entries. Default is None.

    Returns:
        ValidationReport: Report with keys 'spread', 'reference' and 'n_variants'.
    """
    values = []
    for variant in variants:
        result = compute(variant)
        values.append(result.value if isinstance(result, HolonomyResult) else complex(result))
    values = np.array(values, dtype="complex")
    if len(values) == 0:
        return ValidationReport(name, True, spread=0.0, n_variants=0, notes=["no variants"])
    deviations = np.abs(values - values[0])
    spread = float(np.max(np.abs(values[:, None] - values[None, :])))
    report = ValidationReport.from_residuals(name, deviations, tolerance, ids=labels, spread=spread,
                                             reference=values[0], n_variants=len(values))
    report["passed"] = bool(report["passed"] and spread <= 2 * tolerance)
    module_logger.info("Harness '%s' ran %s variants, spread %s." % (name, len(values), spread))
    return report


def gauge_variants(data: Union[DeligneSurfaceData, JandlSurfaceData], n: int = 1000, seed: int = 0,
                   scale: float = 1.0) -> list:
    """The data itself followed by `n` random gauge transformations of it."""
    rng = np.random.default_rng(seed)
    out = [data]
    for _ in range(int(n)):
        if isinstance(data, DeligneSurfaceData):
            out.append(gauge_transform(data, random_gauge(data, rng, scale=scale)))
        elif isinstance(data, JandlSurfaceData):
            p, lam = random_jandl_gauge(data, rng, scale=scale)
            out.append(jandl_gauge_transform(data, p=p, lam=lam))
        else:
            raise TypeError("Can not gauge transform data of type %s." % type(data))
    return out


def lift_variants(cover: DoubleCover, n_samples: int = 100, seed: int = 0, max_exhaustive: int = 2 ** 12) -> list:
    """Every lift structure if there are at most `max_exhaustive`, otherwise `n_samples` random ones."""
    if count_lifts(cover) <= max_exhaustive:
        return list(enumerate_lifts(cover, max_count=max_exhaustive))
    module_logger.info("Sampling %s of %s lift structures." % (n_samples, count_lifts(cover)))
    return sample_lifts(cover, max(int(n_samples), 100), seed=seed)


def subdivision_variants(fmap: SurfaceMap, levels: int = 2) -> list:
    """The map and its transfers onto `levels` successive barycentric subdivisions."""
    out = [fmap]
    for _ in range(int(levels)):
        fmap = fmap.refine(subdivide(fmap.surface))
        out.append(fmap)
    return out


def rotation_variants(fmap: SurfaceMap) -> list:
    """The map on copies of its surface whose boundary circles start at every possible basepoint."""
    surface = fmap.surface
    if len(surface.boundary_circles) == 0:
        return [fmap]
    out = []
    for n in range(max(len(c) for c in surface.boundary_circles)):
        boundary = [c.rotated(n % len(c)).to_refs() for c in surface.boundary_circles]
        out.append(fmap.with_surface(rebuild(surface, boundary=boundary)))
    return out
