import cmath
import math
import logging
from gerbecalc.fields.forms import FormOracle
from gerbecalc.fields.maps import SurfaceMap, Loop
from gerbecalc.fields.quadrature import pullback_integrate, DEFAULT_DEGREE, DEFAULT_STEP
from gerbecalc.fields.transport import holonomy_trace
from gerbecalc.gerbedata.branes import DBraneRecord, DEFAULT_MEMBERSHIP_TOLERANCE
from gerbecalc.holonomy.result import HolonomyResult

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


def check_boundary_on_brane(fmap: SurfaceMap, circles, brane: DBraneRecord,
                            tolerance: float = DEFAULT_MEMBERSHIP_TOLERANCE):
    """Raise if a vertex image of the given circles lies off the world volume of the brane."""
    surface = fmap.surface
    for i, circle in enumerate(circles):
        for v in surface.circle_vertices(circle):
            p = fmap.vertex_image(v)
            if not brane.world_volume.contains(p, tolerance):
                raise ValueError("Boundary circle %s leaves world volume '%s' at vertex %s with image %s." % (
                    i, brane.world_volume.name, v, p.tolist()))


def holonomy_boundary(rho: FormOracle, brane: DBraneRecord, fmap: SurfaceMap, degree: int = DEFAULT_DEGREE,
                      step: float = DEFAULT_STEP, n_nodes: int = 10, transport_tolerance: float = 1e-8,
                      tolerance: float = DEFAULT_MEMBERSHIP_TOLERANCE) -> HolonomyResult:
    r"""Holonomy :math:`\exp(2\pi i \int_\Sigma \Phi^*\rho) \prod_c \mathrm{tr}\, \mathrm{Hol}_E(\Phi(c))` of an oriented
    surface whose boundary circles are mapped into the world volume of a D-brane with module :math:`E`.

    Args:
        rho (FormOracle): 2-form of the trivialized gerbe on the target.
        brane (DBraneRecord): Brane with module of rank at least one.
        fmap (SurfaceMap): Map from an oriented surface.
        degree (int): Quadrature degree. Default is 4.
        step (float): Pushforward step. Default is 1e-5.
        n_nodes (int): Gauss-Legendre nodes per boundary segment. Default is 10.
        transport_tolerance (float): Step-halving tolerance of path-ordered transport. Default is 1e-8.
        tolerance (float): World-volume membership tolerance. Default is 1e-9.

    Returns:
        HolonomyResult: Value, in general not of modulus one.
    """
    surface = fmap.surface
    if not surface.is_oriented:
        raise ValueError("Surface '%s' is %s, boundary holonomy requires an oriented surface." % (
            surface.name, surface.orientability))
    if brane.rank < 1:
        raise ValueError("D-brane '%s' has a rank 0 module." % brane.name)
    if rho.degree != 2:
        raise ValueError("Boundary holonomy requires a 2-form, got degree %s." % rho.degree)
    for name, target in [("2-form", rho.target), ("brane", brane.target)]:
        if target != fmap.target:
            raise ValueError("Target of %s %s does not match map target %s." % (name, target, fmap.target))
    for i, circle in enumerate(surface.boundary_circles):
        if surface.boundary_orientation_sign(circle) != 1:
            raise ValueError("Boundary circle %s does not run along the induced boundary orientation." % i)
    check_boundary_on_brane(fmap, surface.boundary_circles, brane, tolerance)

    integral, error = pullback_integrate(rho, fmap, degree=degree, step=step, return_error=True)
    value = cmath.exp(2j * math.pi * integral)
    traces = []
    for circle in surface.boundary_circles:
        trace = holonomy_trace(brane.module, Loop.from_circle(fmap, circle), n_nodes=n_nodes,
                               tolerance=transport_tolerance, step=step)
        traces.append(trace)
        value *= trace
    return HolonomyResult(value, "boundary", {"integral": integral, "quadrature_error": error, "traces": traces,
                                              "rank": brane.rank})
