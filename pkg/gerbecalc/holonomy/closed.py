import cmath
import math
import logging
from gerbecalc.fields.forms import FormOracle
from gerbecalc.fields.maps import SurfaceMap
from gerbecalc.fields.quadrature import pullback_integrate, DEFAULT_DEGREE, DEFAULT_STEP
from gerbecalc.holonomy.result import HolonomyResult

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


def check_closed_oriented(fmap: SurfaceMap):
    surface = fmap.surface
    if not surface.is_closed:
        raise ValueError("Surface '%s' is not closed, it has %s boundary edges." % (
            surface.name, len(surface.boundary_edges)))
    if not surface.is_oriented:
        raise ValueError("Surface '%s' is %s, an oriented surface is required." % (
            surface.name, surface.orientability))


def holonomy_closed(omega: FormOracle, fmap: SurfaceMap, degree: int = DEFAULT_DEGREE,
                    step: float = DEFAULT_STEP) -> HolonomyResult:
    r"""Holonomy :math:`\exp(2\pi i \int_\Sigma \Phi^*\omega)` of the trivial gerbe :math:`I_\omega` around a
    closed oriented surface.

    Args:
        omega (FormOracle): 2-form on the target.
        fmap (SurfaceMap): Map from a closed oriented surface.
        degree (int): Quadrature degree. Default is 4.
        step (float): Pushforward step. Default is 1e-5.

    Returns:
        HolonomyResult: Value with the integral and its quadrature error estimate as diagnostics.
    """
    check_closed_oriented(fmap)
    if omega.degree != 2:
        raise ValueError("Closed holonomy requires a 2-form, got degree %s." % omega.degree)
    integral, error = pullback_integrate(omega, fmap, degree=degree, step=step, return_error=True)
    value = cmath.exp(2j * math.pi * integral)
    return HolonomyResult(value, "closed", {"integral": integral, "quadrature_error": error,
                                            "n_faces": fmap.surface.n_faces})
