import cmath
import math
import logging
import numpy as np
from typing import Union
from gerbecalc.gerbedata.deligne import DeligneSurfaceData, JandlSurfaceData, validate_cocycle, \
    DEFAULT_COCYCLE_TOLERANCE
from gerbecalc.holonomy.lifts import LiftStructure, unoriented_phase
from gerbecalc.holonomy.result import HolonomyResult

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


def holonomy_deligne(data: Union[DeligneSurfaceData, JandlSurfaceData], unoriented_mode: LiftStructure = None,
                     tolerance: float = DEFAULT_COCYCLE_TOLERANCE) -> HolonomyResult:
    r"""Holonomy of combinatorial local data on a closed surface.

    Oriented :obj:`DeligneSurfaceData` give :math:`\exp(2\pi i (\sum_f b_f + \sum_e a_e)) \prod_v g_v`.
    :obj:`JandlSurfaceData` on the orientation double cover of an unoriented surface are evaluated for the lift
    structure `unoriented_mode`, see :obj:`gerbecalc.holonomy.lifts.unoriented_phase`.

    Args:
        data (DeligneSurfaceData, JandlSurfaceData): Local data, validated with :obj:`validate_cocycle` first.
        unoriented_mode (LiftStructure): Lifts for Jandl data. Default is None, which uses sheet +1 everywhere.
        tolerance (float): Cocycle tolerance. Default is 1e-9.

    Returns:
        HolonomyResult: Holonomy.
    """
    report = validate_cocycle(data, tolerance=tolerance)
    if not report.passed:
        raise ValueError("Local data '%s' fails cocycle validation at %s." % (data.name, report["failing"][:5]))
    if isinstance(data, JandlSurfaceData):
        cover = data.cover
        lifts = LiftStructure.default(cover) if unoriented_mode is None else unoriented_mode
        value, diagnostics = unoriented_phase(cover, data.b, data.eta, data.phi, lifts)
        return HolonomyResult(value, "deligne.unoriented", diagnostics)
    if unoriented_mode is not None:
        raise ValueError("Lift structure given for oriented local data '%s'." % data.name)
    surface = data.surface
    if not surface.is_closed:
        raise ValueError("Surface '%s' is not closed, it has %s boundary edges." % (
            surface.name, len(surface.boundary_edges)))
    if not surface.is_oriented:
        raise ValueError("Deligne data requires an oriented surface, '%s' is %s. Use Jandl data on the double "
                         "cover." % (surface.name, surface.orientability))
    phase = math.fsum(data.b.tolist() + data.a.tolist())
    value = cmath.exp(2j * math.pi * phase) * complex(np.prod(data.g))
    return HolonomyResult(value, "deligne", {"phase": phase, "n_charts": data.n_charts})
