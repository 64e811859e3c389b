import logging
import numpy as np
from typing import Callable
from gerbecalc.mesh.cover import DoubleCover, orientation_double_cover
from gerbecalc.mesh.base import TriangulatedSurface
from gerbecalc.fields.target import TargetSpace
from gerbecalc.fields.maps import SurfaceMap
from gerbecalc.fields.quadrature import face_integrals, DEFAULT_DEGREE, DEFAULT_STEP
from gerbecalc.fields.transport import edge_line_integrals
from gerbecalc.gerbedata.deligne import JandlSurfaceData, validate_cocycle
from gerbecalc.gerbedata.jandl import JandlTrivialData, Involution, make_involution
from gerbecalc.holonomy.lifts import LiftStructure, unoriented_phase
from gerbecalc.holonomy.result import HolonomyResult

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

DEFAULT_EQUIVARIANCE_TOLERANCE = 1e-9


class EquivariantMap:
    r"""Map :math:`\hat{\Phi}` on the total surface of an orientation double cover that intertwines the deck
    transformation with a target involution, :math:`\hat{\Phi} \circ \mathrm{deck} = k \circ \hat{\Phi}`.

    Args:
        cover (DoubleCover): Orientation double cover.
        fmap (SurfaceMap): Map on `cover.total`.
        involution (Involution): Target involution.
    """

    def __init__(self, cover: DoubleCover, fmap: SurfaceMap, involution: Involution):
        if fmap.surface is not cover.total and fmap.surface.n_faces != cover.total.n_faces:
            raise ValueError("Map source '%s' is not the total surface of the cover." % fmap.surface.name)
        if involution.target != fmap.target:
            raise ValueError("Involution target %s does not match map target %s." % (involution.target, fmap.target))
        self.cover = cover
        self.fmap = fmap
        self.involution = involution

    @property
    def target(self) -> TargetSpace:
        return self.fmap.target

    def equivariance_residual(self) -> float:
        """Maximum distance between :math:`\\hat{\\Phi}(\\mathrm{deck}(v))` and :math:`k(\\hat{\\Phi}(v))` over total
        vertices."""
        target = self.target
        worst = 0.0
        for v in range(self.cover.total.n_vertices):
            image = self.fmap.vertex_image(v)
            partner = self.fmap.vertex_image(self.cover.deck_vertices[v])
            worst = max(worst, target.distance(partner, target.reduce(self.involution(image))))
        return worst

    def check(self, tolerance: float = DEFAULT_EQUIVARIANCE_TOLERANCE):
        residual = self.equivariance_residual()
        if residual > tolerance:
            raise ValueError("Map is not deck-equivariant, vertex residual %s exceeds %s." % (residual, tolerance))
        return residual


def equivariant_map_from_function(surface: TriangulatedSurface, target: TargetSpace, function: Callable,
                                  involution, cover: DoubleCover = None) -> EquivariantMap:
    r"""Equivariant map on the double cover of a surface with corner coordinates. Faces on sheet +1 are mapped by
    `function` of the base corner coordinates, faces on sheet -1 by :math:`k \circ` `function`.

    Args:
        surface (TriangulatedSurface): Closed base surface with 'corner_coordinates' metadata.
        target (TargetSpace): Target.
        function (Callable): Map of coordinates to lifted target points.
        involution (Involution, dict, str): Target involution.
        cover (DoubleCover): Cover of `surface`. Default is None, which constructs it.

    Returns:
        EquivariantMap: Map on the total surface.
    """
    involution = make_involution(involution)
    if "corner_coordinates" not in surface.metadata:
        raise ValueError("Surface '%s' has no corner coordinates to evaluate a map on." % surface.name)
    cover = orientation_double_cover(surface) if cover is None else cover
    coordinates = np.asarray(surface.metadata["corner_coordinates"], dtype="float")
    corners = []
    for face in range(cover.total.n_faces):
        images = [np.asarray(function(c), dtype="float") for c in coordinates[cover.projection_faces[face]]]
        if cover.sheet(face) < 0:
            images = [involution(x) for x in images]
        corners.append(images)
    fmap = SurfaceMap(cover.total, target, np.array(corners, dtype="float"))
    return EquivariantMap(cover, fmap, involution)


def jandl_surface_data(data: JandlTrivialData, equivariant_map: EquivariantMap, degree: int = DEFAULT_DEGREE,
                       n_nodes: int = 10, step: float = DEFAULT_STEP) -> JandlSurfaceData:
    r"""Integrate geometric Jandl data over the cells of the double cover: the 2-form over total faces, the line
    bundle connection along total edges and the phase at total vertex images."""
    if data.target != equivariant_map.target:
        raise ValueError("Jandl data target %s does not match map target %s." % (data.target,
                                                                                  equivariant_map.target))
    fmap = equivariant_map.fmap
    b = face_integrals(data.omega, fmap, degree=degree, step=step)
    eta = edge_line_integrals(data.line, fmap, n_nodes=n_nodes, step=step)
    phi = np.array([data.phase(fmap.vertex_image(v)) for v in range(fmap.surface.n_vertices)], dtype="complex")
    return JandlSurfaceData(equivariant_map.cover, b, eta, phi, name=data.name)


def holonomy_unoriented(data: JandlTrivialData, equivariant_map: EquivariantMap, lifts: LiftStructure = None,
                        degree: int = DEFAULT_DEGREE, n_nodes: int = 10, step: float = DEFAULT_STEP,
                        tolerance: float = DEFAULT_EQUIVARIANCE_TOLERANCE,
                        consistency_tolerance: float = 1e-6) -> HolonomyResult:
    r"""Holonomy of a Jandl gerbe :math:`(I_\omega, L, \varphi)` around an unoriented closed surface.

    The map lives on the orientation double cover and must be equivariant on vertices. Face, edge and vertex
    contributions are integrated on the cover with :obj:`jandl_surface_data` and combined for the chosen lifts
    with :obj:`gerbecalc.holonomy.lifts.unoriented_phase`.

    Args:
        data (JandlTrivialData): Jandl data whose involution matches the map.
        equivariant_map (EquivariantMap): Map on the double cover.
        lifts (LiftStructure): Lift choices. Default is None, which uses sheet +1 everywhere.
        degree (int): Face quadrature degree. Default is 4.
        n_nodes (int): Gauss-Legendre nodes per edge. Default is 10.
        step (float): Pushforward step. Default is 1e-5.
        tolerance (float): Equivariance tolerance on vertex images. Default is 1e-9.
        consistency_tolerance (float): Tolerance for the relations of the integrated data, which is recorded in the
            diagnostics. Default is 1e-6.

    Returns:
        HolonomyResult: Holonomy with lift and consistency diagnostics.
    """
    cover = equivariant_map.cover
    if not cover.base.is_closed:
        raise NotImplementedError("Holonomy of unoriented surfaces with boundary is not supported.")
    if data.involution is not None and data.involution.get_config() != equivariant_map.involution.get_config():
        raise ValueError("Jandl data involution %s differs from the map involution %s." % (
            data.involution, equivariant_map.involution))
    residual = equivariant_map.check(tolerance)
    surface_data = jandl_surface_data(data, equivariant_map, degree=degree, n_nodes=n_nodes, step=step)
    report = validate_cocycle(surface_data, tolerance=consistency_tolerance)
    if not report.passed:
        module_logger.warning("Integrated Jandl data '%s' violates its relations, max residual %s." % (
            data.name, report["max_residual"]))
    lifts = LiftStructure.default(cover) if lifts is None else lifts
    value, diagnostics = unoriented_phase(cover, surface_data.b, surface_data.eta, surface_data.phi, lifts)
    diagnostics.update({"equivariance_residual": residual, "consistency_residual": report["max_residual"]})
    return HolonomyResult(value, "unoriented", diagnostics)
