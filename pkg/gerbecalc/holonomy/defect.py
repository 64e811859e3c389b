import cmath
import math
import logging
import numpy as np
from typing import Callable
from gerbecalc.mesh.base import TriangulatedSurface
from gerbecalc.mesh.refine import CutSurface, cut_along_defect
from gerbecalc.fields.forms import FormOracle
from gerbecalc.fields.target import TargetSpace, ProductTarget
from gerbecalc.fields.maps import SurfaceMap, Loop
from gerbecalc.fields.quadrature import face_integrals, DEFAULT_DEGREE, DEFAULT_STEP
from gerbecalc.fields.transport import holonomy_trace
from gerbecalc.gerbedata.branes import BiBraneRecord, DEFAULT_MEMBERSHIP_TOLERANCE
from gerbecalc.holonomy.result import HolonomyResult

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


class SplitMap:
    r"""Map of a surface cut along a defect circle :math:`S` into two targets, :math:`\Phi_1: \Sigma_1 \rightarrow
    M_1` on the side bounded by :math:`S` and :math:`\Phi_2: \Sigma_2 \rightarrow M_2` on the side bounded by
    :math:`-S`.

    Both maps are given on the whole cut surface, only the faces of their region are evaluated. If the circle does
    not separate, both sides belong to one region, which requires a single map.

    Args:
        cut (CutSurface): Surface cut along the defect.
        first (SurfaceMap): Map on the cut surface used on :math:`\Sigma_1`.
        second (SurfaceMap): Map used on :math:`\Sigma_2`. Default is None, which uses `first`.
    """

    def __init__(self, cut: CutSurface, first: SurfaceMap, second: SurfaceMap = None):
        second = first if second is None else second
        for fmap in [first, second]:
            if fmap.surface.n_faces != cut.surface.n_faces:
                raise ValueError("Split map source '%s' is not the cut surface." % fmap.surface.name)
        if not cut.separates and second is not first:
            raise ValueError("Defect circle does not separate, the two sides require a single map.")
        self.cut = cut
        self.first = first
        self.second = second

    @property
    def target(self) -> ProductTarget:
        return ProductTarget(self.first.target, self.second.target)

    def regions(self) -> tuple:
        """Face lists of :math:`\\Sigma_1` and :math:`\\Sigma_2`, identical for a non-separating circle."""
        cut = self.cut
        return cut.components[cut.plus_component], cut.components[cut.minus_component]

    def defect_loop(self) -> Loop:
        r"""Loop :math:`(\Phi_1, \Phi_2)(S)` in the product target."""
        return Loop.product(Loop.from_circle(self.first, self.cut.plus),
                            Loop.from_circle(self.second, self.cut.minus), target=self.target)

    def defect_points(self) -> np.ndarray:
        """Images of the vertices of :math:`S` in the product target."""
        surface = self.cut.surface
        plus, minus = surface.circle_vertices(self.cut.plus), surface.circle_vertices(self.cut.minus)
        return np.array([np.concatenate([self.first.vertex_image(a), self.second.vertex_image(b)])
                         for a, b in zip(plus, minus)])


def split_map_from_functions(surface: TriangulatedSurface, target1: TargetSpace, function1: Callable,
                             target2: TargetSpace = None, function2: Callable = None, index: int = 0) -> SplitMap:
    """Cut a surface with corner coordinates along defect `index` and map the two sides by functions of the
    coordinates. Without a second function the surface is mapped by one function into `target1`."""
    cut = cut_along_defect(surface, index)
    first = SurfaceMap.from_function(cut.surface, target1, function1)
    if function2 is None:
        return SplitMap(cut, first)
    second = SurfaceMap.from_function(cut.surface, target1 if target2 is None else target2, function2)
    return SplitMap(cut, first, second)


def glue_split_map(split: SplitMap, tolerance: float = 1e-9) -> SurfaceMap:
    """Map on the uncut surface for a split map whose two sides agree along the defect circle."""
    if split.first is not split.second:
        if split.first.target != split.second.target:
            raise ValueError("Sides map into different targets %s and %s." % (split.first.target,
                                                                             split.second.target))
        _, region2 = split.regions()
        corners = split.first.corners.copy()
        corners[region2] = split.second.corners[region2]
    else:
        corners = split.first.corners
    glued = SurfaceMap(split.cut.original, split.first.target, corners, check=False)
    residual = glued.check_seams()
    if residual > tolerance:
        raise ValueError("Split map does not glue, seam mismatch %s along the defect." % residual)
    return glued


def holonomy_defect(rho1: FormOracle, rho2: FormOracle, bibrane: BiBraneRecord, split_map: SplitMap,
                    degree: int = DEFAULT_DEGREE, step: float = DEFAULT_STEP, n_nodes: int = 10,
                    transport_tolerance: float = 1e-8,
                    tolerance: float = DEFAULT_MEMBERSHIP_TOLERANCE) -> HolonomyResult:
    r"""Holonomy :math:`\exp(2\pi i \int_{\Sigma_1} \rho_1) \exp(2\pi i \int_{\Sigma_2} \rho_2)
    \mathrm{tr}\, \mathrm{Hol}_E((\Phi_1, \Phi_2)(S))` of a surface with one defect circle labelled by a bi-brane.

    If the circle does not separate, :math:`\Sigma_1 = \Sigma_2` is one region, which carries :math:`\rho_1`.

    Args:
        rho1 (FormOracle): 2-form on :math:`M_1`.
        rho2 (FormOracle): 2-form on :math:`M_2`.
        bibrane (BiBraneRecord): Bi-brane in :math:`M_1 \times M_2` with bundle of rank at least one.
        split_map (SplitMap): Map of the cut surface.
        degree (int): Quadrature degree. Default is 4.
        step (float): Pushforward step. Default is 1e-5.
        n_nodes (int): Gauss-Legendre nodes per segment. Default is 10.
        transport_tolerance (float): Step-halving tolerance of path-ordered transport. Default is 1e-8.
        tolerance (float): World-volume membership tolerance. Default is 1e-9.

    Returns:
        HolonomyResult: Value, in general not of modulus one.
    """
    cut = split_map.cut
    surface = cut.surface
    if bibrane.rank < 1:
        raise ValueError("Bi-brane '%s' has a rank 0 bundle." % bibrane.name)
    if bibrane.target != split_map.target:
        raise ValueError("Bi-brane target %s does not match split map target %s." % (bibrane.target,
                                                                                    split_map.target))
    if rho1.target != split_map.first.target or rho2.target != split_map.second.target:
        raise ValueError("2-forms on %s and %s do not match the split map targets." % (rho1.target, rho2.target))
    if surface.boundary_orientation_sign(cut.plus) != 1 or surface.boundary_orientation_sign(cut.minus) != -1:
        raise ValueError("Defect circle orientation mismatch, the first region must be bounded by S and the second "
                         "by -S.")
    for i, p in enumerate(split_map.defect_points()):
        if not bibrane.world_volume.contains(p, tolerance):
            raise ValueError("Defect circle leaves bi-brane world volume '%s' at vertex %s." % (
                bibrane.world_volume.name, i))

    region1, region2 = split_map.regions()
    integral1 = math.fsum(face_integrals(rho1, split_map.first, degree=degree, step=step, faces=region1))
    if cut.separates:
        integral2 = math.fsum(face_integrals(rho2, split_map.second, degree=degree, step=step, faces=region2))
    else:
        integral2 = 0.0
    trace = holonomy_trace(bibrane.bundle, split_map.defect_loop(), n_nodes=n_nodes, tolerance=transport_tolerance,
                           step=step)
    value = cmath.exp(2j * math.pi * (integral1 + integral2)) * trace
    return HolonomyResult(value, "defect", {"integrals": [integral1, integral2], "trace": trace,
                                            "separates": cut.separates, "rank": bibrane.rank})
