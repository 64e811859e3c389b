import logging
import numpy as np
from typing import Callable
from gerbecalc.mesh.base import TriangulatedSurface, Circle
from gerbecalc.fields.target import TargetSpace, FlatTarget, SU2Target, ProductTarget, make_target
from gerbecalc.ops.quaternion import qnormalize

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

DEFAULT_SEAM_TOLERANCE = 1e-9
DEFAULT_FACE_ANGLE_TOLERANCE = 1e-9


class SurfaceMap:
    r"""Piecewise smooth map :math:`\Phi: \Sigma \rightarrow M` from a triangulated surface into a target space.

    The map is stored per face as lifted corner images of shape `(F, 3, ambient_dim)`. On flat targets a face is
    mapped affinely in lifted coordinates, which makes windings along edges explicit. On :math:`SU(2)` a face is
    mapped by the normalized blend :math:`\sum_i \lambda_i q_i / |\sum_i \lambda_i q_i|`, which restricts to the
    great-circle arc on every edge. Product targets interpolate each factor separately.

    Args:
        surface (TriangulatedSurface): Source surface.
        target (TargetSpace): Target space.
        corners (np.ndarray): Lifted corner images per face.
        function (Callable): Optional map of corner coordinates, which is used for exact refinement.
        check (bool): Whether to check seams and face sizes. Default is True.
    """

    def __init__(self, surface: TriangulatedSurface, target: TargetSpace, corners, function: Callable = None,
                 check: bool = True, seam_tolerance: float = DEFAULT_SEAM_TOLERANCE,
                 face_angle_tolerance: float = DEFAULT_FACE_ANGLE_TOLERANCE):
        self.surface = surface
        self.target = target
        self.corners = np.array(corners, dtype="float")
        self.function = function
        if self.corners.shape != (surface.n_faces, 3, target.ambient_dim):
            raise ValueError("Corner images must have shape %s, got %s." % (
                (surface.n_faces, 3, target.ambient_dim), self.corners.shape))
        if not np.all(np.isfinite(self.corners)):
            raise ValueError("Corner images must be finite.")
        self._face_angle_tolerance = face_angle_tolerance
        if check:
            self.check_face_size()
            residual = self.check_seams()
            if residual > seam_tolerance:
                raise ValueError("Edge lifts are inconsistent, seam mismatch %s exceeds %s." % (
                    residual, seam_tolerance))

    @classmethod
    def from_lifted_faces(cls, surface, target, corners, **kwargs):
        return cls(surface, target, corners, **kwargs)

    @classmethod
    def from_function(cls, surface: TriangulatedSurface, target: TargetSpace, function: Callable,
                      coordinates=None, **kwargs):
        """Map given by a function of corner coordinates, evaluated at `surface.metadata['corner_coordinates']`.

        Args:
            surface (TriangulatedSurface): Source surface.
            target (TargetSpace): Target space.
            function (Callable): Function mapping an array of coordinates of shape `(..., d)` to lifted points.
            coordinates (np.ndarray): Corner coordinates of shape `(F, 3, d)`. Default is None.

        Returns:
            SurfaceMap: Map.
        """
        if coordinates is None:
            if "corner_coordinates" not in surface.metadata:
                raise ValueError("Surface '%s' has no corner coordinates to evaluate a map on." % surface.name)
            coordinates = surface.metadata["corner_coordinates"]
        coordinates = np.asarray(coordinates, dtype="float")
        corners = np.array([[function(c) for c in face] for face in coordinates], dtype="float")
        return cls(surface, target, corners, function=function, **kwargs)

    @classmethod
    def from_vertex_images(cls, surface: TriangulatedSurface, target: TargetSpace, vertex_images,
                           edge_windings=None, **kwargs):
        r"""Map from images of vertices plus integer windings per edge.

        On flat targets the lifted displacement along the canonical direction of edge :math:`e` from tail :math:`u`
        to head :math:`w` is :math:`x_w - x_u + L \cdot n_e` with winding vector :math:`n_e`. Corners of each face are
        assembled from the first corner by these displacements, so the displacements of every face must sum to zero.

        Args:
            surface (TriangulatedSurface): Source surface.
            target (TargetSpace): Target space.
            vertex_images (np.ndarray): One point per vertex.
            edge_windings (np.ndarray): Winding integers per edge and target dimension. Default is None (all zero).

        Returns:
            SurfaceMap: Map.
        """
        images = np.array(vertex_images, dtype="float").reshape((surface.n_vertices, target.ambient_dim))
        if not isinstance(target, FlatTarget):
            if edge_windings is not None and np.any(np.asarray(edge_windings) != 0):
                raise ValueError("Edge windings are only defined for circle and torus targets.")
            corners = images[surface.faces]
            return cls(surface, target, corners, **kwargs)
        windings = np.zeros((surface.n_edges, target.dim), dtype="int") if edge_windings is None else np.array(
            edge_windings, dtype="int").reshape((surface.n_edges, target.dim))
        tails, heads = surface.edge_vertices[:, 0], surface.edge_vertices[:, 1]
        displacement = images[heads] - images[tails] + windings * target.periods
        corners = np.zeros((surface.n_faces, 3, target.ambient_dim))
        for f in range(surface.n_faces):
            corners[f, 0] = images[surface.faces[f, 0]]
            steps = [surface.side_sign[f, j] * displacement[surface.side_edge[f, j]] for j in range(3)]
            if np.max(np.abs(np.sum(steps, axis=0))) > 1e-9 * (1.0 + np.max(target.periods)):
                raise ValueError("Edge windings of face %s do not close up, seam mismatch." % f)
            corners[f, 1] = corners[f, 0] + steps[0]
            corners[f, 2] = corners[f, 1] + steps[1]
        return cls(surface, target, corners, **kwargs)

    def lifted(self, face: int, bary) -> np.ndarray:
        """Lifted image of the point with barycentric coordinates `bary` in `face`. No range check."""
        bary = np.asarray(bary, dtype="float")
        return _blend(self.target, self.corners[face], bary)

    def interpolate(self, face: int, bary) -> np.ndarray:
        """Image of the point with barycentric coordinates `bary` in `face`, reduced to the fundamental domain.

        Args:
            face (int): Face index.
            bary (np.ndarray): Non-negative barycentric coordinates summing to one.

        Returns:
            np.ndarray: Point of the target.
        """
        bary = np.asarray(bary, dtype="float")
        if bary.shape != (3, ) or np.any(bary < -1e-12) or abs(np.sum(bary) - 1.0) > 1e-12:
            raise ValueError("Barycentric coordinates must be non-negative and sum to one, got %s." % bary)
        return self.target.reduce(self.lifted(face, bary))

    def vertex_image(self, v: int) -> np.ndarray:
        """Reduced image of vertex `v` taken from its first corner."""
        f, c = np.argwhere(self.surface.faces == v)[0]
        return self.target.reduce(self.corners[f, c])

    def check_seams(self) -> float:
        """Maximum distance between the two images of every interior edge midpoint and every corner of a vertex."""
        worst = 0.0
        for sides in self.surface.edge_sides:
            if len(sides) != 2:
                continue
            points = []
            for f, j in sides:
                bary = np.zeros(3)
                bary[j] = bary[(j + 1) % 3] = 0.5
                points.append(self.target.reduce(self.lifted(f, bary)))
            worst = max(worst, self.target.distance(points[0], points[1]))
        for v in range(self.surface.n_vertices):
            images = [self.target.reduce(self.corners[f, c]) for f, c in np.argwhere(self.surface.faces == v)]
            worst = max([worst] + [self.target.distance(images[0], x) for x in images[1:]])
        return worst

    def check_face_size(self):
        """Reject faces mapped to SU(2) with a corner pair further apart than a quarter turn."""
        for target, corners in _su2_factors(self.target, self.corners):
            dots = np.stack([np.sum(corners[:, i] * corners[:, (i + 1) % 3], axis=-1) for i in range(3)], axis=-1)
            angles = np.arccos(np.clip(dots, -1.0, 1.0))
            if np.max(angles) > np.pi / 2 + self._face_angle_tolerance:
                f = int(np.argmax(np.max(angles, axis=-1)))
                raise ValueError("Face %s spans angle %s > pi/2 on SU(2), subdivide the surface." % (
                    f, np.max(angles)))

    def refine(self, subdivided: TriangulatedSurface) -> "SurfaceMap":
        """Transfer the map onto a subdivision made by :obj:`gerbecalc.mesh.refine.subdivide`."""
        if "parent_face" not in subdivided.metadata:
            raise ValueError("Surface '%s' carries no subdivision provenance." % subdivided.name)
        if self.function is not None and "corner_coordinates" in subdivided.metadata:
            return SurfaceMap.from_function(subdivided, self.target, self.function, check=False)
        parents = subdivided.metadata["parent_face"]
        bary = subdivided.metadata["parent_barycentric"]
        corners = np.array([[self.lifted(parents[f], b) for b in bary[f]] for f in range(subdivided.n_faces)])
        return SurfaceMap(subdivided, self.target, corners, check=False)

    def with_surface(self, surface: TriangulatedSurface) -> "SurfaceMap":
        """Same corner images on a surface with identical faces, e.g. a reoriented or cut surface."""
        if surface.n_faces != self.surface.n_faces:
            raise ValueError("Surface face count %s does not match map %s." % (surface.n_faces, self.surface.n_faces))
        return SurfaceMap(surface, self.target, self.corners, function=self.function, check=False)

    def restrict_faces(self, faces: list) -> np.ndarray:
        return self.corners[np.asarray(faces, dtype="int")]

    def to_dict(self) -> dict:
        return {"schema": 1, "target": self.target.get_config(), "corners": self.corners.tolist()}


def _blend(target: TargetSpace, corners: np.ndarray, bary: np.ndarray) -> np.ndarray:
    if isinstance(target, ProductTarget):
        a, b = target.split(corners)
        return np.concatenate([_blend(target.first, a, bary), _blend(target.second, b, bary)], axis=-1)
    point = np.tensordot(bary, corners, axes=(0, 0))
    if isinstance(target, SU2Target):
        return qnormalize(point)
    return point


def _su2_factors(target: TargetSpace, corners: np.ndarray):
    if isinstance(target, SU2Target):
        return [(target, corners)]
    if isinstance(target, ProductTarget):
        a, b = target.split(corners)
        return _su2_factors(target.first, a) + _su2_factors(target.second, b)
    return []


def affine_function(target: TargetSpace, config: dict) -> Callable:
    r"""Affine map :math:`x \mapsto A x + c` of corner coordinates from the keys 'matrix' and 'offset' of a map
    dictionary. The matrix has one row per ambient coordinate of the target."""
    matrix = np.array(config["matrix"], dtype="float")
    matrix = matrix.reshape((target.ambient_dim, -1))
    offset = np.array(config.get("offset", np.zeros(target.ambient_dim)), dtype="float").reshape(-1)
    if len(offset) != target.ambient_dim:
        raise ValueError("Map offset must have %s entries, got %s." % (target.ambient_dim, len(offset)))

    def function(x):
        return matrix @ np.asarray(x, dtype="float") + offset

    return function


def map_from_dict(surface: TriangulatedSurface, config: dict, **kwargs) -> SurfaceMap:
    """Load a map from the json map format with 'target' and either 'corners', 'vertex_images' with optional
    'edge_windings', or an affine 'matrix' with optional 'offset' acting on the corner coordinates of the surface."""
    if not isinstance(config, dict) or "target" not in config:
        raise ValueError("Map dictionary requires 'target'.")
    target = make_target(config["target"])
    if "corners" in config:
        return SurfaceMap(surface, target, config["corners"], **kwargs)
    if "vertex_images" in config:
        return SurfaceMap.from_vertex_images(surface, target, config["vertex_images"],
                                             config.get("edge_windings", None), **kwargs)
    if "matrix" in config:
        return SurfaceMap.from_function(surface, target, affine_function(target, config), **kwargs)
    raise ValueError("Map dictionary requires 'corners', 'vertex_images' or 'matrix'.")


class Loop:
    r"""Closed piecewise smooth path :math:`\gamma: S^1 \rightarrow M`, made of segments parametrized over
    :math:`[0, 1]`. Built from a :obj:`Circle` on the source of a :obj:`SurfaceMap` or as product of two loops with
    the same number of segments, whose image lies in the product target."""

    def __init__(self, target: TargetSpace, segments: list):
        if len(segments) == 0:
            raise ValueError("Loop requires at least one segment.")
        self.target = target
        self.segments = list(segments)

    @classmethod
    def from_circle(cls, fmap: SurfaceMap, circle: Circle, tolerance: float = 1e-9):
        """Loop traced by the map along a circle of its surface.

        Args:
            fmap (SurfaceMap): Surface map.
            circle (Circle): Closed circle on the source surface.
            tolerance (float): Closure tolerance. Default is 1e-9.

        Returns:
            Loop: Image loop.
        """
        segments = []
        for f, j, r in circle.sides:
            start, end = np.zeros(3), np.zeros(3)
            a, b = (j, (j + 1) % 3) if r == 1 else ((j + 1) % 3, j)
            start[a], end[b] = 1.0, 1.0
            segments.append((fmap, f, start, end))
        loop = cls(fmap.target, segments)
        loop.check_closed(tolerance)
        return loop

    @classmethod
    def product(cls, first: "Loop", second: "Loop", target: ProductTarget = None):
        if len(first.segments) != len(second.segments):
            raise ValueError("Product loop requires equal segment counts, got %s and %s." % (
                len(first.segments), len(second.segments)))
        target = ProductTarget(first.target, second.target) if target is None else target
        return cls(target, [("product", a, b) for a, b in zip(first.as_loops(), second.as_loops())])

    def as_loops(self) -> list:
        return [Loop(self.target, [s]) for s in self.segments]

    def _segment_point(self, segment, t: float) -> np.ndarray:
        if segment[0] == "product":
            return np.concatenate([segment[1].point(0, t), segment[2].point(0, t)], axis=-1)
        fmap, f, start, end = segment
        return fmap.lifted(f, (1 - t) * start + t * end)

    def point(self, i: int, t: float) -> np.ndarray:
        """Lifted point of segment `i` at parameter `t`."""
        return self._segment_point(self.segments[i], t)

    def velocity(self, i: int, t: float, step: float = 1e-5) -> np.ndarray:
        """Central finite-difference velocity of segment `i`."""
        return (self.point(i, t + step) - self.point(i, t - step)) / (2 * step)

    def check_closed(self, tolerance: float = 1e-9):
        n = len(self.segments)
        for i in range(n):
            a = self.target.reduce(self.point(i, 1.0))
            b = self.target.reduce(self.point((i + 1) % n, 0.0))
            if self.target.distance(a, b) > tolerance:
                raise ValueError("Loop is open between segment %s and %s." % (i, (i + 1) % n))

    def rotated(self, n: int) -> "Loop":
        n = int(n) % len(self.segments)
        return Loop(self.target, self.segments[n:] + self.segments[:n])

    def reversed(self) -> "Loop":
        return Loop(self.target, [_reverse_segment(s) for s in self.segments[::-1]])

    def __len__(self):
        return len(self.segments)


def _reverse_segment(segment):
    if segment[0] == "product":
        return "product", segment[1].reversed(), segment[2].reversed()
    fmap, f, start, end = segment
    return fmap, f, end, start
