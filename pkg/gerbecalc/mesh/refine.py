import logging
import numpy as np
from gerbecalc.mesh.base import TriangulatedSurface, Circle, build_surface
from gerbecalc.mesh.adj import face_components, corner_classes

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

# Corner barycentrics of the two sub-faces over local edge j, before cyclic relabelling.
_HALF = 0.5
_THIRD = 1.0 / 3.0


def _subface_barycentrics(j: int) -> tuple:
    e = np.eye(3)
    mid = _HALF * (e[j] + e[(j + 1) % 3])
    center = np.full(3, _THIRD)
    return np.array([e[j], mid, center]), np.array([mid, e[(j + 1) % 3], center])


def subdivide(surface: TriangulatedSurface) -> TriangulatedSurface:
    r"""Barycentric subdivision of a surface.

    New vertex `V + e` is the midpoint of edge `e` and `V + E + f` the barycenter of face `f`. Face `f` is replaced by
    the six faces `6f + 2j = (c_j, m_j, b)` and `6f + 2j + 1 = (m_j, c_{j+1}, b)` which keep the flag of `f`.
    Boundary and defect circles are refined along. The metadata holds the parent face and the corner barycentrics
    in the parent for every new face, such that maps can be refined exactly.

    Args:
        surface (TriangulatedSurface): Surface to subdivide.

    Returns:
        TriangulatedSurface: Subdivided surface with 6F faces.
    """
    n_v, n_e, n_f = surface.n_vertices, surface.n_edges, surface.n_faces
    faces, flags, parents, barycentric = [], [], [], []
    gluings = []
    for f in range(n_f):
        b = n_v + n_e + f
        for j in range(3):
            c0, c1 = int(surface.faces[f, j]), int(surface.faces[f, (j + 1) % 3])
            m = n_v + int(surface.side_edge[f, j])
            faces.extend([[c0, m, b], [m, c1, b]])
            flags.extend([surface.flags[f]] * 2)
            parents.extend([f, f])
            barycentric.extend(_subface_barycentrics(j))
            gluings.append([6 * f + 2 * j, 1, 6 * f + 2 * j + 1, 2, 1])
            gluings.append([6 * f + 2 * j + 1, 1, 6 * f + 2 * ((j + 1) % 3), 2, 1])
    for e, sides in enumerate(surface.edge_sides):
        if len(sides) != 2:
            continue
        (f1, j1), (f2, j2) = sides
        a1, b1 = 6 * f1 + 2 * j1, 6 * f1 + 2 * j1 + 1
        a2, b2 = 6 * f2 + 2 * j2, 6 * f2 + 2 * j2 + 1
        if surface.gluing_opposite[e]:
            gluings.extend([[a1, 0, b2, 0, 1], [b1, 0, a2, 0, 1]])
        else:
            gluings.extend([[a1, 0, a2, 0, 0], [b1, 0, b2, 0, 0]])

    def refine_circle(circle: Circle) -> list:
        refs = []
        for f, j, r in circle.sides:
            if r == 1:
                refs.extend([[6 * f + 2 * j, 0], [6 * f + 2 * j + 1, 0]])
            else:
                refs.extend([[6 * f + 2 * j + 1, 0, -1], [6 * f + 2 * j, 0, -1]])
        return refs

    barycentric = np.array(barycentric)
    metadata = {"parent_face": np.array(parents, dtype="int"), "parent_barycentric": barycentric,
                "level": int(surface.metadata.get("level", 0)) + 1}
    if "corner_coordinates" in surface.metadata:
        coords = np.asarray(surface.metadata["corner_coordinates"], dtype="float")
        metadata["corner_coordinates"] = np.einsum("fij,fjk->fik", barycentric, coords[metadata["parent_face"]])
    return build_surface(
        np.array(faces, dtype="int"), n_vertices=n_v + n_e + n_f, flags=np.array(flags, dtype="int"),
        oriented=True if surface.is_oriented else False, gluings=gluings,
        boundary=[refine_circle(c) for c in surface.boundary_circles],
        defects=[refine_circle(c) for c in surface.defect_circles],
        defect_separates=list(surface.defect_separates),
        euler_characteristic=surface.euler_characteristic,
        name=surface.name, metadata=metadata, infer_gluings=False)


class CutSurface:
    r"""Surface cut open along one defect circle :math:`S`.

    Face indices of the cut surface equal those of the original. The circles `plus` and `minus` both run in the
    direction of :math:`S`. `plus` is the copy on the faces whose induced boundary direction agrees with
    :math:`S`, i.e. the boundary of the region :math:`\Sigma_1`, while `minus` bounds :math:`\Sigma_2` with the
    opposite orientation.

    Attributes:
        surface (TriangulatedSurface): Cut surface with two more boundary circles.
        original (TriangulatedSurface): Surface before cutting.
        defect_index (int): Index of the cut defect circle.
        plus (Circle): Circle on the cut surface over :math:`S` on the :math:`\Sigma_1` side.
        minus (Circle): Circle on the cut surface over :math:`S` on the :math:`\Sigma_2` side.
        components (list): Face lists of connected components.
        vertex_origin (np.ndarray): Original vertex of each cut vertex.
    """

    def __init__(self, surface, original, defect_index, plus, minus, vertex_origin):
        self.surface = surface
        self.original = original
        self.defect_index = defect_index
        self.plus = plus
        self.minus = minus
        self.vertex_origin = np.array(vertex_origin, dtype="int")
        self.components = face_components(surface.n_faces, surface.edge_sides)

    @property
    def separates(self) -> bool:
        return len(self.components) > len(face_components(self.original.n_faces, self.original.edge_sides))

    def component_of_face(self, f: int) -> int:
        for i, c in enumerate(self.components):
            if f in c:
                return i
        raise ValueError("Face %s not in cut surface." % f)

    @property
    def plus_component(self) -> int:
        return self.component_of_face(self.plus.sides[0][0])

    @property
    def minus_component(self) -> int:
        return self.component_of_face(self.minus.sides[0][0])


def cut_along_defect(surface: TriangulatedSurface, index: int = 0) -> CutSurface:
    """Cut an oriented surface open along its defect circle `index`.

    Args:
        surface (TriangulatedSurface): Oriented surface carrying defect circles.
        index (int): Defect circle to cut along. Default is 0.

    Returns:
        CutSurface: Cut surface with its two new boundary circles.
    """
    if not surface.is_oriented:
        raise ValueError("Cutting along a defect requires an oriented surface.")
    if not 0 <= index < len(surface.defect_circles):
        raise ValueError("Surface has no defect circle %s." % index)
    circle = surface.defect_circles[index]
    cut_edges = set(circle.edges)

    plus_refs, minus_refs = [], []
    for e, d in zip(circle.edges, circle.directions):
        for f, j in surface.edge_sides[e]:
            if surface.boundary_direction(f, j) == d:
                plus_refs.append([f, j] if surface.flags[f] == 1 else [f, j, -1])
            else:
                minus_refs.append([f, j] if -surface.flags[f] == 1 else [f, j, -1])

    gluings = []
    for e, sides in enumerate(surface.edge_sides):
        if len(sides) != 2 or e in cut_edges:
            continue
        (f1, j1), (f2, j2) = sides
        opposite = surface.gluing_opposite[e]
        gluings.append([f1, j1, f2, j2, int(opposite)])
    classes = corner_classes(surface.n_faces, gluings)
    vertex_of_corner = {corner: i for i, comp in enumerate(classes) for corner in comp}
    faces = np.array([[vertex_of_corner[(f, c)] for c in range(3)] for f in range(surface.n_faces)], dtype="int")
    vertex_origin = [int(surface.faces[comp[0][0], comp[0][1]]) for comp in classes]

    other_defects = [c.to_refs() for i, c in enumerate(surface.defect_circles) if i != index]
    cut = build_surface(
        faces, n_vertices=len(classes), flags=surface.flags, oriented=True, gluings=gluings,
        boundary=[c.to_refs() for c in surface.boundary_circles] + [plus_refs, [
            r[:2] if len(r) == 3 else r[:2] + [-1] for r in minus_refs[::-1]]],
        defects=other_defects, euler_characteristic=surface.euler_characteristic,
        name="%s/cut%s" % (surface.name, index), metadata=surface.metadata, infer_gluings=False)
    plus = cut.circle_from_refs(plus_refs)
    minus = cut.circle_from_refs(minus_refs)
    module_logger.debug("Cut along defect %s gives %s components." % (index, len(face_components(
        cut.n_faces, cut.edge_sides))))
    return CutSurface(cut, surface, index, plus, minus, vertex_origin)
