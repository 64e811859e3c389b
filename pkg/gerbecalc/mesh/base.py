import logging
import numpy as np
from typing import Union
from gerbecalc.mesh.adj import face_components, orientation_violations, propagate_orientation

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

ORIENTED = "oriented"
ORIENTABLE = "orientable"
NON_ORIENTABLE = "non-orientable"


class Circle:
    r"""Directed, cyclically ordered cycle of edges on a :obj:`TriangulatedSurface`.

    Every element is stored twice: combinatorially as edge id and direction relative to the canonical edge
    direction, and geometrically as face-side reference `(face, local_edge, r)`. For `r=+1` the circle runs along
    the face-side from corner `j` to corner `j+1`, for `r=-1` the other way round. Reversal and basepoint rotation
    return new circles; circles are never modified in place.
    """

    def __init__(self, edges, directions, sides):
        self.edges = tuple(int(e) for e in edges)
        self.directions = tuple(int(d) for d in directions)
        self.sides = tuple((int(f), int(j), int(r)) for f, j, r in sides)
        if not len(self.edges) == len(self.directions) == len(self.sides):
            raise ValueError("Circle requires matching edges, directions and sides.")
        if len(self.edges) == 0:
            raise ValueError("Circle must contain at least one edge.")

    def __len__(self):
        return len(self.edges)

    def __eq__(self, other):
        return isinstance(other, Circle) and self.edges == other.edges and self.directions == other.directions

    def __hash__(self):
        return hash((self.edges, self.directions))

    def __repr__(self):
        return "Circle(edges=%s, directions=%s)" % (list(self.edges), list(self.directions))

    def reversed(self):
        """Same cycle traversed in the opposite direction."""
        return Circle(self.edges[::-1], [-d for d in self.directions[::-1]],
                      [(f, j, -r) for f, j, r in self.sides[::-1]])

    def rotated(self, n: int):
        """Same cycle starting at element `n`."""
        n = int(n) % len(self)
        return Circle(self.edges[n:] + self.edges[:n], self.directions[n:] + self.directions[:n],
                      self.sides[n:] + self.sides[:n])

    def to_refs(self) -> list:
        """Face-side references as used in the json mesh format."""
        return [[f, j] if r == 1 else [f, j, -1] for f, j, r in self.sides]


class TriangulatedSurface:
    r"""Combinatorial :math:`\Delta`-complex surface made of triangles.

    Faces are ordered vertex triples. Local edge `j` of a face runs from corner `j` to corner `(j+1) % 3`.
    Every edge has one (boundary) or two (interior) face-sides. The first side of an edge in face order defines its
    canonical direction, and `side_sign[f, j]` is +1 if side `(f, j)` runs along it and -1 otherwise.
    The orientation flag :math:`\epsilon_f` of a face says whether its corner order is positively oriented.

    Instances are created by :obj:`build_surface` and treated as immutable. The `orientability` is one of
    'oriented', 'orientable' (orientable, but no orientation was declared) and 'non-orientable'.
    """

    def __init__(self, n_vertices, faces, flags, edge_sides, side_edge, side_sign, gluing_opposite,
                 orientability, boundary_circles=(), defect_circles=(), defect_separates=(), name=None,
                 metadata=None):
        self.n_vertices = int(n_vertices)
        self.faces = _frozen(np.array(faces, dtype="int"))
        self.flags = _frozen(np.array(flags, dtype="int"))
        self.edge_sides = tuple(tuple((int(f), int(j)) for f, j in sides) for sides in edge_sides)
        self.side_edge = _frozen(np.array(side_edge, dtype="int"))
        self.side_sign = _frozen(np.array(side_sign, dtype="int"))
        self.gluing_opposite = tuple(gluing_opposite)
        self.orientability = orientability
        self.boundary_circles = tuple(boundary_circles)
        self.defect_circles = tuple(defect_circles)
        self.defect_separates = tuple(bool(x) for x in defect_separates)
        self.name = name
        self.metadata = dict(metadata) if metadata is not None else {}
        tails = [self.faces[s[0][0], s[0][1]] for s in self.edge_sides]
        heads = [self.faces[s[0][0], (s[0][1] + 1) % 3] for s in self.edge_sides]
        self.edge_vertices = _frozen(np.array([tails, heads], dtype="int").T.reshape((-1, 2)))

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_edges(self) -> int:
        return len(self.edge_sides)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def boundary_edges(self) -> list:
        return [e for e, s in enumerate(self.edge_sides) if len(s) == 1]

    @property
    def interior_edges(self) -> list:
        return [e for e, s in enumerate(self.edge_sides) if len(s) == 2]

    @property
    def is_closed(self) -> bool:
        return len(self.boundary_edges) == 0

    @property
    def is_oriented(self) -> bool:
        return self.orientability == ORIENTED

    @property
    def is_orientable(self) -> bool:
        return self.orientability in [ORIENTED, ORIENTABLE]

    def boundary_direction(self, f: int, j: int) -> int:
        r"""Direction :math:`\epsilon_f \sigma_{f,j}` induced by the boundary of face `f` on its side `j`."""
        return int(self.flags[f] * self.side_sign[f, j])

    def directed_edge(self, e: int, direction: int = 1) -> tuple:
        """Tail and head vertex of edge `e` traversed in `direction`."""
        tail, head = self.edge_vertices[e]
        return (int(tail), int(head)) if direction > 0 else (int(head), int(tail))

    def circle_vertices(self, circle: Circle) -> list:
        """Start vertices of the circle elements in order."""
        return [self.directed_edge(e, d)[0] for e, d in zip(circle.edges, circle.directions)]

    def boundary_orientation_sign(self, circle: Circle) -> int:
        """Return +1 if the circle runs as the induced boundary of the surface, -1 if it runs against it and 0 if
        it is mixed or not made of boundary edges."""
        signs = set()
        for e, d in zip(circle.edges, circle.directions):
            if len(self.edge_sides[e]) != 1:
                return 0
            f, j = self.edge_sides[e][0]
            signs.add(self.boundary_direction(f, j) * d)
        return signs.pop() if len(signs) == 1 else 0

    def circle_from_refs(self, refs) -> Circle:
        """Make a :obj:`Circle` from face-side references `[f, j]` or `[f, j, -1]`."""
        edges, directions, sides = [], [], []
        for ref in refs:
            if len(ref) not in [2, 3]:
                raise ValueError("Edge reference %s must be [face, local_edge] or [face, local_edge, -1]." % ref)
            f, j = int(ref[0]), int(ref[1])
            r = int(ref[2]) if len(ref) == 3 else 1
            if not 0 <= f < self.n_faces or j not in [0, 1, 2] or r not in [1, -1]:
                raise ValueError("Invalid edge reference %s." % ref)
            edges.append(int(self.side_edge[f, j]))
            directions.append(int(self.side_sign[f, j]) * r)
            sides.append((f, j, r))
        return Circle(edges, directions, sides)

    def circle_from_edges(self, edges, directions) -> Circle:
        """Make a :obj:`Circle` from edge ids and directions, using the first side of each edge as geometry."""
        sides = []
        for e, d in zip(edges, directions):
            f, j = self.edge_sides[e][0]
            sides.append((f, j, int(d) * int(self.side_sign[f, j])))
        return Circle(edges, directions, sides)

    def explicit_gluings(self) -> list:
        """All interior edges as explicit gluing entries `[f, j, f2, j2, opposite]`."""
        out = []
        for e, sides in enumerate(self.edge_sides):
            if len(sides) == 2:
                (f1, j1), (f2, j2) = sides
                out.append([f1, j1, f2, j2, int(self.gluing_opposite[e])])
        return out

    def to_dict(self) -> dict:
        """Json mesh dictionary which rebuilds an identical surface with :obj:`surface_from_dict`."""
        out = {
            "schema": 1,
            "name": self.name,
            "vertices": self.n_vertices,
            "faces": self.faces.tolist(),
            "flags": self.flags.tolist(),
            "oriented": True if self.is_oriented else False,
            "gluings": self.explicit_gluings(),
            "boundary": [c.to_refs() for c in self.boundary_circles],
            "defects": [c.to_refs() for c in self.defect_circles],
            "defect_separates": list(self.defect_separates),
            "euler_characteristic": self.euler_characteristic,
            "infer_gluings": False,
        }
        if "corner_coordinates" in self.metadata:
            out["corner_coordinates"] = np.asarray(self.metadata["corner_coordinates"]).tolist()
        return out

    def __repr__(self):
        return "TriangulatedSurface(name=%s, V=%s, E=%s, F=%s, chi=%s, %s)" % (
            self.name, self.n_vertices, self.n_edges, self.n_faces, self.euler_characteristic, self.orientability)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _glue_sides(faces, gluings, infer: bool = True):
    """Pair face-sides from explicit gluings and vertex-pair inference.

    Returns:
        dict: Map side -> (partner side, opposite).
    """
    n_faces = len(faces)
    partner = {}

    def corner(f, c):
        return int(faces[f, c % 3])

    for entry in (gluings if gluings is not None else []):
        if len(entry) != 5:
            raise ValueError("Gluing %s must be [f, j, f2, j2, opposite]." % entry)
        f1, j1, f2, j2, opposite = [int(x) for x in entry]
        if not (0 <= f1 < n_faces and 0 <= f2 < n_faces and j1 in [0, 1, 2] and j2 in [0, 1, 2]):
            raise ValueError("Gluing %s references a face-side that does not exist." % entry)
        if (f1, j1) == (f2, j2):
            raise ValueError("Gluing %s glues a face-side to itself." % entry)
        for side in [(f1, j1), (f2, j2)]:
            if side in partner:
                raise ValueError("Face-side %s is glued more than once." % (side, ))
        if opposite:
            match = corner(f1, j1) == corner(f2, j2 + 1) and corner(f1, j1 + 1) == corner(f2, j2)
        else:
            match = corner(f1, j1) == corner(f2, j2) and corner(f1, j1 + 1) == corner(f2, j2 + 1)
        if not match:
            raise ValueError("Gluing %s does not match vertex ids of the face-sides." % entry)
        partner[(f1, j1)] = ((f2, j2), bool(opposite))
        partner[(f2, j2)] = ((f1, j1), bool(opposite))

    if not infer:
        return partner
    # Remaining sides are paired by their unordered vertex pair.
    groups = {}
    for f in range(n_faces):
        for j in range(3):
            if (f, j) in partner:
                continue
            a, b = corner(f, j), corner(f, j + 1)
            groups.setdefault((min(a, b), max(a, b)), []).append((f, j))
    for key, sides in groups.items():
        if len(sides) > 2:
            raise ValueError("Non-manifold edge between vertices %s with %s face-sides." % (key, len(sides)))
        if len(sides) == 2:
            if key[0] == key[1]:
                raise ValueError("Loop edges at vertex %s can not be paired by vertex ids, use explicit gluings."
                                 % key[0])
            (f1, j1), (f2, j2) = sides
            opposite = corner(f1, j1) == corner(f2, j2 + 1)
            partner[(f1, j1)] = ((f2, j2), opposite)
            partner[(f2, j2)] = ((f1, j1), opposite)
    return partner


def _check_circle(surface: TriangulatedSurface, circle: Circle, kind: str, index: int):
    vertices = surface.circle_vertices(circle)
    for i, (e, d) in enumerate(zip(circle.edges, circle.directions)):
        head = surface.directed_edge(e, d)[1]
        if head != vertices[(i + 1) % len(circle)]:
            raise ValueError("%s circle %s is not a closed cycle at element %s." % (kind, index, i))
    if len(set(vertices)) != len(vertices) or len(set(circle.edges)) != len(circle.edges):
        raise ValueError("%s circle %s is not an embedded cycle." % (kind, index))
    n_sides = 1 if kind == "Boundary" else 2
    for e in circle.edges:
        if len(surface.edge_sides[e]) != n_sides:
            raise ValueError("%s circle %s uses edge %s with %s face-sides." % (
                kind, index, e, len(surface.edge_sides[e])))


def _walk_boundary(surface: TriangulatedSurface) -> list:
    """Assemble boundary edges into circles running along the induced boundary orientation."""
    remaining = {}
    for e in surface.boundary_edges:
        f, j = surface.edge_sides[e][0]
        r = int(surface.flags[f]) if surface.is_oriented else 1
        d = r * int(surface.side_sign[f, j])
        tail = surface.directed_edge(e, d)[0]
        if tail in remaining:
            raise ValueError("Boundary is pinched at vertex %s." % tail)
        remaining[tail] = [f, j] if r == 1 else [f, j, -1]
    circles = []
    while len(remaining) > 0:
        start = min(remaining.keys())
        refs, vertex = [], start
        while True:
            if vertex not in remaining:
                raise ValueError("Boundary edges do not close up at vertex %s." % vertex)
            ref = remaining.pop(vertex)
            refs.append(ref)
            f, j = ref[0], ref[1]
            r = ref[2] if len(ref) == 3 else 1
            vertex = int(surface.faces[f, (j + 1) % 3]) if r == 1 else int(surface.faces[f, j])
            if vertex == start:
                break
        circles.append(surface.circle_from_refs(refs))
    return circles


def build_surface(faces, n_vertices: int = None, flags=None, oriented: bool = None, gluings: list = None,
                  boundary: list = None, defects: list = None, defect_separates: list = None,
                  euler_characteristic: int = None, name: str = None, metadata: dict = None,
                  infer_gluings: bool = True) -> TriangulatedSurface:
    r"""Build and validate a :obj:`TriangulatedSurface` from oriented vertex triples.

    Face-sides are glued by explicit entries `[f, j, f2, j2, opposite]` or, if not listed, by matching unordered
    vertex pairs. An opposite gluing identifies corner `j` with corner `j2+1`, a parallel gluing corner `j` with
    corner `j2`. Orientability is computed by propagation across the dual graph and cross-checked with the
    declared flags.

    Args:
        faces (list): Vertex triples of shape `(F, 3)`.
        n_vertices (int): Number of vertices. Default is None, which uses `max(faces) + 1`.
        flags (list): Orientation flag per face, +1 or -1. Default is None, which means all +1.
        oriented (bool): Declared orientation. True requires consistent flags, False leaves the surface unoriented,
            None orients it if possible. Default is None.
        gluings (list): Explicit gluings. Default is None.
        boundary (list): Boundary circles as lists of edge references. Default is None, which assembles the
            boundary edges into circles automatically.
        defects (list): Defect circles as lists of edge references. Default is None.
        defect_separates (list): Declared separation property per defect circle. Default is None.
        euler_characteristic (int): Declared Euler characteristic. Default is None.
        name (str): Name of the surface. Default is None.
        metadata (dict): Additional information, e.g. 'corner_coordinates'. Default is None.
        infer_gluings (bool): Whether to pair face-sides without explicit gluing by vertex ids. Default is True.

    Returns:
        TriangulatedSurface: Validated surface.
    """
    faces = np.array(faces, dtype="int")
    if len(faces.shape) != 2 or faces.shape[1] != 3 or faces.shape[0] == 0:
        raise ValueError("Surface requires at least one face given as vertex triple, got shape %s." % (
            faces.shape, ))
    if np.any(faces < 0):
        raise ValueError("Vertex ids must be non-negative.")
    n_vertices = int(np.max(faces)) + 1 if n_vertices is None else int(n_vertices)
    if np.max(faces) >= n_vertices:
        raise ValueError("Vertex id %s out of range for %s vertices." % (np.max(faces), n_vertices))
    unused = sorted(set(range(n_vertices)) - set(faces.flatten().tolist()))
    if len(unused) > 0:
        raise ValueError("Vertex %s is not used by any face." % unused[0])
    n_faces = len(faces)
    given_flags = np.ones(n_faces, dtype="int") if flags is None else np.array(flags, dtype="int")
    if given_flags.shape != (n_faces, ) or not np.all(np.abs(given_flags) == 1):
        raise ValueError("Orientation flags must be +1 or -1 per face.")

    partner = _glue_sides(faces, gluings, infer=infer_gluings)
    edge_sides, gluing_opposite = [], []
    side_edge = -np.ones((n_faces, 3), dtype="int")
    side_sign = np.zeros((n_faces, 3), dtype="int")
    for f in range(n_faces):
        for j in range(3):
            if side_edge[f, j] >= 0:
                continue
            e = len(edge_sides)
            side_edge[f, j], side_sign[f, j] = e, 1
            if (f, j) in partner:
                (f2, j2), opposite = partner[(f, j)]
                side_edge[f2, j2], side_sign[f2, j2] = e, -1 if opposite else 1
                edge_sides.append(((f, j), (f2, j2)))
                gluing_opposite.append(bool(opposite))
            else:
                edge_sides.append(((f, j), ))
                gluing_opposite.append(False)

    # Orientation by propagation across the dual graph.
    propagated = propagate_orientation(n_faces, edge_sides, side_sign, seed_flags=given_flags)
    declared_ok = len(orientation_violations(given_flags, edge_sides, side_sign)) == 0
    if oriented is True:
        if propagated is None:
            raise ValueError("Surface is declared oriented but is non-orientable.")
        if not declared_ok:
            raise ValueError("Orientation flags are inconsistent with the declared oriented flag at edge %s." %
                             orientation_violations(given_flags, edge_sides, side_sign)[0])
        orientability, used_flags = ORIENTED, given_flags
    elif oriented is None:
        if propagated is None:
            orientability, used_flags = NON_ORIENTABLE, given_flags
        else:
            if not declared_ok:
                module_logger.warning("Replacing inconsistent orientation flags by propagated orientation.")
            orientability, used_flags = ORIENTED, given_flags if declared_ok else propagated
    else:
        orientability = ORIENTABLE if propagated is not None else NON_ORIENTABLE
        used_flags = given_flags

    surface = TriangulatedSurface(n_vertices, faces, used_flags, edge_sides, side_edge, side_sign, gluing_opposite,
                                  orientability, name=name, metadata=metadata)
    if euler_characteristic is not None and int(euler_characteristic) != surface.euler_characteristic:
        raise ValueError("Declared Euler characteristic %s does not match computed %s." % (
            euler_characteristic, surface.euler_characteristic))

    # Boundary circles.
    if boundary is None:
        boundary_circles = _walk_boundary(surface)
    else:
        boundary_circles = [surface.circle_from_refs(refs) for refs in boundary]
        for i, c in enumerate(boundary_circles):
            _check_circle(surface, c, "Boundary", i)
        covered = sorted(e for c in boundary_circles for e in c.edges)
        if covered != sorted(surface.boundary_edges):
            raise ValueError("Boundary circles must cover every boundary edge exactly once.")

    # Defect circles.
    defect_circles = [surface.circle_from_refs(refs) for refs in (defects if defects is not None else [])]
    used_vertices = set()
    for i, c in enumerate(defect_circles):
        _check_circle(surface, c, "Defect", i)
        vertices = set(surface.circle_vertices(c))
        if len(vertices & used_vertices) > 0:
            raise ValueError("Defect circle %s is not disjoint from the other defect circles." % i)
        used_vertices |= vertices
    n_components = len(face_components(n_faces, edge_sides))
    separates = [len(face_components(n_faces, edge_sides, removed_edges=c.edges)) > n_components
                 for c in defect_circles]
    if defect_separates is not None:
        if len(defect_separates) != len(defect_circles):
            raise ValueError("Need one declared separation flag per defect circle.")
        for i, (declared, computed) in enumerate(zip(defect_separates, separates)):
            if bool(declared) != computed:
                raise ValueError("Defect circle %s is declared %sseparating." % (i, "" if declared else "non-"))

    return TriangulatedSurface(n_vertices, faces, used_flags, edge_sides, side_edge, side_sign, gluing_opposite,
                               orientability, boundary_circles=boundary_circles, defect_circles=defect_circles,
                               defect_separates=separates, name=name, metadata=metadata)


def surface_from_dict(mesh: dict) -> TriangulatedSurface:
    """Build a surface from the json mesh format.

    Args:
        mesh (dict): Dictionary with keys 'faces' and optional 'vertices', 'flags', 'oriented', 'gluings',
            'boundary', 'defects', 'defect_separates', 'euler_characteristic', 'name', 'corner_coordinates'.

    Returns:
        TriangulatedSurface: Validated surface.
    """
    if "faces" not in mesh:
        raise ValueError("Mesh dictionary requires 'faces'.")
    metadata = {}
    if "corner_coordinates" in mesh:
        metadata["corner_coordinates"] = np.array(mesh["corner_coordinates"], dtype="float")
    boundary = mesh.get("boundary", None)
    if boundary is not None and len(boundary) == 0:
        boundary = None
    return build_surface(mesh["faces"], n_vertices=mesh.get("vertices", None), flags=mesh.get("flags", None),
                         oriented=mesh.get("oriented", None), gluings=mesh.get("gluings", None),
                         boundary=boundary, defects=mesh.get("defects", None),
                         defect_separates=mesh.get("defect_separates", None),
                         euler_characteristic=mesh.get("euler_characteristic", None),
                         name=mesh.get("name", None), metadata=metadata,
                         infer_gluings=mesh.get("infer_gluings", True))


def rebuild(surface: TriangulatedSurface, flags=None, oriented: Union[bool, None] = "keep",
            boundary: list = None, defects: list = None, metadata: dict = None,
            name: str = None) -> TriangulatedSurface:
    """Rebuild a surface with the same cells and gluings but modified flags, circles or metadata. Edge ids are
    preserved since they only depend on face order and gluings."""
    if oriented == "keep":
        oriented = True if surface.is_oriented else False
    return build_surface(
        surface.faces, n_vertices=surface.n_vertices,
        flags=surface.flags if flags is None else flags, oriented=oriented,
        gluings=surface.explicit_gluings(),
        boundary=[c.to_refs() for c in surface.boundary_circles] if boundary is None else boundary,
        defects=[c.to_refs() for c in surface.defect_circles] if defects is None else defects,
        name=surface.name if name is None else name,
        metadata=surface.metadata if metadata is None else metadata, infer_gluings=False)


def reverse_orientation(surface: TriangulatedSurface) -> TriangulatedSurface:
    """Flip every face flag and the direction of every boundary and defect circle."""
    return rebuild(surface, flags=-np.array(surface.flags),
                   boundary=[c.reversed().to_refs() for c in surface.boundary_circles],
                   defects=[c.reversed().to_refs() for c in surface.defect_circles])


def components(surface: TriangulatedSurface) -> list:
    """Connected components of the surface as sorted face lists."""
    return face_components(surface.n_faces, surface.edge_sides)


def disjoint_union(surfaces: list, name: str = None) -> TriangulatedSurface:
    """Disjoint union of surfaces. Faces, vertices and circles of later surfaces are shifted behind the earlier ones,
    corner coordinates are kept if every surface carries them."""
    faces, flags, gluings, boundary, defects, separates, coordinates = [], [], [], [], [], [], []
    n_vertices, n_faces = 0, 0
    for s in surfaces:
        faces.append(np.asarray(s.faces) + n_vertices)
        flags.extend(int(x) for x in s.flags)
        gluings += [[f + n_faces, j, f2 + n_faces, j2, o] for f, j, f2, j2, o in s.explicit_gluings()]
        boundary += [[[r[0] + n_faces] + list(r[1:]) for r in c.to_refs()] for c in s.boundary_circles]
        defects += [[[r[0] + n_faces] + list(r[1:]) for r in c.to_refs()] for c in s.defect_circles]
        separates += list(s.defect_separates)
        coordinates.append(s.metadata.get("corner_coordinates", None))
        n_vertices += s.n_vertices
        n_faces += s.n_faces
    metadata = {}
    if all(c is not None for c in coordinates):
        metadata["corner_coordinates"] = np.concatenate([np.asarray(c, dtype="float") for c in coordinates])
    return build_surface(np.concatenate(faces), n_vertices=n_vertices, flags=flags,
                         oriented=True if all(s.is_oriented for s in surfaces) else False, gluings=gluings,
                         boundary=boundary, defects=defects, defect_separates=separates,
                         euler_characteristic=sum(s.euler_characteristic for s in surfaces),
                         name="+".join(str(s.name) for s in surfaces) if name is None else name,
                         metadata=metadata, infer_gluings=False)
