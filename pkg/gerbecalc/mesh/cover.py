import numpy as np
from gerbecalc.mesh.base import TriangulatedSurface, build_surface
from gerbecalc.mesh.adj import face_components, corner_classes


class DoubleCover:
    r"""Orientation double cover :math:`\hat{\Sigma} \rightarrow \Sigma` of a closed surface.

    Total face `2f` is the positively oriented lift of base face `f` and `2f+1` the negatively oriented one, both
    with the corner order of the base face. The deck involution maps cells to their partner on the other sheet, which
    for faces is `F ^ 1`. For total edges, `edge_delta[e]` is +1 if the deck preserves the canonical edge direction
    and -1 otherwise.

    Attributes:
        base (TriangulatedSurface): Base surface.
        total (TriangulatedSurface): Oriented total surface.
        deck_faces, deck_edges, deck_vertices (np.ndarray): Deck involution on cells.
        projection_faces, projection_edges, projection_vertices (np.ndarray): Projection onto base cells.
        edge_delta (np.ndarray): Direction behaviour of deck on total edges.
    """

    def __init__(self, base: TriangulatedSurface, total: TriangulatedSurface, deck_vertices, projection_vertices):
        self.base = base
        self.total = total
        self.deck_faces = np.arange(total.n_faces) ^ 1
        self.projection_faces = np.arange(total.n_faces) // 2
        self.deck_vertices = np.array(deck_vertices, dtype="int")
        self.projection_vertices = np.array(projection_vertices, dtype="int")
        self.deck_edges = np.array([total.side_edge[f ^ 1, j] for f, j in
                                    [s[0] for s in total.edge_sides]], dtype="int")
        self.projection_edges = np.array([base.side_edge[f // 2, j] for f, j in
                                          [s[0] for s in total.edge_sides]], dtype="int")
        self.edge_delta = np.array([total.side_sign[f, j] * total.side_sign[f ^ 1, j] for f, j in
                                    [s[0] for s in total.edge_sides]], dtype="int")

    @staticmethod
    def lift_face(f: int, sheet: int) -> int:
        """Total face over base face `f` on sheet +1 or -1."""
        return 2 * int(f) + (0 if sheet > 0 else 1)

    def sheet(self, face: int) -> int:
        """Orientation flag of a total face relative to the corner order of its base face."""
        return int(self.total.flags[face])

    def lift_side_edge(self, f: int, j: int, sheet: int) -> int:
        return int(self.total.side_edge[self.lift_face(f, sheet), j])

    def n_components(self) -> int:
        return len(face_components(self.total.n_faces, self.total.edge_sides))

    def check(self) -> bool:
        """Exhaustive check of the cover axioms: deck is a fixed-point-free involution that commutes with the
        projection, the projection is 2-to-1 and deck reverses the orientation of the total surface."""
        for deck, proj, n_base in [(self.deck_faces, self.projection_faces, self.base.n_faces),
                                   (self.deck_edges, self.projection_edges, self.base.n_edges),
                                   (self.deck_vertices, self.projection_vertices, self.base.n_vertices)]:
            if not np.all(deck[deck] == np.arange(len(deck))) or np.any(deck == np.arange(len(deck))):
                return False
            if not np.all(proj[deck] == proj):
                return False
            if not np.all(np.bincount(proj, minlength=n_base) == 2):
                return False
        if not np.all(self.total.flags[self.deck_faces] == -self.total.flags):
            return False
        return True


def orientation_double_cover(surface: TriangulatedSurface) -> DoubleCover:
    r"""Construct the orientation double cover of a closed surface.

    A base gluing of sides :math:`(f_1, j_1)` and :math:`(f_2, j_2)` with side signs :math:`\sigma_1, \sigma_2` lifts
    to a gluing of sheet :math:`s_1` over :math:`f_1` with sheet :math:`s_2 = -s_1 \sigma_1 \sigma_2` over
    :math:`f_2`, so that the total surface is oriented by its sheet flags.

    Args:
        surface (TriangulatedSurface): Closed base surface.

    Returns:
        DoubleCover: Cover with oriented total surface.
    """
    if not surface.is_closed:
        raise ValueError("Orientation double cover requires a closed surface, got %s boundary edges." %
                         len(surface.boundary_edges))
    n_total = 2 * surface.n_faces
    gluings = []
    for e, ((f1, j1), (f2, j2)) in enumerate(surface.edge_sides):
        opposite = surface.gluing_opposite[e]
        sign = int(surface.side_sign[f1, j1] * surface.side_sign[f2, j2])
        for s1 in [1, -1]:
            s2 = -s1 * sign
            t1, t2 = DoubleCover.lift_face(f1, s1), DoubleCover.lift_face(f2, s2)
            gluings.append([t1, j1, t2, j2, int(opposite)])
    classes = corner_classes(n_total, gluings)
    vertex_of_corner = {corner: i for i, comp in enumerate(classes) for corner in comp}
    faces = np.array([[vertex_of_corner[(t, c)] for c in range(3)] for t in range(n_total)], dtype="int")
    flags = np.array([1 if t % 2 == 0 else -1 for t in range(n_total)], dtype="int")
    deck_vertices = np.array([vertex_of_corner[(comp[0][0] ^ 1, comp[0][1])] for comp in classes], dtype="int")
    projection_vertices = np.array([surface.faces[comp[0][0] // 2, comp[0][1]] for comp in classes], dtype="int")

    metadata = {"sheet": flags.copy()}
    if "corner_coordinates" in surface.metadata:
        metadata["corner_coordinates"] = np.repeat(np.asarray(surface.metadata["corner_coordinates"]), 2, axis=0)
    total = build_surface(faces, n_vertices=len(classes), flags=flags, oriented=True, gluings=gluings,
                          euler_characteristic=2 * surface.euler_characteristic,
                          name="%s/cover" % surface.name, metadata=metadata, infer_gluings=False)
    return DoubleCover(surface, total, deck_vertices, projection_vertices)
