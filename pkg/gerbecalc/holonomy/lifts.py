import cmath
import math
import itertools
import logging
import numpy as np
from gerbecalc.mesh.cover import DoubleCover

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


class LiftStructure:
    r"""Choice of lifts to the orientation double cover entering the holonomy of an unoriented surface.

    * `face_sheets[f]`: sheet +1 or -1 of the lift of base face :math:`f`,
    * `edge_sides[e]`: which face-side, 0 or 1, of base edge :math:`e` provides the lift of the edge if the two
      adjacent face lifts induce opposite orientations on it,
    * `point_refs[v]`: which of the two preimages of base vertex :math:`v`, in increasing id order, is the point
      whose phase is evaluated.

    Args:
        face_sheets (list): Sheet per base face.
        edge_sides (list): Face-side per base edge.
        point_refs (list): Preimage index per base vertex.
    """

    def __init__(self, face_sheets, edge_sides, point_refs):
        self.face_sheets = np.array(face_sheets, dtype="int").reshape(-1)
        self.edge_sides = np.array(edge_sides, dtype="int").reshape(-1)
        self.point_refs = np.array(point_refs, dtype="int").reshape(-1)
        if not np.all(np.abs(self.face_sheets) == 1):
            raise ValueError("Face sheets must be +1 or -1, got %s." % self.face_sheets.tolist())
        for key, values in [("edge_sides", self.edge_sides), ("point_refs", self.point_refs)]:
            if np.any((values != 0) & (values != 1)):
                raise ValueError("Lift choices '%s' must be 0 or 1, got %s." % (key, values.tolist()))

    @classmethod
    def default(cls, cover: DoubleCover):
        base = cover.base
        return cls(np.ones(base.n_faces), np.zeros(base.n_edges), np.zeros(base.n_vertices))

    @classmethod
    def from_face_lifts(cls, cover: DoubleCover, face_lifts, edge_sides=None, point_refs=None):
        """Lift structure from chosen total faces, one over every base face."""
        face_lifts = np.array(face_lifts, dtype="int").reshape(-1)
        base = cover.base
        if len(face_lifts) != base.n_faces:
            raise ValueError("Require one face lift per base face, got %s for %s." % (len(face_lifts),
                                                                                    base.n_faces))
        for f, lift in enumerate(face_lifts):
            if not 0 <= lift < cover.total.n_faces or cover.projection_faces[lift] != f:
                raise ValueError("Total face %s is not a lift of base face %s." % (lift, f))
        sheets = [cover.sheet(lift) for lift in face_lifts]
        return cls(sheets, np.zeros(base.n_edges) if edge_sides is None else edge_sides,
                   np.zeros(base.n_vertices) if point_refs is None else point_refs)

    def check(self, cover: DoubleCover):
        base = cover.base
        for key, values, n in [("face_sheets", self.face_sheets, base.n_faces),
                               ("edge_sides", self.edge_sides, base.n_edges),
                               ("point_refs", self.point_refs, base.n_vertices)]:
            if len(values) != n:
                raise ValueError("Lift choices '%s' require %s entries, got %s." % (key, n, len(values)))

    def face_lifts(self) -> np.ndarray:
        return np.array([DoubleCover.lift_face(f, s) for f, s in enumerate(self.face_sheets)], dtype="int")

    def to_dict(self) -> dict:
        return {"face_sheets": self.face_sheets.tolist(), "edge_sides": self.edge_sides.tolist(),
                "point_refs": self.point_refs.tolist()}

    @classmethod
    def from_dict(cls, config: dict):
        return cls(config["face_sheets"], config["edge_sides"], config["point_refs"])

    def __repr__(self):
        return "LiftStructure(%s)" % self.to_dict()


def count_lifts(cover: DoubleCover) -> int:
    base = cover.base
    return 2 ** (base.n_faces + base.n_edges + base.n_vertices)


def enumerate_lifts(cover: DoubleCover, max_count: int = 2 ** 16):
    """Iterate over every lift structure of a closed surface.

    Args:
        cover (DoubleCover): Orientation double cover.
        max_count (int): Refuse to enumerate more structures. Default is 65536.

    Yields:
        LiftStructure: All combinations of face sheets, edge sides and point references.
    """
    base = cover.base
    n = count_lifts(cover)
    if n > max_count:
        raise ValueError("Surface '%s' has %s lift structures, more than %s. Use `sample_lifts`." % (
            base.name, n, max_count))
    for sheets in itertools.product([1, -1], repeat=base.n_faces):
        for sides in itertools.product([0, 1], repeat=base.n_edges):
            for refs in itertools.product([0, 1], repeat=base.n_vertices):
                yield LiftStructure(sheets, sides, refs)


def sample_lifts(cover: DoubleCover, n: int, seed: int = 0) -> list:
    """Uniformly drawn lift structures with a seeded generator."""
    rng = np.random.default_rng(seed)
    base = cover.base
    return [LiftStructure(rng.choice([1, -1], size=base.n_faces), rng.integers(0, 2, size=base.n_edges),
                          rng.integers(0, 2, size=base.n_vertices)) for _ in range(int(n))]


def vertex_preimages(cover: DoubleCover) -> np.ndarray:
    """The two total vertices over every base vertex in increasing order, shape `(V, 2)`."""
    order = np.argsort(cover.projection_vertices, kind="stable")
    return order.reshape((cover.base.n_vertices, 2))


def unoriented_phase(cover: DoubleCover, b, eta, phi, lifts: LiftStructure) -> tuple:
    r"""Holonomy of an unoriented closed surface from data on its orientation double cover.

    With face lifts :math:`F_f`, the face term is :math:`\sum_f b_{F_f}`. A base edge whose two face lifts
    induce opposite orientations, i.e. whose lifted face-sides lie on different total edges, is orientation
    reversing. Its term is :math:`\rho \, \eta_{\hat{e}}` for the total edge :math:`\hat{e}` of the chosen face-side
    and the induced direction :math:`\rho`. Every such edge is a path from a start to an end preimage. For base
    vertex :math:`x` with reference preimage :math:`r_x`, the phase :math:`\varphi(r_x)` enters with exponent
    :math:`n_x`, the number of paths ending minus the number of paths starting at the other preimage. The result

    .. math::

        \exp\left(2\pi i \left(\sum_f b_{F_f} + \sum_{e} \rho_e \eta_{\hat{e}}\right)\right)
        \prod_x \varphi(r_x)^{n_x}

    does not depend on the lifts for consistent data.

    Args:
        cover (DoubleCover): Orientation double cover of a closed surface.
        b (np.ndarray): Oriented face integrals per total face.
        eta (np.ndarray): Edge integrals per total edge in canonical direction.
        phi (np.ndarray): Unit phases per total vertex.
        lifts (LiftStructure): Lift choices.

    Returns:
        tuple: Complex value and diagnostics dictionary.
    """
    base, total = cover.base, cover.total
    lifts.check(cover)
    b, eta = np.asarray(b, dtype="float"), np.asarray(eta, dtype="float")
    phi = np.asarray(phi, dtype="complex")
    face_lifts = lifts.face_lifts()
    terms = [b[F] for F in face_lifts]
    preimages = vertex_preimages(cover)
    refs = preimages[np.arange(base.n_vertices), lifts.point_refs]
    exponents = np.zeros(base.n_vertices, dtype="int")
    reversing = []
    for e, sides in enumerate(base.edge_sides):
        if len(sides) != 2:
            raise ValueError("Unoriented holonomy requires a closed surface, edge %s has one face-side." % e)
        lifted = [(int(face_lifts[f]), j) for f, j in sides]
        edges = [int(total.side_edge[F, j]) for F, j in lifted]
        if edges[0] == edges[1]:
            continue
        F, j = lifted[lifts.edge_sides[e]]
        e_hat = edges[lifts.edge_sides[e]]
        rho = total.boundary_direction(F, j)
        terms.append(rho * eta[e_hat])
        start, end = total.directed_edge(e_hat, rho)
        if end != refs[cover.projection_vertices[end]]:
            exponents[cover.projection_vertices[end]] += 1
        if start != refs[cover.projection_vertices[start]]:
            exponents[cover.projection_vertices[start]] -= 1
        reversing.append(e)
    value = cmath.exp(2j * math.pi * math.fsum(terms))
    for x in np.nonzero(exponents)[0]:
        value *= complex(phi[refs[x]]) ** int(exponents[x])
    diagnostics = {"orientation_reversing_edges": reversing, "point_exponents": exponents.tolist(),
                   "lifts": lifts.to_dict()}
    return value, diagnostics
