import logging
import numpy as np
from typing import Union
from gerbecalc.mesh.base import TriangulatedSurface, surface_from_dict
from gerbecalc.mesh.cover import DoubleCover, orientation_double_cover
from gerbecalc.data.utils import complex_from_pairs, complex_to_pairs
from gerbecalc.gerbedata.report import ValidationReport, merge_reports

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

DEFAULT_COCYCLE_TOLERANCE = 1e-9


class DeligneSurfaceData:
    r"""Local data of a gerbe with connection, integrated over the cells of an oriented triangulated surface.

    Every face :math:`f` lies in one chart :math:`\alpha(f)`. The numbers stored per cell are

    * `b[f]`: :math:`\int_f B_{\alpha(f)}` with the orientation of the surface,
    * `a[e]`: :math:`\int_e A_{\alpha_1 \alpha_2}` for the charts :math:`\alpha_1, \alpha_2` of the first and second
      face-side of edge :math:`e`, integrated along the boundary direction of the first face-side. Swapping the
      order of the face-sides flips the sign. Boundary edges and edges inside one chart carry zero,
    * `g[v]`: the unit complex value of the triple-overlap function at vertex :math:`v`.

    The holonomy of the data is :math:`\exp(2\pi i (\sum_f b_f + \sum_e a_e)) \prod_v g_v`.

    Args:
        surface (TriangulatedSurface): Surface the data lives on.
        chart_of_face (np.ndarray): Chart index per face.
        b (np.ndarray): Face values of shape `(F, )`.
        a (np.ndarray): Edge values of shape `(E, )`.
        g (np.ndarray): Complex vertex values of shape `(V, )`.
        name (str): Name of the data. Default is None.
    """

    edge_convention = "first_side"

    def __init__(self, surface: TriangulatedSurface, chart_of_face, b, a, g, name: str = None):
        self.surface = surface
        self.chart_of_face = np.array(chart_of_face, dtype="int").reshape(-1)
        self.b = np.array(b, dtype="float").reshape(-1)
        self.a = np.array(a, dtype="float").reshape(-1)
        self.g = np.array(g, dtype="complex").reshape(-1)
        self.name = name
        for key, values, n in [("chart_of_face", self.chart_of_face, surface.n_faces),
                               ("b", self.b, surface.n_faces), ("a", self.a, surface.n_edges),
                               ("g", self.g, surface.n_vertices)]:
            if len(values) != n:
                raise ValueError("Local data '%s' requires %s entries, got %s." % (key, n, len(values)))
        if np.any(self.chart_of_face < 0):
            raise ValueError("Chart indices must be non-negative.")

    @property
    def n_charts(self) -> int:
        return int(np.max(self.chart_of_face)) + 1

    def edge_charts(self, e: int) -> tuple:
        """Charts of the first and second face-side of edge `e`, equal for boundary edges."""
        sides = self.surface.edge_sides[e]
        return int(self.chart_of_face[sides[0][0]]), int(self.chart_of_face[sides[-1][0]])

    def vertex_charts(self, v: int) -> list:
        """Sorted charts of the faces incident to vertex `v`."""
        faces = np.nonzero(np.any(self.surface.faces == v, axis=-1))[0]
        return sorted(set(self.chart_of_face[faces].tolist()))

    def copy(self):
        return DeligneSurfaceData(self.surface, self.chart_of_face, self.b, self.a, self.g, name=self.name)

    def to_dict(self) -> dict:
        return {"schema": 1, "kind": "deligne", "name": self.name, "mesh": self.surface.to_dict(),
                "chart_of_face": self.chart_of_face.tolist(), "b": self.b.tolist(), "a": self.a.tolist(),
                "g": complex_to_pairs(self.g), "edge_convention": self.edge_convention}

    @classmethod
    def from_dict(cls, data: dict, surface: TriangulatedSurface = None):
        """Load from the json local-data format `{"mesh", "chart_of_face", "b", "a", "g"}`. The mesh is either given
        inline or as `surface`."""
        for key in ["chart_of_face", "b", "a", "g"]:
            if key not in data:
                raise ValueError("Local data requires '%s'." % key)
        if surface is None:
            if not isinstance(data.get("mesh", None), dict):
                raise ValueError("Local data requires an inline 'mesh' or a surface.")
            surface = surface_from_dict(data["mesh"])
        return cls(surface, data["chart_of_face"], data["b"], data["a"], complex_from_pairs(data["g"]),
                   name=data.get("name", None))

    def __repr__(self):
        return "DeligneSurfaceData(name=%s, charts=%s, surface=%s)" % (self.name, self.n_charts, self.surface)


class DeligneGauge:
    r"""Coboundary acting on :obj:`DeligneSurfaceData`: a real number `lam[e, alpha]` per edge and chart,
    integrated along the canonical edge direction, and a unit complex transition phase `chi[e]` per pair of
    adjacent vertices. The phase is constant along the edge and belongs to the charts :math:`\alpha_1, \alpha_2` of
    its first and second face-side, so it is 1 on boundary edges and on edges inside one chart."""

    def __init__(self, lam, chi):
        self.lam = np.array(lam, dtype="float")
        self.chi = np.array(chi, dtype="complex").reshape(-1)
        if self.lam.ndim != 2:
            raise ValueError("Gauge requires lam of shape (E, C), got %s." % (self.lam.shape, ))
        if len(self.chi) != self.lam.shape[0]:
            raise ValueError("Gauge requires one phase per edge, got %s for %s edges." % (len(self.chi),
                                                                                       self.lam.shape[0]))
        if np.max(np.abs(np.abs(self.chi) - 1.0), initial=0.0) > 1e-12:
            raise ValueError("Transition phases must have modulus one.")

    @classmethod
    def zeros(cls, data: DeligneSurfaceData):
        return cls(np.zeros((data.surface.n_edges, data.n_charts)), np.ones(data.surface.n_edges))

    def inverse(self):
        return DeligneGauge(-self.lam, np.conj(self.chi))

    def check_shapes(self, data: DeligneSurfaceData):
        if self.lam.shape != (data.surface.n_edges, data.n_charts):
            raise ValueError("Edge gauge shape %s does not match %s edges and %s charts." % (
                self.lam.shape, data.surface.n_edges, data.n_charts))
        for e in range(data.surface.n_edges):
            alpha1, alpha2 = data.edge_charts(e)
            if (alpha1 == alpha2 or len(data.surface.edge_sides[e]) == 1) and abs(self.chi[e] - 1.0) > 1e-12:
                raise ValueError("Edge %s lies in one chart and can not carry transition phase %s." % (
                    e, self.chi[e]))


def random_gauge(data: DeligneSurfaceData, rng: np.random.Generator, scale: float = 1.0,
                 phases: bool = True, edges: bool = True) -> DeligneGauge:
    """Random chart-respecting coboundary with normal edge values of width `scale` and uniform transition phases
    on the edges between two charts. Either part can be switched off."""
    n_e, c = data.surface.n_edges, data.n_charts
    lam = scale * rng.normal(size=(n_e, c)) if edges else np.zeros((n_e, c))
    chi = np.ones(n_e, dtype="complex")
    if phases:
        angles = rng.uniform(-np.pi, np.pi, size=n_e)
        for e in data.surface.interior_edges:
            alpha1, alpha2 = data.edge_charts(e)
            if alpha1 != alpha2:
                chi[e] = np.exp(1j * angles[e])
    return DeligneGauge(lam, chi)


def gauge_transform(data: DeligneSurfaceData, gauge: DeligneGauge) -> DeligneSurfaceData:
    r"""Shift local data by the Deligne coboundary of a gauge.

    With :math:`d_e` the boundary direction of the first face-side of :math:`e` and tail :math:`t` and head
    :math:`h` along it:

    * :math:`b_f \mathrel{+}= \sum_j \epsilon_f \sigma_{f,j} \lambda_{e(f,j), \alpha(f)}`,
    * :math:`a_e \mathrel{+}= d_e (\lambda_{e,\alpha_2} - \lambda_{e,\alpha_1})`,
    * :math:`g_t \mathrel{*}= \chi_e` and :math:`g_h \mathrel{*}= \chi_e^{-1}` for every interior edge.

    Transition phases are constant along edges, so they leave `b` and `a` unchanged. On a closed surface all
    shifts cancel in the holonomy.

    Args:
        data (DeligneSurfaceData): Local data.
        gauge (DeligneGauge): Gauge cochain.

    Returns:
        DeligneSurfaceData: Transformed data.
    """
    gauge.check_shapes(data)
    surface = data.surface
    b, a, g = data.b.copy(), data.a.copy(), data.g.copy()
    for f in range(surface.n_faces):
        alpha = data.chart_of_face[f]
        b[f] += sum(surface.boundary_direction(f, j) * gauge.lam[surface.side_edge[f, j], alpha] for j in range(3))
    for e in surface.interior_edges:
        (f1, j1), _ = surface.edge_sides[e]
        alpha1, alpha2 = data.edge_charts(e)
        d = surface.boundary_direction(f1, j1)
        tail, head = surface.directed_edge(e, d)
        a[e] += d * (gauge.lam[e, alpha2] - gauge.lam[e, alpha1])
        g[tail] *= gauge.chi[e]
        g[head] /= gauge.chi[e]
    return DeligneSurfaceData(surface, data.chart_of_face, b, a, g, name=data.name)


def trivial_data(surface: TriangulatedSurface, name: str = "trivial") -> DeligneSurfaceData:
    """Data with one chart, `b=0`, `a=0` and `g=1`."""
    return DeligneSurfaceData(surface, np.zeros(surface.n_faces, dtype="int"), np.zeros(surface.n_faces),
                              np.zeros(surface.n_edges), np.ones(surface.n_vertices), name=name)


def flat_torus_data(surface: TriangulatedSurface, theta: float) -> DeligneSurfaceData:
    r"""Flat gerbe on a torus parameterized by an angle: faces alternate between two charts, `b=0`, `a=0` and
    the vertex phases multiply to :math:`e^{i\theta}`. The phase sits at the first vertex touching both charts.

    Args:
        surface (TriangulatedSurface): Closed oriented surface with at least two faces.
        theta (float): Angle.

    Returns:
        DeligneSurfaceData: Local data with holonomy :math:`e^{i\theta}`.
    """
    if surface.n_faces < 2:
        raise ValueError("Flat torus data requires at least two faces, got %s." % surface.n_faces)
    charts = np.arange(surface.n_faces) % 2
    g = np.ones(surface.n_vertices, dtype="complex")
    data = DeligneSurfaceData(surface, charts, np.zeros(surface.n_faces), np.zeros(surface.n_edges), g,
                              name="flat_torus")
    for v in range(surface.n_vertices):
        if len(data.vertex_charts(v)) > 1:
            data.g[v] = np.exp(1j * float(theta))
            return data
    raise ValueError("No vertex of '%s' touches both charts." % surface.name)


class JandlSurfaceData:
    r"""Combinatorial data of a Jandl gerbe pulled back to the orientation double cover of a closed surface.

    * `b[F]`: integral of the 2-form over total face :math:`F` with the orientation of the total surface,
    * `eta[e]`: integral of the connection 1-form of the line bundle :math:`L` along the canonical direction of
      total edge :math:`e`,
    * `phi[v]`: unit complex value of the isomorphism :math:`\varphi: k^*L \rightarrow L` at total vertex :math:`v`.

    With :math:`\rho_{F,j} = \epsilon_F \sigma_{F,j}`, :math:`\hat{F}` the deck partner and :math:`\delta_e` the
    direction behaviour of the deck on edges, consistent data satisfy
    :math:`b_F - b_{\hat{F}} + \sum_j \rho_{F,j} \eta_{e(F,j)} = 0`,
    :math:`\varphi(v) \varphi(\hat{v}) = 1` and
    :math:`\exp(2\pi i (\eta_e - \delta_e \eta_{\hat{e}})) = \varphi(h) / \varphi(t)`.
    """

    def __init__(self, cover: DoubleCover, b, eta, phi, name: str = None):
        self.cover = cover
        total = cover.total
        self.b = np.array(b, dtype="float").reshape(-1)
        self.eta = np.array(eta, dtype="float").reshape(-1)
        self.phi = np.array(phi, dtype="complex").reshape(-1)
        self.name = name
        for key, values, n in [("b", self.b, total.n_faces), ("eta", self.eta, total.n_edges),
                               ("phi", self.phi, total.n_vertices)]:
            if len(values) != n:
                raise ValueError("Jandl data '%s' requires %s entries on the double cover, got %s." % (
                    key, n, len(values)))

    @property
    def surface(self) -> TriangulatedSurface:
        return self.cover.base

    def rho(self, face: int, j: int) -> int:
        return int(self.cover.total.boundary_direction(face, j))

    def copy(self):
        return JandlSurfaceData(self.cover, self.b, self.eta, self.phi, name=self.name)

    def to_dict(self) -> dict:
        return {"schema": 1, "kind": "jandl", "name": self.name, "mesh": self.cover.base.to_dict(),
                "b": self.b.tolist(), "eta": self.eta.tolist(), "phi": complex_to_pairs(self.phi)}

    @classmethod
    def from_dict(cls, data: dict, surface: TriangulatedSurface = None):
        for key in ["b", "eta", "phi"]:
            if key not in data:
                raise ValueError("Jandl data requires '%s'." % key)
        if surface is None:
            if not isinstance(data.get("mesh", None), dict):
                raise ValueError("Jandl data requires an inline 'mesh' or a surface.")
            surface = surface_from_dict(data["mesh"])
        return cls(orientation_double_cover(surface), data["b"], data["eta"], complex_from_pairs(data["phi"]),
                   name=data.get("name", None))

    def __repr__(self):
        return "JandlSurfaceData(name=%s, base=%s)" % (self.name, self.cover.base)


def constant_jandl_data(surface: TriangulatedSurface, phi: complex = 1.0, name: str = None) -> JandlSurfaceData:
    """Flat data with `b=0`, `eta=0` and constant `phi`, which must be +1 or -1."""
    if abs(complex(phi) ** 2 - 1.0) > 1e-12:
        raise ValueError("Constant Jandl phase must be +1 or -1, got %s." % phi)
    cover = orientation_double_cover(surface)
    total = cover.total
    return JandlSurfaceData(cover, np.zeros(total.n_faces), np.zeros(total.n_edges),
                            np.full(total.n_vertices, complex(phi)), name=name)


def jandl_gauge_transform(data: JandlSurfaceData, p=None, lam=None) -> JandlSurfaceData:
    r"""Gauge transformation of Jandl data by a real `p` per total edge and a real `lam` per total vertex:

    * :math:`b_F \mathrel{+}= \sum_j \rho_{F,j} p_{e(F,j)}` and
      :math:`\eta_e \mathrel{-}= p_e + \delta_e p_{\hat{e}}`,
    * :math:`\eta_e \mathrel{+}= (\lambda_h - \lambda_t) / 2\pi` and
      :math:`\varphi_v \mathrel{*}= e^{i(\lambda_v - \lambda_{\hat{v}})}`.

    Both preserve the consistency relations and the unoriented holonomy for every choice of lifts.
    """
    cover, total = data.cover, data.cover.total
    p = np.zeros(total.n_edges) if p is None else np.array(p, dtype="float").reshape(-1)
    lam = np.zeros(total.n_vertices) if lam is None else np.array(lam, dtype="float").reshape(-1)
    if len(p) != total.n_edges or len(lam) != total.n_vertices:
        raise ValueError("Jandl gauge requires %s edge and %s vertex entries, got %s and %s." % (
            total.n_edges, total.n_vertices, len(p), len(lam)))
    b = data.b.copy()
    for f in range(total.n_faces):
        b[f] += sum(data.rho(f, j) * p[total.side_edge[f, j]] for j in range(3))
    eta = data.eta - p - cover.edge_delta * p[cover.deck_edges]
    tails, heads = total.edge_vertices[:, 0], total.edge_vertices[:, 1]
    eta = eta + (lam[heads] - lam[tails]) / (2 * np.pi)
    phi = data.phi * np.exp(1j * (lam - lam[cover.deck_vertices]))
    return JandlSurfaceData(cover, b, eta, phi, name=data.name)


def random_jandl_gauge(data: JandlSurfaceData, rng: np.random.Generator, scale: float = 1.0) -> tuple:
    total = data.cover.total
    return scale * rng.normal(size=total.n_edges), rng.uniform(-np.pi, np.pi, size=total.n_vertices)


def _deligne_residuals(data: DeligneSurfaceData, tolerance: float) -> list:
    surface = data.surface
    vertex_res = []
    for v in range(surface.n_vertices):
        g = data.g[v]
        if not np.isfinite(g):
            vertex_res.append(np.inf)
            continue
        res = abs(abs(g) - 1.0)
        if len(data.vertex_charts(v)) == 1:
            res = max(res, abs(g - 1.0))
        vertex_res.append(res)
    edge_res = []
    for e in range(surface.n_edges):
        alpha1, alpha2 = data.edge_charts(e)
        if not np.isfinite(data.a[e]):
            edge_res.append(np.inf)
        elif alpha1 == alpha2 or len(surface.edge_sides[e]) == 1:
            edge_res.append(abs(data.a[e]))
        else:
            edge_res.append(0.0)
    face_res = [0.0 if np.isfinite(x) else np.inf for x in data.b]
    return [
        ValidationReport.from_residuals("vertex", vertex_res, tolerance, ids=[["vertex", v] for v in
                                                                              range(surface.n_vertices)]),
        ValidationReport.from_residuals("edge", edge_res, tolerance, ids=[["edge", e] for e in
                                                                          range(surface.n_edges)]),
        ValidationReport.from_residuals("face", face_res, tolerance, ids=[["face", f] for f in
                                                                          range(surface.n_faces)]),
    ]


def _jandl_residuals(data: JandlSurfaceData, tolerance: float) -> list:
    cover, total = data.cover, data.cover.total
    phi = data.phi
    with np.errstate(invalid="ignore", over="ignore"):
        vertex_res = np.maximum(np.abs(np.abs(phi) - 1.0), np.abs(phi * phi[cover.deck_vertices] - 1.0))
        face_res = []
        for f in range(0, total.n_faces, 2):
            value = data.b[f] - data.b[f ^ 1] + sum(data.rho(f, j) * data.eta[total.side_edge[f, j]] for j in range(3))
            face_res.append(abs(value))
        tails, heads = total.edge_vertices[:, 0], total.edge_vertices[:, 1]
        shift = np.exp(2j * np.pi * (data.eta - cover.edge_delta * data.eta[cover.deck_edges]))
        edge_res = np.abs(shift - phi[heads] / phi[tails])
    vertex_res = np.where(np.isfinite(vertex_res), vertex_res, np.inf)
    face_res = np.where(np.isfinite(face_res), face_res, np.inf)
    edge_res = np.where(np.isfinite(edge_res), edge_res, np.inf)
    return [
        ValidationReport.from_residuals("vertex", vertex_res, tolerance, ids=[["vertex", v] for v in
                                                                              range(total.n_vertices)]),
        ValidationReport.from_residuals("edge", edge_res, tolerance, ids=[["edge", e] for e in
                                                                          range(total.n_edges)]),
        ValidationReport.from_residuals("face", face_res, tolerance, ids=[["face", f] for f in
                                                                          range(cover.base.n_faces)]),
    ]


def validate_cocycle(data: Union[DeligneSurfaceData, JandlSurfaceData],
                     tolerance: float = DEFAULT_COCYCLE_TOLERANCE) -> ValidationReport:
    r"""Check the consistency of combinatorial local data cell by cell.

    For :obj:`DeligneSurfaceData` vertex phases must have modulus one and be trivial at vertices inside one chart,
    and edges inside one chart must carry zero. For :obj:`JandlSurfaceData` the three relations of the class
    docstring are checked. All values must be finite.

    Args:
        data (DeligneSurfaceData, JandlSurfaceData): Local data.
        tolerance (float): Maximum residual. Default is 1e-9.

    Returns:
        ValidationReport: Report listing failing cells as `[kind, id]`.
    """
    if isinstance(data, DeligneSurfaceData):
        parts = _deligne_residuals(data, tolerance)
    elif isinstance(data, JandlSurfaceData):
        parts = _jandl_residuals(data, tolerance)
    else:
        raise TypeError("Can not validate local data of type %s." % type(data))
    report = merge_reports("cocycle", parts)
    report["failing"] = [f for _, f in report["failing"]]
    report["tolerance"] = float(tolerance)
    report["data"] = data.name
    return report
