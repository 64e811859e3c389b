import logging
import math
import cmath
import numpy as np
from scipy.linalg import expm
from typing import Callable, Union
from gerbecalc.fields.forms import FormOracle, add_forms, scale_form
from gerbecalc.fields.maps import Loop

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


class GaugeField:
    r"""Connection on a trivial rank :math:`r` vector bundle, given as Hermitian matrix valued 1-form :math:`A`.
    Parallel transport solves :math:`\dot{U} = 2 \pi i A(\dot{\gamma}) U`, so that rank one reproduces
    :math:`\exp(2\pi i \int \omega)`.

    Args:
        rank (int): Rank of the bundle.
        evaluator (Callable): Function `evaluator(p, v)` returning an `(r, r)` Hermitian matrix.
        target (TargetSpace): Base of the bundle.
        name (str): Name. Default is None.
        forms (list): Rank one forms if the field is diagonal. Default is None.
    """

    def __init__(self, rank: int, evaluator: Callable, target, name: str = None, forms: list = None):
        if rank < 1:
            raise ValueError("Bundle rank must be at least 1, got %s." % rank)
        self.rank = int(rank)
        self.evaluator = evaluator
        self.target = target
        self.name = name
        self.forms = forms

    def __call__(self, p, v) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(p, dtype="float"), np.asarray(v, dtype="float")),
                          dtype="complex").reshape((self.rank, self.rank))

    @classmethod
    def from_form(cls, form: FormOracle) -> "GaugeField":
        if form.degree != 1:
            raise ValueError("Line bundle connection requires a 1-form, got degree %s." % form.degree)
        return cls(1, lambda p, v: [[form.evaluator(p, v)]], form.target, name=form.name, forms=[form])

    @property
    def is_diagonal(self) -> bool:
        return self.forms is not None


def as_gauge_field(connection: Union[FormOracle, GaugeField]) -> GaugeField:
    if isinstance(connection, GaugeField):
        return connection
    if isinstance(connection, FormOracle):
        return GaugeField.from_form(connection)
    raise TypeError("Connection must be a 1-form or `GaugeField`, got %s." % type(connection))


def direct_sum(*connections) -> GaugeField:
    """Block diagonal connection on the direct sum of bundles."""
    fields = [as_gauge_field(c) for c in connections]
    rank = sum(f.rank for f in fields)

    def evaluator(p, v):
        out = np.zeros((rank, rank), dtype="complex")
        i = 0
        for f in fields:
            out[i:i + f.rank, i:i + f.rank] = f(p, v)
            i += f.rank
        return out

    forms = sum([f.forms for f in fields], []) if all(f.is_diagonal for f in fields) else None
    return GaugeField(rank, evaluator, fields[0].target, name="+".join(str(f.name) for f in fields), forms=forms)


def tensor_line(connection, line: FormOracle, power: int = -1) -> GaugeField:
    r"""Connection on :math:`E \otimes L^{n}` for a line bundle with connection 1-form `line`, default
    :math:`n=-1`."""
    field = as_gauge_field(connection)

    def evaluator(p, v):
        return field(p, v) + power * line.evaluator(p, v) * np.eye(field.rank)

    forms = None
    if field.is_diagonal:
        forms = [add_forms(f, scale_form(line, power)) for f in field.forms]
    return GaugeField(field.rank, evaluator, field.target, name="%s(x)L^%s" % (field.name, power), forms=forms)


def gauss_legendre_line_integral(form: FormOracle, loop: Loop, n_nodes: int = 10, step: float = 1e-5) -> float:
    r"""Line integral :math:`\int_\gamma \omega` of a 1-form along a loop with Gauss-Legendre quadrature per
    segment."""
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    t_nodes, t_weights = 0.5 * (nodes + 1.0), 0.5 * weights
    values = []
    for i in range(len(loop)):
        for t, w in zip(t_nodes, t_weights):
            values.append(w * form(loop.point(i, t), loop.velocity(i, t, step=step)))
    return math.fsum(values)


def edge_line_integrals(form: FormOracle, fmap, n_nodes: int = 10, step: float = 1e-5) -> np.ndarray:
    """Integral of a 1-form along every edge of the source surface of a map, in the canonical edge direction and
    through the first face-side of the edge."""
    if form.degree != 1:
        raise ValueError("Edge integrals require a 1-form, got degree %s." % form.degree)
    if form.target != fmap.target:
        raise ValueError("Form target %s does not match map target %s." % (form.target, fmap.target))
    out = np.zeros(fmap.surface.n_edges)
    for e, sides in enumerate(fmap.surface.edge_sides):
        f, j = sides[0]
        start, end = np.zeros(3), np.zeros(3)
        start[j], end[(j + 1) % 3] = 1.0, 1.0
        out[e] = gauss_legendre_line_integral(form, Loop(fmap.target, [(fmap, f, start, end)]), n_nodes, step)
    return out


def _segment_transport(field: GaugeField, loop: Loop, i: int, n_steps: int, step: float) -> np.ndarray:
    u = np.eye(field.rank, dtype="complex")
    h = 1.0 / n_steps

    def rhs(t, m):
        return 2j * np.pi * field(loop.point(i, t), loop.velocity(i, t, step=step)).dot(m)

    for n in range(n_steps):
        t = n * h
        k1 = rhs(t, u)
        k2 = rhs(t + 0.5 * h, u + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, u + 0.5 * h * k2)
        k4 = rhs(t + h, u + h * k3)
        u = u + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return u


def path_ordered_transport(field: GaugeField, loop: Loop, tolerance: float = 1e-8, initial_steps: int = 8,
                           max_halvings: int = 14, step: float = 1e-5) -> np.ndarray:
    """Path-ordered transport around a loop with a fourth order Runge-Kutta stepper. On every segment the step
    is halved until the transport changes by less than `tolerance`. Later segments multiply from the left."""
    total = np.eye(field.rank, dtype="complex")
    for i in range(len(loop)):
        n = initial_steps
        u = _segment_transport(field, loop, i, n, step)
        for _ in range(max_halvings):
            n *= 2
            u_fine = _segment_transport(field, loop, i, n, step)
            change = np.max(np.abs(u_fine - u))
            u = u_fine
            if change < tolerance:
                break
        else:
            module_logger.warning("Transport on segment %s did not reach tolerance %s." % (i, tolerance))
        total = u.dot(total)
    return total


def line_holonomy(connection: Union[FormOracle, GaugeField], loop: Loop, n_nodes: int = 10,
                  tolerance: float = 1e-8, initial_steps: int = 8, max_halvings: int = 14,
                  step: float = 1e-5) -> Union[complex, np.ndarray]:
    r"""Holonomy of a connection around a closed loop.

    Rank one connections give the unit complex number :math:`\exp(2 \pi i \int_\gamma \omega)` from Gauss-Legendre
    quadrature. Higher rank gives the path-ordered unitary matrix, except for diagonal fields, whose blocks are
    integrated separately.

    Args:
        connection (FormOracle, GaugeField): Connection 1-form or gauge field.
        loop (Loop): Closed loop.
        n_nodes (int): Gauss-Legendre nodes per segment. Default is 10.
        tolerance (float): Step-halving tolerance for the Runge-Kutta stepper. Default is 1e-8.

    Returns:
        complex, np.ndarray: Holonomy.
    """
    field = as_gauge_field(connection)
    if field.target != loop.target:
        raise ValueError("Connection target %s does not match loop target %s." % (field.target, loop.target))
    loop.check_closed()
    if field.rank == 1 and field.is_diagonal:
        return cmath.exp(2j * math.pi * gauss_legendre_line_integral(field.forms[0], loop, n_nodes, step))
    if field.is_diagonal:
        return np.diag([cmath.exp(2j * math.pi * gauss_legendre_line_integral(f, loop, n_nodes, step))
                        for f in field.forms])
    return path_ordered_transport(field, loop, tolerance=tolerance, initial_steps=initial_steps,
                                  max_halvings=max_halvings, step=step)


def holonomy_trace(connection, loop: Loop, **kwargs) -> complex:
    """Trace of the holonomy, as entering surface holonomies with boundary."""
    hol = line_holonomy(connection, loop, **kwargs)
    return complex(np.trace(hol)) if isinstance(hol, np.ndarray) else complex(hol)


def linear_gauge_field(target, matrices, name: str = "linear") -> GaugeField:
    r"""Connection :math:`A(v) = \sum_i v_i M_i` with constant Hermitian matrices, one per ambient coordinate."""
    matrices = np.asarray(matrices, dtype="complex")
    if matrices.ndim != 3 or matrices.shape[1] != matrices.shape[2]:
        raise ValueError("Require matrices of shape (d, r, r), got %s." % (matrices.shape, ))
    if np.max(np.abs(matrices - np.conj(np.transpose(matrices, (0, 2, 1))))) > 1e-12:
        raise ValueError("Gauge field matrices must be Hermitian.")
    return GaugeField(matrices.shape[1], lambda p, v: np.tensordot(v, matrices, axes=(0, 0)), target, name=name)


def conjugate_gauge_field(field: GaugeField, unitary) -> GaugeField:
    """Constant gauge transformation :math:`A \\mapsto g A g^{-1}`."""
    g = np.asarray(unitary, dtype="complex")
    g_inv = np.conj(g.T)
    return GaugeField(field.rank, lambda p, v: g.dot(field(p, v)).dot(g_inv), field.target,
                      name="Ad(%s)" % field.name)


def linear_transport(matrices, loop: Loop) -> np.ndarray:
    r"""Exact transport of the constant field :math:`A(v) = \sum_i v_i M_i` around a loop of straight segments in
    a flat target, :math:`\prod_s \exp(2 \pi i \sum_i d^s_i M_i)` with segment displacements :math:`d^s`.

    Args:
        matrices (np.ndarray): Hermitian matrices of shape `(d, r, r)`, as for :obj:`linear_gauge_field`.
        loop (Loop): Loop whose segments are straight in lifted coordinates.

    Returns:
        np.ndarray: Unitary transport, later segments multiplying from the left.
    """
    matrices = np.asarray(matrices, dtype="complex")
    total = np.eye(matrices.shape[1], dtype="complex")
    for i in range(len(loop)):
        d = loop.point(i, 1.0) - loop.point(i, 0.0)
        total = expm(2j * np.pi * np.tensordot(d, matrices, axes=(0, 0))).dot(total)
    return total
