import logging
import numpy as np
from typing import Callable, Union
from gerbecalc.fields.target import TargetSpace, FlatTarget, SU2Target, make_target, low_discrepancy_points
from gerbecalc.fields.forms import FormOracle, zero_form, pullback_form
from gerbecalc.fields.exterior import exterior_derivative_fd, DEFAULT_STEP
from gerbecalc.ops.quaternion import qconj
from gerbecalc.gerbedata.report import ValidationReport, merge_reports

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


class Involution:
    r"""Involution :math:`k: M \rightarrow M` of a target space with its differential.

    Args:
        target (TargetSpace): Target.
        function (Callable): Map `function(p)` on lifted points.
        differential (Callable): Push forward `differential(p, v)` of tangent vectors.
        name (str): Name. Default is None.
        config (dict): Serialization. Default is None.
    """

    def __init__(self, target: TargetSpace, function: Callable, differential: Callable, name: str = None,
                 config: dict = None):
        self.target = target
        self.function = function
        self.differential = differential
        self.name = name
        self.config = dict(config) if config is not None else {}

    def __call__(self, p) -> np.ndarray:
        return np.asarray(self.function(np.asarray(p, dtype="float")), dtype="float")

    def push(self, p, v) -> np.ndarray:
        return np.asarray(self.differential(np.asarray(p, dtype="float"), np.asarray(v, dtype="float")),
                          dtype="float")

    def residual(self, n_samples: int = 50, seed: int = 0) -> float:
        """Maximum distance between :math:`k(k(p))` and :math:`p` over sampled points."""
        points = low_discrepancy_points(self.target, n_samples, seed)
        return max(self.target.distance(self.target.reduce(self(self(p))), self.target.reduce(p)) for p in points)

    def get_config(self) -> dict:
        return {"name": self.name, "config": dict(self.config)}

    def __repr__(self):
        return "Involution(name=%s, config=%s)" % (self.name, self.config)


def reflection(target: FlatTarget, axes=(1, ), shift=None) -> Involution:
    r"""Affine involution of a flat target that negates the coordinates in `axes` and translates by `shift`, e.g.
    :math:`(x, y) \mapsto (x + \frac{1}{2}, -y)` for the Klein bottle. The shift must vanish on the negated axes
    and be half a period or zero on the others."""
    target = make_target(target)
    if not isinstance(target, FlatTarget):
        raise ValueError("Reflections are defined on circle and torus targets, got %s." % target)
    signs = np.ones(target.dim)
    for i in axes:
        if not 0 <= int(i) < target.dim:
            raise ValueError("Reflection axis %s out of range for dimension %s." % (i, target.dim))
        signs[int(i)] = -1.0
    shift = np.zeros(target.dim) if shift is None else np.array(shift, dtype="float").reshape(-1)
    if len(shift) != target.dim:
        raise ValueError("Shift requires %s entries, got %s." % (target.dim, len(shift)))
    doubled = np.mod(2 * shift * (signs > 0), target.periods)
    if np.any(np.minimum(doubled, target.periods - doubled) > 1e-12) or np.any(np.abs(shift[signs < 0]) > 1e-12):
        raise ValueError("Shift %s does not give an involution." % shift)
    return Involution(target, lambda p: signs * p + shift, lambda p, v: signs * v,
                      name="reflection", config={"axes": [int(i) for i in axes], "shift": shift.tolist()})


def su2_involution(z: int = 1) -> Involution:
    r"""Twisted inversion :math:`k_z(g) = (z g)^{-1} = z \bar{g}` of :math:`SU(2)` for central :math:`z = \pm 1`."""
    if z not in [1, -1]:
        raise ValueError("Twist of the SU(2) inversion must be 1 or -1, got %s." % z)
    return Involution(SU2Target(), lambda g: z * qconj(g), lambda g, v: z * qconj(v), name="su2.inversion",
                      config={"z": int(z)})


def make_involution(config: Union[dict, str, Involution]) -> Involution:
    """Make an involution from `{"name": "reflection", "target": ..., "axes": [1], "shift": [0.5, 0]}`,
    `{"name": "su2.inversion", "z": -1}` or the SU(2) ids 'inv' and 'minus_inv'."""
    if isinstance(config, Involution):
        return config
    if config == "inv":
        return su2_involution(1)
    if config == "minus_inv":
        return su2_involution(-1)
    if not isinstance(config, dict) or "name" not in config:
        raise TypeError("Involution description requires a dictionary with 'name', got %s." % config)
    if config["name"] == "reflection":
        return reflection(config.get("target", "torus"), axes=config.get("axes", [1]),
                          shift=config.get("shift", None))
    if config["name"] == "su2.inversion":
        return su2_involution(int(config.get("z", 1)))
    raise ValueError("Unknown involution '%s'." % config["name"])


def constant_phase(value: complex = 1.0) -> Callable:
    value = complex(value)

    def phi(p):
        return value

    return phi


class JandlTrivialData:
    r"""Jandl structure on the trivial gerbe :math:`I_\omega`: a line bundle :math:`L` with connection 1-form
    `line` and an isomorphism :math:`\varphi: k^*L \rightarrow L` given as unit complex function, subject to
    :math:`\mathrm{curv}(L) = -\omega - k^*\omega`, :math:`k^*\varphi = \varphi^{-1}` and
    :math:`\mathrm{line} - k^*\mathrm{line} = \frac{1}{2\pi} d \arg \varphi`.

    Args:
        omega (FormOracle): 2-form on the target.
        line (FormOracle): Connection 1-form of :math:`L`. Default is None, which is the flat trivial bundle.
        phi (Callable, complex): Isomorphism as function of target points or constant. Default is 1.
        involution (Involution): Involution :math:`k`. Default is None.
        name (str): Name. Default is None.
    """

    def __init__(self, omega: FormOracle, line: FormOracle = None, phi: Union[Callable, complex] = 1.0,
                 involution: Involution = None, name: str = None):
        if omega.degree != 2:
            raise ValueError("Jandl data requires a 2-form, got degree %s." % omega.degree)
        line = zero_form(omega.target, 1) if line is None else line
        if line.degree != 1:
            raise ValueError("Line bundle connection must be a 1-form, got degree %s." % line.degree)
        if line.target != omega.target:
            raise ValueError("Line bundle target %s does not match 2-form target %s." % (line.target, omega.target))
        if involution is not None and involution.target != omega.target:
            raise ValueError("Involution target %s does not match %s." % (involution.target, omega.target))
        self.omega = omega
        self.line = line
        self.phi = phi if callable(phi) else constant_phase(phi)
        self.involution = involution
        self.name = name

    @property
    def target(self) -> TargetSpace:
        return self.omega.target

    def phase(self, p) -> complex:
        return complex(self.phi(np.asarray(p, dtype="float")))

    def __repr__(self):
        return "JandlTrivialData(omega=%s, line=%s, involution=%s)" % (self.omega.name, self.line.name,
                                                                       self.involution)


def _resolve_involution(data: JandlTrivialData, involution: Involution) -> Involution:
    involution = data.involution if involution is None else make_involution(involution)
    if involution is None:
        raise ValueError("Jandl data '%s' has no involution." % data.name)
    if involution.target != data.target:
        raise ValueError("Involution target %s does not match data target %s." % (involution.target, data.target))
    return involution


def _phase_derivative(data: JandlTrivialData, p: np.ndarray, x: np.ndarray, step: float) -> float:
    """Directional derivative of :math:`\\arg \\varphi / 2\\pi` along ambient tangent `x` by central differences."""
    target = data.target
    xi = target.to_chart(p, x)
    up, down = data.phase(target.chart(p, step * xi)), data.phase(target.chart(p, -step * xi))
    return float(np.angle(up / down)) / (2 * step) / (2 * np.pi)


def validate_jandl(data: JandlTrivialData, involution: Involution = None, n_samples: int = 200, seed: int = 0,
                   tolerance: float = 1e-4, phase_tolerance: float = 1e-9,
                   step: float = DEFAULT_STEP) -> ValidationReport:
    r"""Check the three identities of :obj:`JandlTrivialData` at low-discrepancy points of the target.

    Residuals are :math:`|d\,\mathrm{line} + \omega + k^*\omega|` and the connection shift residual relative to
    :math:`\max(1, |\cdot|)`, and :math:`|\varphi(k(p)) - \varphi(p)^{-1}|` in absolute terms.

    Args:
        data (JandlTrivialData): Jandl data.
        involution (Involution): Involution. Default is None, which uses `data.involution`.
        n_samples (int): Number of sample points. Default is 200.
        seed (int): Seed of sampler and tangents. Default is 0.
        tolerance (float): Tolerance of curvature and connection identities. Default is 1e-4.
        phase_tolerance (float): Tolerance of the phase identity. Default is 1e-9.
        step (float): Finite-difference step. Default is 1e-4.

    Returns:
        ValidationReport: Report with parts 'curvature', 'phase' and 'connection'.
    """
    k = _resolve_involution(data, involution)
    target = data.target
    rng = np.random.default_rng(seed)
    curvature, phase, connection = [], [], []
    for p in low_discrepancy_points(target, n_samples, seed):
        x, y = target.random_tangents(p, 2, rng)
        kp, kx, ky = k(p), k.push(p, x), k.push(p, y)
        rhs = -data.omega(p, x, y) - data.omega(kp, kx, ky)
        lhs = exterior_derivative_fd(data.line, p, x, y, step=step)
        curvature.append(abs(lhs - rhs) / max(1.0, abs(rhs)))
        phase.append(abs(data.phase(kp) - 1.0 / data.phase(p)))
        shift = data.line(p, x) - data.line(kp, kx)
        expected = _phase_derivative(data, p, x, step)
        connection.append(abs(shift - expected) / max(1.0, abs(expected)))
    report = merge_reports("jandl", [
        ValidationReport.from_residuals("curvature", curvature, tolerance),
        ValidationReport.from_residuals("phase", phase, phase_tolerance),
        ValidationReport.from_residuals("connection", connection, tolerance)])
    report["n_samples"] = int(n_samples)
    report["involution"] = k.get_config()
    return report


def check_involution_sign(form: FormOracle, involution: Involution, n_samples: int = 200, seed: int = 0,
                          tolerance: float = 1e-4) -> ValidationReport:
    r"""Check :math:`k^* H = -H` at sampled points, which is necessary for a Jandl structure to exist on a gerbe
    with curvature :math:`H`."""
    k = make_involution(involution)
    if k.target != form.target:
        raise ValueError("Involution target %s does not match form target %s." % (k.target, form.target))
    rng = np.random.default_rng(seed)
    residuals = []
    for p in low_discrepancy_points(form.target, n_samples, seed):
        vectors = list(form.target.random_tangents(p, form.degree, rng))
        value = form(p, *vectors)
        pulled = form(k(p), *[k.push(p, v) for v in vectors])
        residuals.append(abs(pulled + value) / max(1.0, abs(value)))
    return ValidationReport.from_residuals("involution_sign", residuals, tolerance, form=form.name,
                                           involution=k.get_config())


def pullback_jandl(data: JandlTrivialData, involution: Involution = None) -> JandlTrivialData:
    r"""Pull Jandl data back along the involution: :math:`(k^*\omega, k^*\mathrm{line}, \varphi \circ k)`, which is
    again Jandl data for the same involution."""
    k = _resolve_involution(data, involution)
    omega = pullback_form(data.omega, k, k.push, data.target, name="k*%s" % data.omega.name)
    line = pullback_form(data.line, k, k.push, data.target, name="k*%s" % data.line.name)
    phi = data.phi
    return JandlTrivialData(omega, line, lambda p: phi(k(p)), involution=k, name="k*%s" % data.name)
