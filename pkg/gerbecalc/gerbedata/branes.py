import logging
import numpy as np
from typing import Callable, Union
from gerbecalc.fields.target import TargetSpace, ProductTarget, low_discrepancy_points
from gerbecalc.fields.forms import FormOracle, add_forms, factor_pullback, scale_form, zero_form
from gerbecalc.fields.exterior import exterior_derivative_fd, exterior_derivative, DEFAULT_STEP
from gerbecalc.fields.transport import GaugeField, as_gauge_field
from gerbecalc.gerbedata.report import ValidationReport

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

DEFAULT_MEMBERSHIP_TOLERANCE = 1e-9


class TrivialGerbe:
    r"""Trivial bundle gerbe :math:`I_\omega` with connection given by a 2-form :math:`\omega`, whose curvature is
    :math:`d\omega`."""

    def __init__(self, omega: FormOracle):
        if omega.degree != 2:
            raise ValueError("Trivial gerbe requires a 2-form, got degree %s." % omega.degree)
        self.omega = omega

    @property
    def target(self) -> TargetSpace:
        return self.omega.target

    def curvature(self, step: float = DEFAULT_STEP) -> FormOracle:
        return exterior_derivative(self.omega, step=step)

    def shifted(self, curvature: FormOracle) -> "TrivialGerbe":
        r"""The isomorphic gerbe :math:`I_{\omega + \mathrm{curv}(L)}` for the curvature 2-form of a line bundle."""
        return TrivialGerbe(add_forms(self.omega, curvature))

    def __repr__(self):
        return "TrivialGerbe(omega=%s)" % self.omega.name


class WorldVolume:
    r"""Submanifold :math:`Q \subset M` given by a membership residual and a seeded sampler.

    Args:
        target (TargetSpace): Ambient target.
        residual (Callable): Non-negative `residual(p)`, zero exactly on :math:`Q`.
        sampler (Callable): `sampler(n, seed)` returning points of :math:`Q` of shape `(n, ambient_dim)`.
        dim (int): Dimension of :math:`Q`.
        name (str): Name. Default is None.
    """

    def __init__(self, target: TargetSpace, residual: Callable, sampler: Callable, dim: int, name: str = None):
        self.target = target
        self.residual = residual
        self.sampler = sampler
        self.dim = int(dim)
        self.name = name

    def contains(self, p, tolerance: float = DEFAULT_MEMBERSHIP_TOLERANCE) -> bool:
        return bool(np.max(self.residual(np.asarray(p, dtype="float"))) <= tolerance)

    def sample(self, n: int, seed: int = 0) -> np.ndarray:
        points = np.asarray(self.sampler(int(n), int(seed)), dtype="float").reshape((-1, self.target.ambient_dim))
        if len(points) == 0:
            raise ValueError("World volume '%s' produced no sample points." % self.name)
        return points

    def __repr__(self):
        return "WorldVolume(name=%s, dim=%s, target=%s)" % (self.name, self.dim, self.target)


def full_world_volume(target: TargetSpace) -> WorldVolume:
    return WorldVolume(target, lambda p: np.zeros(1), lambda n, seed: low_discrepancy_points(target, n, seed),
                       target.dim, name="full")


def point_world_volume(target: TargetSpace, point) -> WorldVolume:
    point = target.reduce(np.asarray(point, dtype="float"))
    return WorldVolume(target, lambda p: np.array([target.distance(target.reduce(p), point)]),
                       lambda n, seed: np.repeat(point[None], n, axis=0), 0, name="point")


def class_world_volume(conjugacy_class) -> WorldVolume:
    """World volume of a symmetric WZW D-brane, a conjugacy class of SU(2)."""
    from gerbecalc.fields.target import SU2Target
    return WorldVolume(SU2Target(), conjugacy_class.residual,
                       lambda n, seed: conjugacy_class.sample(n, seed=seed), conjugacy_class.dim,
                       name="C(%s)" % conjugacy_class.theta)


def biconjugacy_world_volume(biconjugacy_class) -> WorldVolume:
    """World volume of a symmetric WZW bi-brane, a biconjugacy class in SU(2) x SU(2)."""
    from gerbecalc.wzw.forms import su2_pair_target
    return WorldVolume(su2_pair_target(), biconjugacy_class.residual,
                       lambda n, seed: biconjugacy_class.sample(n, seed=seed),
                       3 + biconjugacy_class.conjugacy_class.dim, name="B(%s)" % biconjugacy_class.theta)


def diagonal_world_volume(target: TargetSpace) -> WorldVolume:
    r"""Diagonal :math:`\{(p, p)\} \subset M \times M`, the world volume of the invisible defect."""
    product = ProductTarget(target, target)

    def residual(p):
        first, second = product.split(np.asarray(p, dtype="float"))
        return np.array([target.distance(target.reduce(first), target.reduce(second))])

    def sampler(n, seed):
        points = low_discrepancy_points(target, n, seed)
        return np.concatenate([points, points], axis=-1)

    return WorldVolume(product, residual, sampler, target.dim, name="diagonal")


class DBraneRecord:
    r"""D-brane for a trivial gerbe: world volume :math:`Q`, a 2-form :math:`\omega_Q` with
    :math:`H|_Q = d\omega_Q` and a gerbe module, i.e. a rank :math:`r` bundle with connection on :math:`Q`.

    Args:
        world_volume (WorldVolume): Support of the brane.
        omega (FormOracle): 2-form on a neighbourhood of the world volume.
        module (FormOracle, GaugeField): Connection of the module bundle. None means rank zero.
        name (str): Name. Default is None.
    """

    def __init__(self, world_volume: WorldVolume, omega: FormOracle = None,
                 module: Union[FormOracle, GaugeField] = None, name: str = None):
        omega = zero_form(world_volume.target, 2) if omega is None else omega
        if omega.degree != 2:
            raise ValueError("Brane 2-form must have degree 2, got %s." % omega.degree)
        if omega.target != world_volume.target:
            raise ValueError("Brane 2-form target %s does not match world volume %s." % (
                omega.target, world_volume.target))
        self.world_volume = world_volume
        self.omega = omega
        self.module = as_gauge_field(module) if module is not None else None
        self.name = name

    @property
    def target(self) -> TargetSpace:
        return self.world_volume.target

    @property
    def rank(self) -> int:
        return 0 if self.module is None else self.module.rank

    def __repr__(self):
        return "DBraneRecord(name=%s, world_volume=%s, rank=%s)" % (self.name, self.world_volume, self.rank)


class BiBraneRecord(DBraneRecord):
    r"""Bi-brane between targets :math:`M_1` and :math:`M_2`: world volume in :math:`M_1 \times M_2`, 2-form
    :math:`\varpi` with :math:`p_1^* H_1 = p_2^* H_2 + d\varpi` and a bundle with connection."""

    def __init__(self, world_volume: WorldVolume, varpi: FormOracle = None,
                 bundle: Union[FormOracle, GaugeField] = None, name: str = None):
        if not isinstance(world_volume.target, ProductTarget):
            raise ValueError("Bi-brane world volume must live in a product target, got %s." % world_volume.target)
        super(BiBraneRecord, self).__init__(world_volume, varpi, bundle, name=name)

    @property
    def varpi(self) -> FormOracle:
        return self.omega

    @property
    def bundle(self) -> GaugeField:
        return self.module


def diagonal_bibrane(target: TargetSpace, bundle: Union[FormOracle, GaugeField] = None) -> BiBraneRecord:
    """Diagonal bi-brane with vanishing 2-form and, by default, the trivial line bundle."""
    world_volume = diagonal_world_volume(target)
    bundle = zero_form(world_volume.target, 1) if bundle is None else bundle
    return BiBraneRecord(world_volume, zero_form(world_volume.target, 2), bundle, name="diagonal")


def _three_form_residuals(lhs: FormOracle, two_form: FormOracle, points: np.ndarray, rng: np.random.Generator,
                          step: float) -> list:
    target = two_form.target
    residuals = []
    for p in points:
        x, y, z = target.random_tangents(p, 3, rng)
        expected = lhs(p, x, y, z)
        value = exterior_derivative_fd(two_form, p, x, y, z, step=step)
        residuals.append(abs(expected - value) / max(1.0, abs(expected)))
    return residuals


def validate_dbrane(h: FormOracle, brane: DBraneRecord, n_samples: int = 200, seed: int = 0,
                    tolerance: float = 1e-4, step: float = DEFAULT_STEP) -> ValidationReport:
    r"""Check :math:`H = d\omega_Q` at world-volume points of a D-brane.

    Points are drawn from the world volume. The 2-form of the brane is defined on a neighbourhood of it, and both
    sides are evaluated on random ambient tangent frames, which keeps the check meaningful on world volumes of
    dimension below three.

    Args:
        h (FormOracle): Curvature 3-form of the gerbe.
        brane (DBraneRecord): Brane.
        n_samples (int): Number of points. Default is 200.
        seed (int): Seed of points and tangents. Default is 0.
        tolerance (float): Maximum relative residual. Default is 1e-4.
        step (float): Finite-difference step. Default is 1e-4.

    Returns:
        ValidationReport: Report with failing sample indices.
    """
    if h.degree != 3:
        raise ValueError("Gerbe curvature must be a 3-form, got degree %s." % h.degree)
    if h.target != brane.target:
        raise ValueError("Curvature target %s does not match brane target %s." % (h.target, brane.target))
    points = brane.world_volume.sample(n_samples, seed)
    residuals = _three_form_residuals(h, brane.omega, points, np.random.default_rng(seed), step)
    return ValidationReport.from_residuals("dbrane", residuals, tolerance, brane=brane.name,
                                           omega=brane.omega.name, n_samples=len(points))


def validate_bibrane(h1: FormOracle, h2: FormOracle, bibrane: BiBraneRecord, n_samples: int = 200, seed: int = 0,
                     tolerance: float = 1e-4, step: float = DEFAULT_STEP) -> ValidationReport:
    r"""Check :math:`p_1^* H_1 = p_2^* H_2 + d\varpi` at world-volume points of a bi-brane, see
    :obj:`validate_dbrane`."""
    product = bibrane.target
    if h1.target != product.first or h2.target != product.second:
        raise ValueError("Curvatures on %s and %s do not match bi-brane target %s." % (h1.target, h2.target,
                                                                                      product))
    if h1.degree != 3 or h2.degree != 3:
        raise ValueError("Gerbe curvatures must be 3-forms, got degrees %s and %s." % (h1.degree, h2.degree))
    lhs = add_forms(factor_pullback(h1, product, 1), scale_form(factor_pullback(h2, product, 2), -1.0))
    points = bibrane.world_volume.sample(n_samples, seed)
    residuals = _three_form_residuals(lhs, bibrane.varpi, points, np.random.default_rng(seed), step)
    return ValidationReport.from_residuals("bibrane", residuals, tolerance, bibrane=bibrane.name,
                                           varpi=bibrane.varpi.name, n_samples=len(points))
