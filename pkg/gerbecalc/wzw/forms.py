import logging
import numpy as np
from typing import Callable
from gerbecalc.fields.forms import FormOracle, register_form, zero_form
from gerbecalc.fields.target import SU2Target, ProductTarget, TargetSpace
from gerbecalc.ops.quaternion import qmul, qconj, qim, random_quaternions, pure
from gerbecalc.wzw.classes import ConjugacyClass, BiconjugacyClass, BraneLabel

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

DEFAULT_CLASS_TOLERANCE = 1e-6
SU2_VOLUME = 2 * np.pi ** 2


def su2_pair_target() -> ProductTarget:
    return ProductTarget(SU2Target(), SU2Target())


def _mc(g, x) -> np.ndarray:
    r"""Left Maurer-Cartan form :math:`\theta_g(X) = \mathrm{Im}(\bar{g} X)` as 3-vector."""
    return qim(qmul(qconj(g), x))


def _cross_term(g1, g2, x, y) -> np.ndarray:
    r"""The 2-form :math:`\langle p_1^*\theta \wedge p_2^*\theta \rangle (X, Y)` on :math:`G \times G`."""
    x1, x2 = x[..., :4], x[..., 4:]
    y1, y2 = y[..., :4], y[..., 4:]
    return np.sum(_mc(g1, x1) * _mc(g2, y2), axis=-1) - np.sum(_mc(g1, y1) * _mc(g2, x2), axis=-1)


class ClassForm(FormOracle):
    """Form defined on an open neighbourhood of a submanifold, but meant to be evaluated on it only. Calling the form
    checks membership of the point, while `evaluator` stays usable off the submanifold for finite differences."""

    def __init__(self, degree: int, evaluator: Callable, target: TargetSpace, residual: Callable,
                 tolerance: float = DEFAULT_CLASS_TOLERANCE, name: str = None, config: dict = None):
        super(ClassForm, self).__init__(degree, evaluator, target, name=name, config=config)
        self.residual = residual
        self.tolerance = tolerance

    def __call__(self, p, *vectors) -> float:
        res = float(np.max(self.residual(np.asarray(p, dtype="float"))))
        if res > self.tolerance:
            raise ValueError("Point %s is not on the world volume of '%s', residual %s." % (p, self.name, res))
        return super(ClassForm, self).__call__(p, *vectors)


def canonical_three_form(k: int = 1) -> FormOracle:
    r"""Bi-invariant 3-form :math:`H_k` on :math:`SU(2)`, normalized to :math:`\int_{SU(2)} H_k = k`.

    With :math:`\theta` the left Maurer-Cartan form,
    :math:`H_k(X, Y, Z) = \frac{k}{2\pi^2} \det[\theta X, \theta Y, \theta Z]`, which is
    :math:`\frac{k}{12 \pi^2} \langle \theta \wedge [\theta \wedge \theta] \rangle` up to the trace convention.

    Args:
        k (int): Level, positive. Default is 1.

    Returns:
        FormOracle: Degree 3 form.
    """
    k = int(k)
    if k <= 0:
        raise ValueError("Level must be positive, got %s." % k)
    c = k / SU2_VOLUME

    def evaluator(g, x, y, z):
        return c * np.linalg.det(np.stack([_mc(g, x), _mc(g, y), _mc(g, z)], axis=-1))

    return FormOracle(3, evaluator, SU2Target(), name="su2.H", config={"k": k})


def maurer_cartan_form(component: int = 0, scale: float = 1.0) -> FormOracle:
    """Component of the left Maurer-Cartan form along the basis quaternion `i`, `j` or `k`."""
    if component not in [0, 1, 2]:
        raise ValueError("Maurer-Cartan component must be 0, 1 or 2, got %s." % component)
    scale = float(scale)
    return FormOracle(1, lambda g, x: scale * _mc(g, x)[..., component], SU2Target(), name="su2.mc",
                      config={"component": component, "scale": scale})


def maurer_cartan_curvature(component: int = 0, scale: float = 1.0) -> FormOracle:
    r"""Closed-form exterior derivative of :obj:`maurer_cartan_form` from :math:`d\theta = -\theta \wedge \theta`,
    i.e. :math:`d\theta(X, Y) = -2 \, \theta X \times \theta Y`."""
    scale = float(scale)
    return FormOracle(2, lambda g, x, y: -2.0 * scale * np.cross(_mc(g, x), _mc(g, y))[..., component],
                      SU2Target(), name="su2.dmc", config={"component": component, "scale": scale})


def _omega_extension(k: int) -> Callable:
    r"""The 2-form :math:`\frac{k}{4\pi^2} (\psi - \sin\psi \cos\psi) \, n^* dA` on :math:`SU(2) \setminus \{\pm 1\}`,
    where :math:`g = \cos\psi + \sin\psi \, n`. Its exterior derivative is :math:`H_k`."""
    c = k / (4 * np.pi ** 2)

    def evaluator(g, x, y):
        im = g[..., 1:]
        s = np.linalg.norm(im, axis=-1)
        psi = np.arctan2(s, g[..., 0])
        n = im / s[..., None]
        area = np.sum(n * np.cross(x[..., 1:], y[..., 1:]), axis=-1) / s ** 2
        return c * (psi - np.sin(psi) * np.cos(psi)) * area

    return evaluator


def omega_h(conjugacy_class, k: int = 1, tolerance: float = DEFAULT_CLASS_TOLERANCE) -> FormOracle:
    r"""Ad-invariant 2-form :math:`\omega_h` on the conjugacy class :math:`C_h` with
    :math:`d\omega_h = H_k|_{C_h}`. Singleton classes carry the zero form.

    Args:
        conjugacy_class (ConjugacyClass, float, BraneLabel): Class, class angle or brane label.
        k (int): Level. Default is 1.
        tolerance (float): Membership tolerance when calling the form. Default is 1e-6.

    Returns:
        FormOracle: Degree 2 form, raising if evaluated off the class.
    """
    if isinstance(conjugacy_class, BraneLabel):
        k = conjugacy_class.k
        conjugacy_class = conjugacy_class.conjugacy_class
    if not isinstance(conjugacy_class, ConjugacyClass):
        conjugacy_class = ConjugacyClass(conjugacy_class)
    config = {"theta": conjugacy_class.theta, "k": int(k)}
    if conjugacy_class.is_singleton:
        form = zero_form(SU2Target(), 2)
        return ClassForm(2, form.evaluator, form.target, conjugacy_class.residual, tolerance, name="su2.omega_h",
                         config=config)
    return ClassForm(2, _omega_extension(int(k)), SU2Target(), conjugacy_class.residual, tolerance,
                     name="su2.omega_h", config=config)


def varpi(biconjugacy_class, k: int = 1, cross_term: bool = True,
          tolerance: float = DEFAULT_CLASS_TOLERANCE) -> FormOracle:
    r"""Bi-brane 2-form on the biconjugacy class :math:`\mathcal{B} = \{(g, g') : g g'^{-1} \in C_\theta\}`,

    .. math::

        \varpi = \tilde{\mu}^* \omega_\theta - \frac{k}{4\pi^2} \langle p_1^*\theta \wedge p_2^*\theta \rangle,

    with :math:`\tilde{\mu}(g, g') = g g'^{-1}`. It satisfies :math:`p_1^* H_k = p_2^* H_k + d\varpi`.

    Args:
        biconjugacy_class (BiconjugacyClass, float): Biconjugacy class or angle of :math:`C_\theta`.
        k (int): Level. Default is 1.
        cross_term (bool): Whether to include the Maurer-Cartan cross term. Default is True.
        tolerance (float): Membership tolerance when calling the form. Default is 1e-6.

    Returns:
        FormOracle: Degree 2 form on the product target.
    """
    if not isinstance(biconjugacy_class, BiconjugacyClass):
        biconjugacy_class = BiconjugacyClass(biconjugacy_class)
    k = int(k)
    kappa = k / SU2_VOLUME
    singleton = biconjugacy_class.conjugacy_class.is_singleton
    omega = _omega_extension(k)

    def evaluator(p, x, y):
        g1, g2 = p[..., :4], p[..., 4:]
        value = 0.0
        if not singleton:
            mu = qmul(g1, qconj(g2))

            def push(v):
                return qmul(v[..., :4], qconj(g2)) + qmul(g1, qconj(v[..., 4:]))

            value = omega(mu, push(x), push(y))
        if cross_term:
            value = value - 0.5 * kappa * _cross_term(g1, g2, x, y)
        return value

    return ClassForm(2, evaluator, su2_pair_target(), biconjugacy_class.residual, tolerance, name="su2.varpi",
                     config={"theta": biconjugacy_class.theta, "k": k, "cross_term": bool(cross_term)})


def mc_pair_form(scale: float = 1.0) -> FormOracle:
    r"""The 2-form :math:`c \langle p_1^*\theta \wedge p_2^*\theta \rangle` on :math:`G \times G`."""
    scale = float(scale)
    return FormOracle(2, lambda p, x, y: scale * _cross_term(p[..., :4], p[..., 4:], x, y), su2_pair_target(),
                      name="su2.mc_pair", config={"scale": scale})


def sphere_area_form(scale: float = 1.0) -> FormOracle:
    r"""Area form of the equatorial class :math:`C_{\pi/2}` of pure unit quaternions, normalized to total
    area `scale`."""
    c = float(scale) / (4 * np.pi)

    def evaluator(g, x, y):
        return c * np.linalg.det(np.stack([g[..., 1:], x[..., 1:], y[..., 1:]], axis=-1))

    return FormOracle(2, evaluator, SU2Target(), name="su2.sphere_area", config={"scale": float(scale)})


def haar_integral(form: FormOracle, n_samples: int = 1000000, seed: int = 0) -> float:
    r"""Monte-Carlo integral of a 3-form over :math:`SU(2)` with Haar distributed points.

    At each sample :math:`g` the form is evaluated on the left translated frame :math:`(g i, g j, g k)`, which is
    positively oriented and of unit volume. The estimate is :math:`2\pi^2` times the sample mean.

    Args:
        form (FormOracle): Degree 3 form on SU(2).
        n_samples (int): Number of samples. Default is 1000000.
        seed (int): Seed. Default is 0.

    Returns:
        float: Estimate of the integral.
    """
    if form.degree != 3:
        raise ValueError("Haar integral requires a 3-form, got degree %s." % form.degree)
    g = random_quaternions(int(n_samples), np.random.default_rng(seed))
    frame = [qmul(g, pure(np.broadcast_to(e, (len(g), 3)))) for e in np.eye(3)]
    values = np.asarray(form.evaluator(g, *frame), dtype="float")
    if values.shape != (len(g), ):
        module_logger.info("Form '%s' does not broadcast, evaluating point by point." % form.name)
        values = np.array([form(g[i], *[x[i] for x in frame]) for i in range(len(g))])
    return float(SU2_VOLUME * np.mean(values))


def pull_to_pair(form: FormOracle, factor: int) -> FormOracle:
    """Pullback of a form on SU(2) to a factor of :math:`G \\times G`, keeping broadcasting."""
    s = slice(0, 4) if factor == 1 else slice(4, 8)
    return FormOracle(form.degree, lambda p, *v: form.evaluator(p[..., s], *[x[..., s] for x in v]),
                      su2_pair_target(), name="p%s*%s" % (factor, form.name))


@register_form("su2.H")
def _make_su2_h(k=1, **kwargs):
    return canonical_three_form(k)


@register_form("su2.mc")
def _make_su2_mc(component=0, scale=1.0, **kwargs):
    return maurer_cartan_form(component, scale)


@register_form("su2.omega_h")
def _make_su2_omega_h(theta=None, alpha=None, k=1, **kwargs):
    if theta is None:
        if alpha is None:
            raise ValueError("Form 'su2.omega_h' requires 'theta' or 'alpha'.")
        return omega_h(BraneLabel(k, alpha))
    return omega_h(theta, k)


@register_form("su2.varpi")
def _make_su2_varpi(theta=None, alpha=None, k=1, cross_term=True, **kwargs):
    if theta is None:
        if alpha is None:
            raise ValueError("Form 'su2.varpi' requires 'theta' or 'alpha'.")
        theta = BraneLabel(k, alpha).theta
    return varpi(theta, k, cross_term=cross_term)


@register_form("su2.mc_pair")
def _make_su2_mc_pair(scale=1.0, **kwargs):
    return mc_pair_form(scale)


@register_form("su2.sphere_area")
def _make_su2_sphere_area(scale=1.0, **kwargs):
    return sphere_area_form(scale)
