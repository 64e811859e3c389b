import logging
import numpy as np
from typing import Callable
from gerbecalc.fields.target import TargetSpace, ProductTarget, FlatTarget, make_target

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


class FormOracle:
    r"""Differential :math:`k`-form on a target space, given by a closed-form evaluator.

    The evaluator is called as `evaluator(p, *vectors)` with a point `p` of the target and `k` ambient tangent vectors
    at `p`, and returns a real number. It must be multilinear and alternating in the vectors.

    .. code-block:: python

        import numpy as np
        from gerbecalc.fields.target import TorusTarget
        from gerbecalc.fields.forms import volume_form
        vol = volume_form(TorusTarget())
        print(vol(np.zeros(2), np.array([1.0, 0.0]), np.array([0.0, 1.0])))
    """

    def __init__(self, degree: int, evaluator: Callable, target: TargetSpace, name: str = None,
                 config: dict = None):
        if degree not in [0, 1, 2, 3]:
            raise ValueError("Form degree must be in [0, 1, 2, 3], got %s." % degree)
        self.degree = int(degree)
        self.evaluator = evaluator
        self.target = target
        self.name = name
        self.config = dict(config) if config is not None else {}

    def __call__(self, p, *vectors) -> float:
        if len(vectors) != self.degree:
            raise ValueError("Form '%s' of degree %s requires %s tangent vectors, got %s." % (
                self.name, self.degree, self.degree, len(vectors)))
        value = float(self.evaluator(np.asarray(p, dtype="float"), *[np.asarray(v, dtype="float") for v in vectors]))
        if not np.isfinite(value):
            raise ValueError("Form '%s' evaluated to non-finite value at %s." % (self.name, p))
        return value

    def __add__(self, other):
        return add_forms(self, other)

    def __neg__(self):
        return scale_form(self, -1.0)

    def __sub__(self, other):
        return add_forms(self, scale_form(other, -1.0))

    def __rmul__(self, c):
        return scale_form(self, c)

    def get_config(self) -> dict:
        """Serialization of registered forms as `{"class_name": ..., "config": ...}`."""
        return {"class_name": self.name, "config": dict(self.config)}

    def __repr__(self):
        return "FormOracle(name=%s, degree=%s, target=%s)" % (self.name, self.degree, self.target)


def zero_form(target: TargetSpace, degree: int = 2) -> FormOracle:
    return FormOracle(degree, lambda p, *v: 0.0, target, name="zero", config={"degree": degree})


def add_forms(*forms) -> FormOracle:
    """Sum of forms of equal degree on the same target."""
    if len(forms) == 0:
        raise ValueError("Require at least one form to add.")
    degree = forms[0].degree
    if any(f.degree != degree for f in forms):
        raise ValueError("Can only add forms of equal degree, got %s." % [f.degree for f in forms])

    def evaluator(p, *vectors):
        return sum(f.evaluator(p, *vectors) for f in forms)

    return FormOracle(degree, evaluator, forms[0].target, name="+".join(str(f.name) for f in forms))


def scale_form(form: FormOracle, c: float) -> FormOracle:
    c = float(c)
    return FormOracle(form.degree, lambda p, *v: c * form.evaluator(p, *v), form.target,
                      name="%s*%s" % (c, form.name))


def wedge(a: FormOracle, b: FormOracle) -> FormOracle:
    r"""Wedge product :math:`(a \wedge b)(X, Y) = a(X) b(Y) - a(Y) b(X)` of two 1-forms."""
    if a.degree != 1 or b.degree != 1:
        raise ValueError("Wedge product is implemented for 1-forms only, got degrees %s, %s." % (a.degree, b.degree))
    return FormOracle(2, lambda p, x, y: a.evaluator(p, x) * b.evaluator(p, y) - a.evaluator(p, y) * b.evaluator(p, x),
                      a.target, name="%s^%s" % (a.name, b.name))


def pullback_form(form: FormOracle, fmap: Callable, dfmap: Callable, source: TargetSpace,
                  name: str = None) -> FormOracle:
    r"""Pullback :math:`f^* \omega` along a target map with known differential.

    Args:
        form (FormOracle): Form on the image target.
        fmap (Callable): Map `fmap(p)` from `source` to the target of `form`.
        dfmap (Callable): Differential `dfmap(p, v)`.
        source (TargetSpace): Source target.
        name (str): Name of the pulled back form. Default is None.

    Returns:
        FormOracle: Pulled back form.
    """
    def evaluator(p, *vectors):
        return form.evaluator(fmap(p), *[dfmap(p, v) for v in vectors])

    return FormOracle(form.degree, evaluator, source, name=name if name is not None else "pullback(%s)" % form.name)


def factor_pullback(form: FormOracle, product: ProductTarget, factor: int) -> FormOracle:
    """Pullback :math:`p_1^* \\omega` or :math:`p_2^* \\omega` along a projection of a product target."""
    if factor not in [1, 2]:
        raise ValueError("Product factor must be 1 or 2, got %s." % factor)

    def project(p):
        return product.split(p)[factor - 1]

    return pullback_form(form, project, lambda p, v: project(v), product, name="p%s*%s" % (factor, form.name))


def constant_form(target: FlatTarget, coefficients, degree: int, scale: float = 1.0, name: str = None) -> FormOracle:
    r"""Constant-coefficient form on a flat target. For degree 1 the coefficients are a covector, for degree 2 the
    value is `scale * det[v1, v2]` restricted to the coordinate pair given by `coefficients`."""
    coefficients = np.array(coefficients, dtype="float")
    if degree == 1:
        return FormOracle(1, lambda p, v: scale * float(np.dot(coefficients, v)), target,
                          name=name, config={"coefficients": coefficients.tolist(), "scale": scale})
    if degree == 2:
        i, j = int(coefficients[0]), int(coefficients[1])
        return FormOracle(2, lambda p, v, w: scale * (v[i] * w[j] - v[j] * w[i]), target,
                          name=name, config={"scale": scale})
    raise ValueError("Constant forms are supported for degree 1 and 2, got %s." % degree)


def volume_form(target: FlatTarget, scale: float = 1.0) -> FormOracle:
    r"""Normalized volume form :math:`c \, dx \wedge dy / (L_1 L_2)` of a two-dimensional flat torus with integral
    `scale` over the torus."""
    c = float(scale) / float(np.prod(target.periods))
    form = constant_form(target, [0, 1], 2, scale=c, name="torus.vol")
    form.config = {"scale": float(scale)}
    return form


class FourierConnection:
    r"""Smooth 1-form on a two-dimensional flat torus given by a finite Fourier sum

    .. math::

        A(x)(v) = \sum_m (a_m \cdot v) \cos(2 \pi \, k_m \cdot x + \phi_m),

    with wave vectors :math:`k_m = (m_1 / L_1, m_2 / L_2)`. Its curvature :math:`dA` is known in closed form.
    """

    def __init__(self, target: FlatTarget, modes: list):
        self.target = target
        self.modes = [{"m": [int(x) for x in mode["m"]], "amp": [float(x) for x in mode["amp"]],
                       "phase": float(mode.get("phase", 0.0))} for mode in modes]
        self._k = np.array([np.array(mode["m"]) / target.periods for mode in self.modes]).reshape((-1, target.dim))
        self._a = np.array([mode["amp"] for mode in self.modes]).reshape((-1, target.dim))
        self._phi = np.array([mode["phase"] for mode in self.modes])

    def _angles(self, p):
        return 2 * np.pi * self._k.dot(p) + self._phi

    def one_form(self) -> FormOracle:
        return FormOracle(1, lambda p, v: float(np.sum(self._a.dot(v) * np.cos(self._angles(p)))), self.target,
                          name="torus.fourier", config={"modes": self.modes})

    def curvature(self) -> FormOracle:
        r"""Exterior derivative :math:`dA(v, w) = -2\pi \sum_m \sin(\cdot)((k_m \cdot v)(a_m \cdot w) -
        (k_m \cdot w)(a_m \cdot v))`."""
        def evaluator(p, v, w):
            s = np.sin(self._angles(p))
            return float(-2 * np.pi * np.sum(s * (self._k.dot(v) * self._a.dot(w) - self._k.dot(w) * self._a.dot(v))))

        return FormOracle(2, evaluator, self.target, name="torus.fourier.d", config={"modes": self.modes})

    @classmethod
    def random(cls, target: FlatTarget, rng: np.random.Generator, n_modes: int = 3, max_mode: int = 2,
               amplitude: float = 0.3):
        modes = []
        for _ in range(n_modes):
            modes.append({"m": rng.integers(-max_mode, max_mode + 1, size=target.dim).tolist(),
                          "amp": (amplitude * rng.normal(size=target.dim)).tolist(),
                          "phase": float(rng.uniform(0, 2 * np.pi))})
        return cls(target, modes)


def fourier_two_form(target: FlatTarget, modes: list, scale: float = 0.0) -> FormOracle:
    r"""Two-form :math:`(c/(L_1 L_2) + \sum_m a_m \cos(2\pi k_m \cdot x + \phi_m)) dx \wedge dy` on a flat torus.
    Non-constant modes integrate to zero over the torus."""
    k = np.array([np.array(mode["m"], dtype="float") / target.periods for mode in modes]).reshape((-1, 2))
    a = np.array([float(mode["amp"]) for mode in modes])
    phi = np.array([float(mode.get("phase", 0.0)) for mode in modes])
    c = float(scale) / float(np.prod(target.periods))

    def evaluator(p, v, w):
        density = c + float(np.sum(a * np.cos(2 * np.pi * k.dot(p) + phi)))
        return density * (v[0] * w[1] - v[1] * w[0])

    return FormOracle(2, evaluator, target, name="torus.fourier2", config={"modes": modes, "scale": scale})


def alternation_residual(form: FormOracle, rng: np.random.Generator, n_samples: int = 20) -> float:
    """Maximum relative residual of `form` against sign flip under swapping its first two arguments."""
    if form.degree < 2:
        return 0.0
    worst = 0.0
    for p in form.target.random_points(n_samples, rng):
        vectors = list(form.target.random_tangents(p, form.degree, rng))
        a = form(p, *vectors)
        swapped = [vectors[1], vectors[0]] + vectors[2:]
        b = form(p, *swapped)
        worst = max(worst, abs(a + b) / max(1.0, abs(a)))
    return worst


def _torus_target(config):
    return make_target(config.get("target", {"kind": "torus", "periods": config.get("periods", [1.0, 1.0])}))


def _circle_target(config):
    return make_target(config.get("target", {"kind": "circle", "period": config.get("period", 1.0)}))


def _make_zero(degree=2, target="torus", **kwargs):
    return zero_form(make_target(target), degree)


def _make_torus_vol(scale=1.0, **kwargs):
    return volume_form(_torus_target(kwargs), scale=scale)


def _make_torus_dxdy(scale=1.0, **kwargs):
    return constant_form(_torus_target(kwargs), [0, 1], 2, scale=scale, name="torus.dxdy")


def _make_torus_dx(scale=1.0, **kwargs):
    return constant_form(_torus_target(kwargs), [1.0, 0.0], 1, scale=scale, name="torus.dx")


def _make_torus_dy(scale=1.0, **kwargs):
    return constant_form(_torus_target(kwargs), [0.0, 1.0], 1, scale=scale, name="torus.dy")


def _make_circle_dx(scale=1.0, **kwargs):
    return constant_form(_circle_target(kwargs), [1.0], 1, scale=scale, name="circle.dx")


def _make_torus_fourier(modes=(), **kwargs):
    return FourierConnection(_torus_target(kwargs), list(modes)).one_form()


def _make_torus_fourier2(modes=(), scale=0.0, **kwargs):
    return fourier_two_form(_torus_target(kwargs), list(modes), scale=scale)


global_form_register = {
    "zero": _make_zero,
    "torus.vol": _make_torus_vol,
    "torus.dxdy": _make_torus_dxdy,
    "torus.dx": _make_torus_dx,
    "torus.dy": _make_torus_dy,
    "circle.dx": _make_circle_dx,
    "torus.fourier": _make_torus_fourier,
    "torus.fourier2": _make_torus_fourier2,
}


def register_form(name: str):
    """Decorator to add a form factory to the global register under `name`."""
    def wrapper(factory):
        global_form_register[name] = factory
        return factory
    return wrapper
