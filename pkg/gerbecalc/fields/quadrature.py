import logging
import math
import numpy as np
from gerbecalc.fields.forms import FormOracle
from gerbecalc.fields.maps import SurfaceMap

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

DEFAULT_DEGREE = 4
DEFAULT_STEP = 1e-5


def _orbit(a: float) -> list:
    b = 1.0 - 2.0 * a
    return [[a, a, b], [a, b, a], [b, a, a]]


def dunavant_rule(degree: int = DEFAULT_DEGREE) -> tuple:
    """Symmetric quadrature rule on the triangle in barycentric coordinates. Weights sum to one.

    Args:
        degree (int): Polynomial degree that is integrated exactly, one of 1, 2, 4, 5. Default is 4.

    Returns:
        tuple: Barycentric points of shape `(n, 3)` and weights of shape `(n, )`.
    """
    if degree == 1:
        points, weights = [[1 / 3, 1 / 3, 1 / 3]], [1.0]
    elif degree == 2:
        points, weights = _orbit(1 / 6), [1 / 3] * 3
    elif degree == 4:
        points = _orbit(0.445948490915965) + _orbit(0.091576213509771)
        weights = [0.223381589678011] * 3 + [0.109951743655322] * 3
    elif degree == 5:
        points = [[1 / 3, 1 / 3, 1 / 3]] + _orbit(0.470142064105115) + _orbit(0.101286507323456)
        weights = [0.225] + [0.132394152788506] * 3 + [0.125939180544827] * 3
    else:
        raise ValueError("Unsupported quadrature degree %s, use 1, 2, 4 or 5." % degree)
    return np.array(points, dtype="float"), np.array(weights, dtype="float")


_DU = np.array([-1.0, 1.0, 0.0])
_DV = np.array([-1.0, 0.0, 1.0])


def pushforward(fmap: SurfaceMap, face: int, bary, step: float = DEFAULT_STEP) -> tuple:
    """Lifted image and the two pushforward tangents along the reference directions of a face, by central
    finite differences of the interpolation."""
    bary = np.asarray(bary, dtype="float")
    p = fmap.lifted(face, bary)
    tu = (fmap.lifted(face, bary + step * _DU) - fmap.lifted(face, bary - step * _DU)) / (2 * step)
    tv = (fmap.lifted(face, bary + step * _DV) - fmap.lifted(face, bary - step * _DV)) / (2 * step)
    return p, tu, tv


def face_integral(form: FormOracle, fmap: SurfaceMap, face: int, degree: int = DEFAULT_DEGREE,
                  step: float = DEFAULT_STEP, sign: int = None) -> float:
    r"""Integral of :math:`\Phi^* \omega` over one face, oriented by `sign` or the face flag."""
    points, weights = dunavant_rule(degree)
    sign = int(fmap.surface.flags[face]) if sign is None else int(sign)
    values = []
    for b, w in zip(points, weights):
        p, tu, tv = pushforward(fmap, face, b, step=step)
        values.append(w * form(p, tu, tv))
    return sign * 0.5 * math.fsum(values)


def face_integrals(form: FormOracle, fmap: SurfaceMap, degree: int = DEFAULT_DEGREE, step: float = DEFAULT_STEP,
                   face_signs=None, faces=None) -> np.ndarray:
    """Integrals per face, see :obj:`pullback_integrate`."""
    if form.degree != 2:
        raise ValueError("Pullback integration requires a 2-form, got degree %s." % form.degree)
    if form.target != fmap.target:
        raise ValueError("Form target %s does not match map target %s." % (form.target, fmap.target))
    faces = range(fmap.surface.n_faces) if faces is None else faces
    return np.array([face_integral(form, fmap, f, degree=degree, step=step,
                                   sign=None if face_signs is None else face_signs[f]) for f in faces])


def pullback_integrate(form: FormOracle, fmap: SurfaceMap, degree: int = DEFAULT_DEGREE, step: float = DEFAULT_STEP,
                       face_signs=None, return_error: bool = False):
    r"""Integral :math:`\int_\Sigma \Phi^* \omega` of a 2-form over a surface map.

    Each face is integrated with a symmetric triangle rule in its reference parametrization. Pushforward tangents come
    from central differences of the interpolation. Faces count with their orientation flag, unless `face_signs`
    supplies a per-face orientation choice for surfaces without global orientation.

    Args:
        form (FormOracle): Form of degree 2.
        fmap (SurfaceMap): Surface map.
        degree (int): Quadrature degree. Default is 4.
        step (float): Finite-difference step for pushforwards. Default is 1e-5.
        face_signs (np.ndarray): Per-face orientation override. Default is None.
        return_error (bool): Whether to also return the difference to the next higher rule. Default is False.

    Returns:
        float: Integral, and the error estimate if `return_error`.
    """
    if face_signs is None and not fmap.surface.is_oriented:
        raise ValueError("Surface '%s' is not oriented, supply per-face orientation signs." % fmap.surface.name)
    value = math.fsum(face_integrals(form, fmap, degree=degree, step=step, face_signs=face_signs))
    if not return_error:
        return value
    other = 5 if degree != 5 else 4
    estimate = math.fsum(face_integrals(form, fmap, degree=other, step=step, face_signs=face_signs))
    return value, abs(estimate - value)


def integrate_density(form: FormOracle, total_map: SurfaceMap, face_lifts, degree: int = DEFAULT_DEGREE,
                      step: float = DEFAULT_STEP) -> float:
    r"""Integral of a 2-density over an unoriented surface, given as a 2-form on the target and a map on the
    orientation double cover. Base face :math:`f` contributes the integral over its chosen lift with the lift's
    orientation. The sum is independent of the lifts if the form is odd under the deck transformation.

    Args:
        form (FormOracle): Form of degree 2.
        total_map (SurfaceMap): Map on the total surface of the double cover.
        face_lifts (list): Chosen total face for every base face.

    Returns:
        float: Integral.
    """
    lifts = np.asarray(face_lifts, dtype="int")
    return math.fsum(face_integrals(form, total_map, degree=degree, step=step, faces=lifts))
