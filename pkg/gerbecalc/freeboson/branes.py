import logging
import numpy as np
from fractions import Fraction
from typing import Union
from gerbecalc.fields.target import CircleTarget, ProductTarget, low_discrepancy_points
from gerbecalc.fields.forms import constant_form, factor_pullback, zero_form
from gerbecalc.gerbedata.branes import WorldVolume, DBraneRecord, BiBraneRecord, point_world_volume, \
    full_world_volume

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

Number = Union[Fraction, float, int]


def _reduce(u: Number) -> Number:
    """Representative in [0, 1) of a fraction of a period, exact for rationals."""
    if isinstance(u, (Fraction, int)):
        return Fraction(u) % 1
    u = float(np.mod(float(u), 1.0))
    return 0.0 if u == 1.0 else u


def _check_radius(a, b):
    if abs(a.radius - b.radius) > 1e-12 * max(1.0, abs(a.radius)):
        raise ValueError("Radius mismatch %s and %s." % (a.radius, b.radius))


def _wrap(d: np.ndarray, period: float) -> np.ndarray:
    return np.mod(d + 0.5 * period, period) - 0.5 * period


class _CircleBrane:

    def __init__(self, radius: float):
        radius = float(radius)
        if radius <= 0:
            raise ValueError("Radius must be positive, got %s." % radius)
        self.radius = radius

    @property
    def period(self) -> float:
        r"""Circumference :math:`L = 2\pi R`."""
        return 2 * np.pi * self.radius

    @property
    def wilson_period(self) -> float:
        r"""Period :math:`1 / (2\pi R)` of Wilson lines."""
        return 1.0 / self.period

    @property
    def target(self) -> CircleTarget:
        return CircleTarget(radius=self.radius)


class D0Brane(_CircleBrane):
    r"""D0-brane of the compactified free boson, localized at the point :math:`x \in S^1_R`.

    The position is stored as fraction `u` of the circumference, :math:`x = u \cdot 2\pi R`, and kept exact if
    given as :obj:`fractions.Fraction`.

    Args:
        radius (float): Radius :math:`R`.
        u (Fraction, float): Position as fraction of the circumference.
    """

    def __init__(self, radius: float, u: Number):
        super(D0Brane, self).__init__(radius)
        self.u = _reduce(u)

    @classmethod
    def at(cls, radius: float, x: float):
        """D0-brane at the angle position `x` in length units."""
        return cls(radius, float(x) / (2 * np.pi * float(radius)))

    @property
    def x(self) -> float:
        return float(self.u) * self.period

    def world_volume(self) -> WorldVolume:
        return point_world_volume(self.target, [self.x])

    def record(self) -> DBraneRecord:
        """Brane with trivial 2-form and the trivial flat line bundle on the point."""
        return DBraneRecord(self.world_volume(), zero_form(self.target, 2), zero_form(self.target, 1),
                            name="D0(%s)" % self.u)

    def __eq__(self, other):
        return isinstance(other, D0Brane) and self.radius == other.radius and self.u == other.u

    def __hash__(self):
        return hash(("D0", self.radius, self.u))

    def __repr__(self):
        return "D0Brane(R=%s, u=%s)" % (self.radius, self.u)


class D1Brane(_CircleBrane):
    r"""D1-brane of the compactified free boson wrapping the circle, characterized by a flat connection
    :math:`\alpha \, dy` with Wilson line :math:`\alpha \in \mathbb{R} / \frac{1}{2\pi R}\mathbb{Z}`.

    Args:
        radius (float): Radius :math:`R`.
        a (Fraction, float): Wilson line as fraction of the Wilson period :math:`1/(2\pi R)`.
    """

    def __init__(self, radius: float, a: Number):
        super(D1Brane, self).__init__(radius)
        self.a = _reduce(a)

    @classmethod
    def with_wilson_line(cls, radius: float, alpha: float):
        return cls(radius, float(alpha) * 2 * np.pi * float(radius))

    @property
    def alpha(self) -> float:
        return float(self.a) * self.wilson_period

    def world_volume(self) -> WorldVolume:
        return full_world_volume(self.target)

    def connection(self):
        return constant_form(self.target, [1.0], 1, scale=self.alpha, name="circle.dx")

    def record(self) -> DBraneRecord:
        return DBraneRecord(self.world_volume(), zero_form(self.target, 2), self.connection(),
                            name="D1(%s)" % self.a)

    def __eq__(self, other):
        return isinstance(other, D1Brane) and self.radius == other.radius and self.a == other.a

    def __hash__(self):
        return hash(("D1", self.radius, self.a))

    def __repr__(self):
        return "D1Brane(R=%s, a=%s)" % (self.radius, self.a)


class FreeBosonBiBrane(_CircleBrane):
    r"""Bi-brane :math:`\mathcal{B}_{(x, \alpha)}` of the compactified free boson. Its world volume is the shifted
    diagonal :math:`\{(y, y - x)\} \subset S^1_R \times S^1_R`, a circle, with vanishing 2-form and the flat
    connection :math:`\alpha \, dy'` in the coordinate of the second factor.

    Args:
        radius (float): Radius :math:`R`.
        u (Fraction, float): Shift as fraction of the circumference.
        a (Fraction, float): Wilson line as fraction of the Wilson period.
    """

    def __init__(self, radius: float, u: Number = 0, a: Number = 0):
        super(FreeBosonBiBrane, self).__init__(radius)
        self.u = _reduce(u)
        self.a = _reduce(a)

    @property
    def x(self) -> float:
        return float(self.u) * self.period

    @property
    def alpha(self) -> float:
        return float(self.a) * self.wilson_period

    @property
    def product_target(self) -> ProductTarget:
        return ProductTarget(self.target, self.target)

    def fiber(self, y) -> np.ndarray:
        """The unique partner :math:`y - x` of points :math:`y` of the first factor."""
        return np.mod(np.asarray(y, dtype="float") - self.x, self.period)

    def cofiber(self, y2) -> np.ndarray:
        """The unique partner :math:`y' + x` of points :math:`y'` of the second factor."""
        return np.mod(np.asarray(y2, dtype="float") + self.x, self.period)

    def residual(self, p) -> np.ndarray:
        p = np.asarray(p, dtype="float")
        return np.abs(_wrap(p[..., 0] - p[..., 1] - self.x, self.period))

    def world_volume(self) -> WorldVolume:
        def sampler(n, seed):
            y = low_discrepancy_points(self.target, n, seed)[:, 0]
            return np.stack([y, self.fiber(y)], axis=-1)

        return WorldVolume(self.product_target, self.residual, sampler, 1, name="B(%s,%s)" % (self.u, self.a))

    def record(self) -> BiBraneRecord:
        """Bi-brane record with :math:`\\varpi = 0` and bundle :math:`\\alpha \\, dy'`."""
        connection = factor_pullback(constant_form(self.target, [1.0], 1, scale=self.alpha, name="circle.dx"),
                                     self.product_target, 2)
        return BiBraneRecord(self.world_volume(), zero_form(self.product_target, 2), connection,
                             name="B(%s,%s)" % (self.u, self.a))

    def __eq__(self, other):
        return isinstance(other, FreeBosonBiBrane) and self.radius == other.radius and \
            (self.u, self.a) == (other.u, other.a)

    def __hash__(self):
        return hash(("B", self.radius, self.u, self.a))

    def __repr__(self):
        return "FreeBosonBiBrane(R=%s, u=%s, a=%s)" % (self.radius, self.u, self.a)


def bibrane_record(bibrane: FreeBosonBiBrane) -> BiBraneRecord:
    return bibrane.record()


def fuse_defect_d0(bibrane: FreeBosonBiBrane, brane: D0Brane) -> D0Brane:
    r"""Fusion :math:`\mathcal{B}_{(x,\alpha)} \star D^{(0)}_y = D^{(0)}_{x+y}`, a translation of the position."""
    _check_radius(bibrane, brane)
    return D0Brane(bibrane.radius, bibrane.u + brane.u)


def fuse_defect_d1(bibrane: FreeBosonBiBrane, brane: D1Brane) -> D1Brane:
    r"""Fusion :math:`\mathcal{B}_{(x,\alpha)} \star D^{(1)}_\beta = D^{(1)}_{\alpha+\beta}`, a translation of the
    Wilson line."""
    _check_radius(bibrane, brane)
    return D1Brane(bibrane.radius, bibrane.a + brane.a)


def fuse_defects(first: FreeBosonBiBrane, second: FreeBosonBiBrane) -> FreeBosonBiBrane:
    r"""Fusion :math:`\mathcal{B}_{(x,\alpha)} \star \mathcal{B}_{(x',\alpha')} = \mathcal{B}_{(x+x',\alpha+\alpha')}`."""
    _check_radius(first, second)
    return FreeBosonBiBrane(first.radius, first.u + second.u, first.a + second.a)


def _wilson_integral(connection, points, tangents, period: float, n_nodes: int = 16) -> float:
    """Integral of a connection 1-form along the loop `points(t)`, `t` in [0, 1], with constant velocity."""
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    t_nodes, t_weights = 0.5 * (nodes + 1.0), 0.5 * weights
    return float(sum(w * connection(points(t), tangents) for t, w in zip(t_nodes, t_weights))) / period


def correspondence_d0(bibrane: FreeBosonBiBrane, brane: D0Brane, tolerance: float = 1e-10) -> dict:
    r"""Fusion with a D0-brane as correspondence :math:`p_1(\mathcal{B} \cap p_2^{-1}(Q))`.

    The fiber of :math:`\mathcal{B}` over the point :math:`Q` is found from the membership predicates of both world
    volumes and projected to the first factor.

    Returns:
        dict: The position 'u' of the image point, the membership 'residual' and whether it is 'consistent' with
            :obj:`fuse_defect_d0`.
    """
    _check_radius(bibrane, brane)
    q = brane.world_volume()
    y2 = q.sample(1)[0, 0]
    y1 = bibrane.cofiber(y2)
    residual = max(float(bibrane.residual(np.array([y1, y2]))),
                   float(np.max(q.residual(np.array([y2])))))
    image = float(y1) / bibrane.period
    expected = fuse_defect_d0(bibrane, brane)
    deviation = abs(float(_wrap(np.array(image - float(expected.u)), 1.0)))
    return {"u": image, "residual": residual, "consistent": bool(residual <= tolerance and
                                                                 deviation * bibrane.period <= tolerance)}


def correspondence_d1(bibrane: FreeBosonBiBrane, brane: D1Brane, n_samples: int = 64, seed: int = 0,
                      tolerance: float = 1e-10) -> dict:
    r"""Fusion with a D1-brane as correspondence. The world volume :math:`p_1(\mathcal{B} \cap p_2^{-1}(S^1))` is the
    full circle, and the bundle :math:`p_2^* E \otimes E_{\mathcal{B}}` pulled back along :math:`y \mapsto (y, y-x)`
    has Wilson line given by its integral around the circle divided by the circumference.

    Returns:
        dict: The Wilson line 'a' as fraction of its period, the 'coverage' gap of the projected world volume and
            whether it is 'consistent' with :obj:`fuse_defect_d1`.
    """
    _check_radius(bibrane, brane)
    world_volume = bibrane.world_volume()
    points = world_volume.sample(n_samples, seed)
    residual = float(np.max(world_volume.residual(points)))
    projected = np.sort(points[:, 0])
    gaps = np.diff(np.concatenate([projected, [projected[0] + bibrane.period]]))
    coverage = float(np.max(gaps)) / bibrane.period
    e_b = bibrane.record().bundle.forms[0]
    e_d = factor_pullback(brane.connection(), bibrane.product_target, 2)
    period = bibrane.period

    def loop(t):
        y = t * period
        return np.array([y, y - bibrane.x])

    velocity = np.array([period, period])
    wilson = _wilson_integral(e_b, loop, velocity, period) + _wilson_integral(e_d, loop, velocity, period)
    a = float(np.mod(wilson / bibrane.wilson_period, 1.0))
    expected = fuse_defect_d1(bibrane, brane)
    deviation = abs(float(_wrap(np.array(a - float(expected.a)), 1.0)))
    return {"a": a, "residual": residual, "coverage": coverage,
            "consistent": bool(residual <= tolerance and deviation <= 1e-9)}


def correspondence_bibrane(first: FreeBosonBiBrane, second: FreeBosonBiBrane, n_samples: int = 200, seed: int = 0,
                           tolerance: float = 1e-10) -> dict:
    r"""Fusion of bi-branes as correspondence :math:`p_{13}(p_{12}^{-1}\mathcal{B} \cap p_{23}^{-1}\mathcal{B}')`.

    Points :math:`(y_1, y_2)` of the first world volume are completed by the fiber :math:`y_3` of the second over
    :math:`y_2`, and the projected pairs :math:`(y_1, y_3)` are recognized as the graph of a shift.

    Returns:
        dict: The recognized 'shift' as fraction of the circumference, the graph 'residual' against the shift of
            :obj:`fuse_defects` and the membership residual of the triples.
    """
    _check_radius(first, second)
    points = first.world_volume().sample(n_samples, seed)
    y1, y2 = points[:, 0], points[:, 1]
    y3 = second.fiber(y2)
    membership = max(float(np.max(first.residual(np.stack([y1, y2], axis=-1)))),
                     float(np.max(second.residual(np.stack([y2, y3], axis=-1)))))
    period = first.period
    differences = _wrap(y1 - y3, period)
    shift = float(np.mod(differences[0], period))
    fused = fuse_defects(first, second)
    residual = float(np.max(np.abs(_wrap(y1 - y3 - fused.x, period))))
    return {"shift": shift / period, "residual": residual, "membership": membership,
            "consistent": bool(residual <= tolerance and membership <= tolerance)}
