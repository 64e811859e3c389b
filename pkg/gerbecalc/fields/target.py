import numpy as np
from typing import Union
from gerbecalc.ops.quaternion import qmul, qconj, qexp, dqexp, qnormalize, qim, pure, random_quaternions, \
    halton_points, halton_quaternions


class TargetSpace:
    r"""Base class of model target spaces :math:`M`.

    Points are arrays of length `ambient_dim` and tangent vectors live in the same ambient space. Every target carries
    charts `chart(p, xi)` around a point `p`, with coordinates :math:`\xi \in \mathbb{R}^{dim}` and
    `chart(p, 0) = p`, which are used for finite-difference derivatives.
    """

    kind = None
    dim = 0
    ambient_dim = 0

    def reduce(self, p: np.ndarray) -> np.ndarray:
        """Canonical representative of a point."""
        raise NotImplementedError("Target %s must implement `reduce`." % self.kind)

    def chart(self, p: np.ndarray, xi: np.ndarray) -> np.ndarray:
        raise NotImplementedError("Target %s must implement `chart`." % self.kind)

    def chart_push(self, p: np.ndarray, xi: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Differential of `chart(p, .)` at `xi` applied to the coordinate vector `v`."""
        raise NotImplementedError("Target %s must implement `chart_push`." % self.kind)

    def to_chart(self, p: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Coordinates at the chart origin of the ambient tangent vector `x` at `p`."""
        raise NotImplementedError("Target %s must implement `to_chart`." % self.kind)

    def random_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError("Target %s must implement `random_points`." % self.kind)

    def random_tangents(self, p: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
        """Random ambient tangent vectors at `p` of shape `(n, ambient_dim)`."""
        xi = rng.normal(size=(n, self.dim))
        return np.array([self.chart_push(p, np.zeros(self.dim), x) for x in xi])

    def distance(self, p: np.ndarray, q: np.ndarray) -> float:
        raise NotImplementedError("Target %s must implement `distance`." % self.kind)

    def get_config(self) -> dict:
        return {"kind": self.kind}

    def __eq__(self, other):
        return isinstance(other, TargetSpace) and self.get_config() == other.get_config()

    def __hash__(self):
        return hash(str(self.get_config()))

    def __repr__(self):
        return "TargetSpace(%s)" % self.get_config()


class FlatTarget(TargetSpace):
    r"""Flat torus :math:`\mathbb{R}^n / (L_1 \mathbb{Z} \times \dots \times L_n \mathbb{Z})`. Points are stored as lifted
    coordinates, `reduce` maps them to :math:`[0, L_i)`. Chart coordinates are plain coordinate shifts."""

    def __init__(self, periods):
        self.periods = np.array(periods, dtype="float").reshape(-1)
        if np.any(self.periods <= 0):
            raise ValueError("Periods must be positive, got %s." % self.periods)
        self.dim = len(self.periods)
        self.ambient_dim = len(self.periods)

    def reduce(self, p):
        return np.mod(np.asarray(p, dtype="float"), self.periods)

    def chart(self, p, xi):
        return np.asarray(p, dtype="float") + np.asarray(xi, dtype="float")

    def chart_push(self, p, xi, v):
        return np.array(v, dtype="float")

    def to_chart(self, p, x):
        return np.array(x, dtype="float")

    def random_points(self, n, rng):
        return rng.uniform(size=(n, self.dim)) * self.periods

    def distance(self, p, q):
        d = np.mod(np.asarray(p) - np.asarray(q) + 0.5 * self.periods, self.periods) - 0.5 * self.periods
        return float(np.linalg.norm(d))


class CircleTarget(FlatTarget):
    r"""Circle :math:`S^1_R` of radius :math:`R` with period :math:`L = 2 \pi R`."""

    kind = "circle"

    def __init__(self, radius: float = None, period: float = None):
        if period is None:
            period = 2 * np.pi * (1.0 if radius is None else float(radius))
        super(CircleTarget, self).__init__([period])

    @property
    def period(self) -> float:
        return float(self.periods[0])

    @property
    def radius(self) -> float:
        return self.period / (2 * np.pi)

    def get_config(self):
        return {"kind": self.kind, "period": self.period}


class TorusTarget(FlatTarget):
    """Two-dimensional flat torus with periods of the two circle factors."""

    kind = "torus"

    def __init__(self, periods=(1.0, 1.0), radii=None):
        if radii is not None:
            periods = 2 * np.pi * np.array(radii, dtype="float")
        super(TorusTarget, self).__init__(periods)
        if self.dim != 2:
            raise ValueError("Torus target requires two periods, got %s." % self.periods)

    def get_config(self):
        return {"kind": self.kind, "periods": self.periods.tolist()}


class SU2Target(TargetSpace):
    r"""The group :math:`SU(2)` as unit quaternions in :math:`\mathbb{R}^4`. Charts are exponential coordinates
    :math:`\xi \mapsto p \exp(\xi)` with :math:`\xi \in \mathfrak{su}(2) \cong \mathbb{R}^3` acting as pure
    quaternion."""

    kind = "su2"
    dim = 3
    ambient_dim = 4

    def reduce(self, p):
        return qnormalize(p)

    def chart(self, p, xi):
        return qmul(p, qexp(xi))

    def chart_push(self, p, xi, v):
        return qmul(p, dqexp(xi, v))

    def to_chart(self, p, x):
        return qim(qmul(qconj(p), x))

    def random_points(self, n, rng):
        return random_quaternions(n, rng)

    def project_tangent(self, p, x):
        """Orthogonal projection of an ambient vector onto the tangent space at `p`."""
        p, x = np.asarray(p, dtype="float"), np.asarray(x, dtype="float")
        return x - np.sum(p * x, axis=-1, keepdims=True) * p

    def left_translate(self, p, x):
        """Tangent vector at `p` of the left-invariant field through `x` in the Lie algebra."""
        return qmul(p, pure(x))

    def distance(self, p, q):
        return float(np.arccos(np.clip(np.sum(np.asarray(p) * np.asarray(q)), -1.0, 1.0)))


class ProductTarget(TargetSpace):
    """Cartesian product of two targets. Points and tangents are concatenations of the factors."""

    kind = "product"

    def __init__(self, first: TargetSpace, second: TargetSpace):
        self.first = first
        self.second = second
        self.dim = first.dim + second.dim
        self.ambient_dim = first.ambient_dim + second.ambient_dim

    def split(self, p: np.ndarray) -> tuple:
        p = np.asarray(p, dtype="float")
        return p[..., :self.first.ambient_dim], p[..., self.first.ambient_dim:]

    def split_chart(self, xi: np.ndarray) -> tuple:
        xi = np.asarray(xi, dtype="float")
        return xi[..., :self.first.dim], xi[..., self.first.dim:]

    def reduce(self, p):
        a, b = self.split(p)
        return np.concatenate([self.first.reduce(a), self.second.reduce(b)], axis=-1)

    def chart(self, p, xi):
        a, b = self.split(p)
        s, t = self.split_chart(xi)
        return np.concatenate([self.first.chart(a, s), self.second.chart(b, t)], axis=-1)

    def chart_push(self, p, xi, v):
        a, b = self.split(p)
        s, t = self.split_chart(xi)
        u, w = self.split_chart(v)
        return np.concatenate([self.first.chart_push(a, s, u), self.second.chart_push(b, t, w)], axis=-1)

    def to_chart(self, p, x):
        a, b = self.split(p)
        u, w = self.split(x)
        return np.concatenate([self.first.to_chart(a, u), self.second.to_chart(b, w)], axis=-1)

    def random_points(self, n, rng):
        return np.concatenate([self.first.random_points(n, rng), self.second.random_points(n, rng)], axis=-1)

    def distance(self, p, q):
        a, b = self.split(p)
        c, d = self.split(q)
        return float(np.hypot(self.first.distance(a, c), self.second.distance(b, d)))

    def get_config(self):
        return {"kind": self.kind, "factors": [self.first.get_config(), self.second.get_config()]}


def make_target(config: Union[dict, str, TargetSpace]) -> TargetSpace:
    """Make a target space from a json description like `{"kind": "circle", "radius": 1.0}`.

    Args:
        config (dict, str): Target description or kind name.

    Returns:
        TargetSpace: Target instance.
    """
    if isinstance(config, TargetSpace):
        return config
    if isinstance(config, str):
        config = {"kind": config}
    if not isinstance(config, dict) or "kind" not in config:
        raise TypeError("Target description requires a dictionary with 'kind', got %s." % config)
    kind = config["kind"]
    if kind == "circle":
        return CircleTarget(radius=config.get("radius", None), period=config.get("period", None))
    elif kind == "torus":
        return TorusTarget(periods=config.get("periods", (1.0, 1.0)), radii=config.get("radii", None))
    elif kind == "su2":
        return SU2Target()
    elif kind == "product":
        factors = config.get("factors", [])
        if len(factors) != 2:
            raise ValueError("Product target requires two factors, got %s." % len(factors))
        return ProductTarget(make_target(factors[0]), make_target(factors[1]))
    raise ValueError("Unknown target kind '%s'." % kind)


def low_discrepancy_points(target: TargetSpace, n: int, seed: int = 0) -> np.ndarray:
    """Reproducible scrambled Halton points on a target, used by the sampling validators.

    Args:
        target (TargetSpace): Target space.
        n (int): Number of points.
        seed (int): Scrambling seed. Default is 0.

    Returns:
        np.ndarray: Points of shape `(n, ambient_dim)`.
    """
    if isinstance(target, FlatTarget):
        return halton_points(n, target.dim, seed=seed) * target.periods
    if isinstance(target, SU2Target):
        return halton_quaternions(n, seed=seed)
    if isinstance(target, ProductTarget):
        return np.concatenate([low_discrepancy_points(target.first, n, seed),
                               low_discrepancy_points(target.second, n, seed + 1)], axis=-1)
    raise ValueError("No low-discrepancy sampler for target %s." % target)
