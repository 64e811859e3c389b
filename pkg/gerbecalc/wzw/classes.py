import numpy as np
from gerbecalc.ops.quaternion import qmul, qconj, quaternion_angle, halton_points, uniform_to_quaternions, \
    random_quaternions

DEFAULT_MEMBERSHIP_TOLERANCE = 1e-9


def _conjugate(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    return qmul(qmul(x, g), qconj(x))


class ConjugacyClass:
    r"""Conjugacy class :math:`C_\theta = \{ g \in SU(2) : \mathrm{Re}(g) = \cos \theta \}` for
    :math:`\theta \in [0, \pi]`. The angles 0 and :math:`\pi` give the singletons :math:`\{\pm 1\}`, all other classes
    are 2-spheres."""

    def __init__(self, theta: float):
        theta = float(theta)
        if not -1e-12 <= theta <= np.pi + 1e-12:
            raise ValueError("Class angle must be in [0, pi], got %s." % theta)
        self.theta = min(max(theta, 0.0), np.pi)

    @property
    def is_singleton(self) -> bool:
        return abs(np.sin(self.theta)) < 1e-12

    @property
    def dim(self) -> int:
        return 0 if self.is_singleton else 2

    def residual(self, g) -> np.ndarray:
        """Membership residual :math:`|\\mathrm{Re}(g) - \\cos\\theta|` of unit quaternions."""
        g = np.asarray(g, dtype="float")
        return np.abs(g[..., 0] - np.cos(self.theta))

    def contains(self, g, tolerance: float = DEFAULT_MEMBERSHIP_TOLERANCE) -> bool:
        g = np.asarray(g, dtype="float")
        return bool(np.all(self.residual(g) <= tolerance)) and bool(
            np.all(np.abs(np.linalg.norm(g, axis=-1) - 1.0) <= tolerance))

    def element(self, axis) -> np.ndarray:
        """Class element :math:`\\cos\\theta + \\sin\\theta \\, n` for a unit axis `n`."""
        axis = np.asarray(axis, dtype="float")
        axis = axis / np.linalg.norm(axis, axis=-1, keepdims=True)
        return np.concatenate([np.full(axis.shape[:-1] + (1, ), np.cos(self.theta)), np.sin(self.theta) * axis],
                              axis=-1)

    def sample(self, n: int, seed: int = 0, low_discrepancy: bool = True) -> np.ndarray:
        """Points of the class, uniformly distributed over the sphere of axes.

        Args:
            n (int): Number of points.
            seed (int): Seed of the sampler. Default is 0.
            low_discrepancy (bool): Use scrambled Halton points. Default is True.

        Returns:
            np.ndarray: Unit quaternions of shape `(n, 4)`.
        """
        if low_discrepancy:
            u = halton_points(n, 2, seed=seed)
        else:
            u = np.random.default_rng(seed).uniform(size=(n, 2))
        z = 1.0 - 2.0 * u[:, 0]
        phi = 2 * np.pi * u[:, 1]
        r = np.sqrt(np.clip(1.0 - z ** 2, 0.0, None))
        axes = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)
        return self.element(axes)

    def tangent_basis(self, g) -> np.ndarray:
        """Two tangent vectors at `g` spanning the tangent space of the class."""
        g = np.asarray(g, dtype="float")
        n = g[1:] / np.linalg.norm(g[1:])
        helper = np.eye(3)[int(np.argmin(np.abs(n)))]
        e1 = np.cross(n, helper)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        return np.array([np.concatenate([[0.0], np.sin(self.theta) * e]) for e in [e1, e2]])

    def __repr__(self):
        return "ConjugacyClass(theta=%s)" % self.theta


class BiconjugacyClass:
    r"""Biconjugacy class :math:`\{(g, g') \in SU(2) \times SU(2) : g g'^{-1} \in C_\theta\}`. It is invariant under
    :math:`(g, g') \mapsto (x_1 g x_2^{-1}, x_1 g' x_2^{-1})`. Points of :math:`G \times G` are concatenated
    quaternions of length 8."""

    def __init__(self, theta: float):
        self.conjugacy_class = ConjugacyClass(theta)

    @property
    def theta(self) -> float:
        return self.conjugacy_class.theta

    @staticmethod
    def quotient(pair) -> np.ndarray:
        r"""The map :math:`\tilde{\mu}(g, g') = g g'^{-1}`."""
        pair = np.asarray(pair, dtype="float")
        return qmul(pair[..., :4], qconj(pair[..., 4:]))

    def residual(self, pair) -> np.ndarray:
        return self.conjugacy_class.residual(self.quotient(pair))

    def contains(self, pair, tolerance: float = DEFAULT_MEMBERSHIP_TOLERANCE) -> bool:
        return self.conjugacy_class.contains(self.quotient(pair), tolerance)

    def sample(self, n: int, seed: int = 0, low_discrepancy: bool = True) -> np.ndarray:
        """Pairs `(c g', g')` with `c` in the class and `g'` Haar distributed."""
        classes = self.conjugacy_class.sample(n, seed=seed, low_discrepancy=low_discrepancy)
        if low_discrepancy:
            second = uniform_to_quaternions(halton_points(n, 3, seed=seed + 1))
        else:
            second = random_quaternions(n, np.random.default_rng(seed + 1))
        return np.concatenate([qmul(classes, second), second], axis=-1)

    def __repr__(self):
        return "BiconjugacyClass(theta=%s)" % self.theta


class BraneLabel:
    r"""Integrable highest weight :math:`0 \le \alpha \le k` of :math:`\widehat{su}(2)_k`, labelling the symmetric
    D-brane on the class with angle :math:`\theta_\alpha = \pi (\alpha + 1) / (k + 2)`."""

    def __init__(self, k: int, alpha: int):
        k, alpha = int(k), int(alpha)
        if k < 1:
            raise ValueError("Level must be positive, got %s." % k)
        if not 0 <= alpha <= k:
            raise ValueError("Label %s out of range [0, %s]." % (alpha, k))
        self.k = k
        self.alpha = alpha

    @property
    def theta(self) -> float:
        return np.pi * (self.alpha + 1) / (self.k + 2)

    @property
    def conjugacy_class(self) -> ConjugacyClass:
        return ConjugacyClass(self.theta)

    def __eq__(self, other):
        return isinstance(other, BraneLabel) and (self.k, self.alpha) == (other.k, other.alpha)

    def __hash__(self):
        return hash((self.k, self.alpha))

    def __repr__(self):
        return "BraneLabel(k=%s, alpha=%s)" % (self.k, self.alpha)


def class_angle(g) -> np.ndarray:
    return quaternion_angle(g)


def random_conjugation(rng: np.random.Generator) -> np.ndarray:
    return random_quaternions(1, rng)[0]


def conjugate_points(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Simultaneous conjugation :math:`x g x^{-1}`, acting on every quaternion block of `g`."""
    g = np.asarray(g, dtype="float")
    blocks = g.reshape(g.shape[:-1] + (-1, 4))
    return _conjugate(x, blocks).reshape(g.shape)
