import numpy as np
from scipy.stats import qmc

# Quaternions are arrays with last axis [w, x, y, z]. Unit quaternions represent SU(2), pure imaginary quaternions
# its Lie algebra su(2) identified with R^3.

_SMALL_ANGLE = 1e-3


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product with broadcasting over leading axes."""
    a, b = np.asarray(a, dtype="float"), np.asarray(b, dtype="float")
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw], axis=-1)


def qconj(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype="float")
    a[..., 1:] = -a[..., 1:]
    return a


def qnormalize(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype="float")
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def qim(q: np.ndarray) -> np.ndarray:
    """Imaginary part as 3-vector."""
    return np.asarray(q, dtype="float")[..., 1:]


def pure(v: np.ndarray) -> np.ndarray:
    """Embed 3-vectors as pure imaginary quaternions."""
    v = np.asarray(v, dtype="float")
    return np.concatenate([np.zeros(v.shape[:-1] + (1, )), v], axis=-1)


def _sinc(r):
    return np.sinc(r / np.pi)


def _dsinc_over_r(r):
    r"""The function :math:`(r \cos r - \sin r) / r^3` with its series at small r."""
    r = np.asarray(r, dtype="float")
    small = r < _SMALL_ANGLE
    safe = np.where(small, 1.0, r)
    exact = (safe * np.cos(safe) - np.sin(safe)) / safe ** 3
    series = -1.0 / 3.0 + r ** 2 / 30.0
    return np.where(small, series, exact)


def qexp(v: np.ndarray) -> np.ndarray:
    r"""Exponential of the pure quaternion :math:`v`, i.e. :math:`\cos|v| + \sin|v| \, v/|v|`."""
    v = np.asarray(v, dtype="float")
    r = np.linalg.norm(v, axis=-1)
    return np.concatenate([np.cos(r)[..., None], _sinc(r)[..., None] * v], axis=-1)


def qlog(q: np.ndarray) -> np.ndarray:
    """Principal logarithm of a unit quaternion as 3-vector of norm in [0, pi]."""
    q = np.asarray(q, dtype="float")
    im = q[..., 1:]
    s = np.linalg.norm(im, axis=-1)
    psi = np.arctan2(s, q[..., 0])
    scale = np.where(s > 0, psi / np.where(s > 0, s, 1.0), 1.0)
    return scale[..., None] * im


def dqexp(xi: np.ndarray, v: np.ndarray) -> np.ndarray:
    r"""Differential of :obj:`qexp` at :math:`\xi` applied to the direction :math:`v`.

    With :math:`r = |\xi|` the real part is :math:`-\mathrm{sinc}(r) \, \xi \cdot v` and the imaginary part
    :math:`\mathrm{sinc}(r) v + \frac{r \cos r - \sin r}{r^3} (\xi \cdot v) \xi`.
    """
    xi, v = np.asarray(xi, dtype="float"), np.asarray(v, dtype="float")
    r = np.linalg.norm(xi, axis=-1)
    dot = np.sum(xi * v, axis=-1)
    real = -_sinc(r) * dot
    imag = _sinc(r)[..., None] * v + (_dsinc_over_r(r) * dot)[..., None] * xi
    return np.concatenate([real[..., None], imag], axis=-1)


def quaternion_angle(q: np.ndarray) -> np.ndarray:
    r"""Class angle :math:`\theta \in [0, \pi]` with :math:`\mathrm{Re}(q) = \cos \theta`."""
    q = np.asarray(q, dtype="float")
    return np.arctan2(np.linalg.norm(q[..., 1:], axis=-1), q[..., 0])


def quaternion_to_rotation(q: np.ndarray) -> np.ndarray:
    r"""Adjoint action :math:`\mathrm{Ad}_q: v \mapsto q v \bar{q}` on imaginary parts as rotation matrices."""
    q = qnormalize(q)
    qw, qx, qy, qz = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    m = np.empty(q.shape[:-1] + (3, 3))
    m[..., 0, 0] = 1 - 2 * qy * qy - 2 * qz * qz
    m[..., 0, 1] = 2 * qx * qy - 2 * qz * qw
    m[..., 0, 2] = 2 * qx * qz + 2 * qy * qw
    m[..., 1, 0] = 2 * qx * qy + 2 * qz * qw
    m[..., 1, 1] = 1 - 2 * qx * qx - 2 * qz * qz
    m[..., 1, 2] = 2 * qy * qz - 2 * qx * qw
    m[..., 2, 0] = 2 * qx * qz - 2 * qy * qw
    m[..., 2, 1] = 2 * qy * qz + 2 * qx * qw
    m[..., 2, 2] = 1 - 2 * qx * qx - 2 * qy * qy
    return m


def _marsaglia_pairs(rng: np.random.Generator, n: int):
    """Generate n pairs uniformly in the open unit disk together with their squared norm."""
    out, norms = np.zeros((0, 2)), np.zeros(0)
    while len(out) < n:
        pairs = rng.uniform(-1.0, 1.0, size=(int(1.3 * (n - len(out))) + 16, 2))
        z = np.sum(pairs ** 2, axis=-1)
        out = np.concatenate([out, pairs[z < 1]])
        norms = np.concatenate([norms, z[z < 1]])
    return out[:n], norms[:n]


def random_quaternions(n: int, rng: np.random.Generator = None) -> np.ndarray:
    """Haar distributed unit quaternions using Marsaglia's method.

    Args:
        n (int): Number of samples.
        rng (np.random.Generator): Random generator. Default is None, which uses `np.random.default_rng(0)`.

    Returns:
        np.ndarray: Unit quaternions of shape `(n, 4)`.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    xy, z = _marsaglia_pairs(rng, n)
    uv, w = _marsaglia_pairs(rng, n)
    s = np.sqrt((1 - z) / w)
    q = np.empty((n, 4))
    q[:, :2] = xy
    q[:, 2:] = s[:, None] * uv
    return q


def uniform_to_quaternions(u: np.ndarray) -> np.ndarray:
    """Map points of the unit cube `[0, 1)^3` to Haar distributed unit quaternions (Shoemake's subgroup algorithm).
    Low-discrepancy input gives low-discrepancy samples of SU(2)."""
    u = np.asarray(u, dtype="float")
    r1, r2 = np.sqrt(1 - u[..., 0]), np.sqrt(u[..., 0])
    t1, t2 = 2 * np.pi * u[..., 1], 2 * np.pi * u[..., 2]
    return np.stack([r2 * np.cos(t2), r1 * np.sin(t1), r1 * np.cos(t1), r2 * np.sin(t2)], axis=-1)


def halton_points(n: int, dim: int, seed: int = 0) -> np.ndarray:
    """Scrambled Halton points in `[0, 1)^dim` from :obj:`scipy.stats.qmc`."""
    sampler = qmc.Halton(d=dim, scramble=True, seed=seed)
    return sampler.random(n)


def halton_quaternions(n: int, seed: int = 0) -> np.ndarray:
    return uniform_to_quaternions(halton_points(n, 3, seed=seed))


def random_unit_vectors(n: int, rng: np.random.Generator, dim: int = 3) -> np.ndarray:
    v = rng.normal(size=(n, dim))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def slerp(p: np.ndarray, q: np.ndarray, t: float) -> np.ndarray:
    """Spherical linear interpolation between unit quaternions, moving along the great circle through p and q."""
    p, q = np.asarray(p, dtype="float"), np.asarray(q, dtype="float")
    cos_angle = np.clip(np.sum(p * q, axis=-1), -1.0, 1.0)
    angle = np.arccos(cos_angle)
    if np.all(angle < 1e-12):
        return qnormalize((1 - t) * p + t * q)
    s = np.sin(angle)
    return (np.sin((1 - t) * angle) / s)[..., None] * p + (np.sin(t * angle) / s)[..., None] * q


def det4(a, b, c, d) -> np.ndarray:
    """Determinant of four quaternions stacked as columns."""
    return np.linalg.det(np.stack([a, b, c, d], axis=-1))
