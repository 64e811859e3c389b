import logging
import numpy as np
import pandas as pd
from gerbecalc.fields.forms import FormOracle, add_forms, register_form
from gerbecalc.gerbedata.report import ValidationReport
from gerbecalc.ops.quaternion import qmul, halton_points, quaternion_angle
from gerbecalc.wzw.classes import ConjugacyClass, BiconjugacyClass, BraneLabel
from gerbecalc.wzw.forms import omega_h, varpi, pull_to_pair, su2_pair_target, ClassForm

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


def _check_level(k: int) -> int:
    k = int(k)
    if k < 1:
        raise ValueError("Level must be positive, got %s." % k)
    return k


def _check_label(k: int, a: int) -> int:
    a = int(a)
    if not 0 <= a <= k:
        raise ValueError("Label %s out of range [0, %s]." % (a, k))
    return a


def brane_angles(k: int) -> list:
    r"""Class angles :math:`\theta_\alpha = \pi (\alpha + 1) / (k + 2)` of the symmetric D-branes at level `k`."""
    k = _check_level(k)
    return [np.pi * (a + 1) / (k + 2) for a in range(k + 1)]


def class_product_interval(theta1: float, theta2: float) -> tuple:
    r"""Range of class angles of products :math:`C_{\theta_1} C_{\theta_2}` in SU(2),
    :math:`[|\theta_1 - \theta_2|, \min(\theta_1 + \theta_2, 2\pi - \theta_1 - \theta_2)]`."""
    for t in [theta1, theta2]:
        if not -1e-12 <= t <= np.pi + 1e-12:
            raise ValueError("Class angle must be in [0, pi], got %s." % t)
    return abs(theta1 - theta2), min(theta1 + theta2, 2 * np.pi - theta1 - theta2)


def class_product_interval_units(m1: int, m2: int, n: int) -> tuple:
    """Exact version of :obj:`class_product_interval` for angles `m * pi / n` with integers `0 <= m <= n`."""
    m1, m2, n = int(m1), int(m2), int(n)
    if not (0 <= m1 <= n and 0 <= m2 <= n):
        raise ValueError("Angle units %s, %s out of range [0, %s]." % (m1, m2, n))
    return abs(m1 - m2), min(m1 + m2, 2 * n - m1 - m2)


def class_product_monte_carlo(theta1: float, theta2: float, n_samples: int = 100000, seed: int = 0,
                              chunk: int = 100000) -> tuple:
    """Empirical minimum and maximum class angle of products of random elements of two conjugacy classes."""
    c1, c2 = ConjugacyClass(theta1), ConjugacyClass(theta2)
    low, high = np.inf, -np.inf
    done = 0
    while done < n_samples:
        n = min(chunk, n_samples - done)
        a = c1.sample(n, seed=seed + 2 * done + 1, low_discrepancy=False)
        b = c2.sample(n, seed=seed + 2 * done + 2, low_discrepancy=False)
        angles = quaternion_angle(qmul(a, b))
        low, high = min(low, float(np.min(angles))), max(high, float(np.max(angles)))
        done += n
    return low, high


def verlinde_s_matrix(k: int) -> np.ndarray:
    r"""Modular S-matrix :math:`S_{ab} = \sqrt{2/(k+2)} \sin(\pi (a+1)(b+1)/(k+2))` of :math:`\widehat{su}(2)_k`."""
    k = _check_level(k)
    a = np.arange(k + 1)
    return np.sqrt(2.0 / (k + 2)) * np.sin(np.pi * np.outer(a + 1, a + 1) / (k + 2))


def quantum_dimensions(k: int) -> np.ndarray:
    r"""Quantum dimensions :math:`\sin(\pi (a+1)/(k+2)) / \sin(\pi/(k+2))`."""
    k = _check_level(k)
    return np.sin(np.pi * (np.arange(k + 1) + 1) / (k + 2)) / np.sin(np.pi / (k + 2))


def verlinde_multiplicities(k: int) -> np.ndarray:
    r"""Fusion multiplicities :math:`N_{ab}^c = \sum_m S_{am} S_{bm} S_{cm} / S_{0m}` as integer array of shape
    `(k+1, k+1, k+1)`."""
    s = verlinde_s_matrix(k)
    n = np.einsum("am,bm,cm,m->abc", s, s, s, 1.0 / s[0])
    rounded = np.rint(n)
    if np.max(np.abs(n - rounded)) > 1e-6:
        module_logger.warning("Verlinde sum at level %s deviates from integers by %s." % (
            k, np.max(np.abs(n - rounded))))
    return rounded.astype("int")


def truncation_support(k: int, a: int, b: int) -> list:
    """Closed-form truncated Clebsch-Gordan rule for the fusion support at level `k`."""
    return list(range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2))


def verlinde_su2(k: int, a: int, b: int) -> list:
    r"""Labels :math:`c` with :math:`N_{ab}^c \neq 0`, from the Verlinde S-matrix sum.

    Args:
        k (int): Level.
        a (int): First label in `[0, k]`.
        b (int): Second label in `[0, k]`.

    Returns:
        list: Sorted labels of the fusion support.
    """
    k = _check_level(k)
    a, b = _check_label(k, a), _check_label(k, b)
    support = [int(c) for c in np.nonzero(verlinde_multiplicities(k)[a, b])[0]]
    if support != truncation_support(k, a, b):
        module_logger.warning("Verlinde support %s differs from truncation rule %s at level %s." % (
            support, truncation_support(k, a, b), k))
    return support


def admissible_in_interval(k: int, a: int, b: int) -> list:
    r"""Labels :math:`c` whose class angle lies in the interior of the class product interval of
    :math:`\theta_a, \theta_b`, computed in units of :math:`\pi / (k+2)`. The endpoints are attained only by
    commuting pairs."""
    low, high = class_product_interval_units(a + 1, b + 1, k + 2)
    return [c for c in range(k + 1) if low < c + 1 < high]


def fusion_bounds_check(k: int) -> dict:
    """Compare the extreme admissible labels in the class product interval with the extremes of the Verlinde
    support for all label pairs at level `k`.

    Args:
        k (int): Level.

    Returns:
        dict: Report with 'passed', 'pairs', 'matched', 'failing' and 'summary'.
    """
    k = _check_level(k)
    failing = []
    pairs = 0
    for a in range(k + 1):
        for b in range(k + 1):
            pairs += 1
            geometric = admissible_in_interval(k, a, b)
            verlinde = verlinde_su2(k, a, b)
            if len(geometric) == 0 or (min(geometric), max(geometric)) != (min(verlinde), max(verlinde)):
                failing.append([a, b])
    matched = pairs - len(failing)
    report = ValidationReport("fusion_bounds", passed=len(failing) == 0, max_residual=float(len(failing)),
                              mean_residual=float(len(failing)) / pairs, failing=failing)
    report["k"] = k
    report["pairs"] = pairs
    report["matched"] = matched
    report["summary"] = "%s/%s pairs match" % (matched, pairs)
    return report


def fusion_table(k: int) -> pd.DataFrame:
    """Table of fusion support, multiplicity and class product range for all label triples at level `k`."""
    k = _check_level(k)
    n = verlinde_multiplicities(k)
    rows = []
    for a in range(k + 1):
        for b in range(k + 1):
            low, high = class_product_interval_units(a + 1, b + 1, k + 2)
            for c in range(k + 1):
                if n[a, b, c] == 0:
                    continue
                rows.append({"a": a, "b": b, "c": c, "N": int(n[a, b, c]), "interval_low": low,
                             "interval_high": high, "unit": "pi/%s" % (k + 2)})
    return pd.DataFrame(rows, columns=["a", "b", "c", "N", "interval_low", "interval_high", "unit"])


class FusionFiber:
    r"""The space :math:`\Pi_{\alpha\beta\gamma} = \{(g, g') : g \in C_\alpha, g' \in C_\gamma,
    g g'^{-1} \in C_\beta\}` with its 2-form :math:`\omega_{\alpha\beta\gamma} = p_1^*\omega_\alpha +
    p_2^*\omega_\gamma + \varpi_\beta`.

    Args:
        alpha (BraneLabel, int): Label of the first class.
        beta (BraneLabel, int): Label of the quotient class.
        gamma (BraneLabel, int): Label of the second class.
        k (int): Level, used for integer labels. Default is None.
    """

    def __init__(self, alpha, beta, gamma, k: int = None):
        labels = [x if isinstance(x, BraneLabel) else BraneLabel(k, x) for x in [alpha, beta, gamma]]
        if len(set(x.k for x in labels)) != 1:
            raise ValueError("Brane labels must share one level, got %s." % labels)
        self.alpha, self.beta, self.gamma = labels
        self.k = labels[0].k
        if verlinde_multiplicities(self.k)[self.beta.alpha, self.gamma.alpha, self.alpha.alpha] == 0:
            raise ValueError("Fiber of labels %s is empty, the triple is fusion-forbidden." % (
                [x.alpha for x in labels], ))
        self.target = su2_pair_target()

    def residual(self, pair) -> np.ndarray:
        pair = np.asarray(pair, dtype="float")
        return np.max(np.stack([
            self.alpha.conjugacy_class.residual(pair[..., :4]),
            self.gamma.conjugacy_class.residual(pair[..., 4:]),
            BiconjugacyClass(self.beta.theta).residual(pair)], axis=-1), axis=-1)

    def sample(self, n: int, seed: int = 0) -> np.ndarray:
        """Points of the fiber from scrambled Halton points.

        The second element :math:`g' = \\cos\\theta_\\gamma + \\sin\\theta_\\gamma m` has a uniform axis `m`.
        The quotient :math:`c = \\cos\\theta_\\beta + \\sin\\theta_\\beta n` has an axis with fixed
        :math:`n \\cdot m = t`, chosen such that :math:`g = c g'` lies in :math:`C_\\alpha`.
        """
        ta, tb, tc = self.alpha.theta, self.beta.theta, self.gamma.theta
        t = (np.cos(tb) * np.cos(tc) - np.cos(ta)) / (np.sin(tb) * np.sin(tc))
        t = float(np.clip(t, -1.0, 1.0))
        u = halton_points(n, 3, seed=seed)
        z = 1.0 - 2.0 * u[:, 0]
        phi = 2 * np.pi * u[:, 1]
        r = np.sqrt(np.clip(1.0 - z ** 2, 0.0, None))
        m = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)
        helper = np.where(np.abs(m[:, :1]) < 0.9, np.array([[1.0, 0.0, 0.0]]), np.array([[0.0, 1.0, 0.0]]))
        e1 = np.cross(m, helper)
        e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
        e2 = np.cross(m, e1)
        chi = 2 * np.pi * u[:, 2:3]
        axis = t * m + np.sqrt(1.0 - t ** 2) * (np.cos(chi) * e1 + np.sin(chi) * e2)
        second = ConjugacyClass(tc).element(m)
        quotient = ConjugacyClass(tb).element(axis)
        return np.concatenate([qmul(quotient, second), second], axis=-1)

    def form(self) -> FormOracle:
        form = add_forms(pull_to_pair(omega_h(self.alpha), 1), pull_to_pair(omega_h(self.gamma), 2),
                         varpi(self.beta.theta, self.k))
        return ClassForm(2, form.evaluator, self.target, self.residual, name="su2.omega_abc",
                         config={"alpha": self.alpha.alpha, "beta": self.beta.alpha, "gamma": self.gamma.alpha,
                                 "k": self.k})


def omega_abc(alpha, beta, gamma, k: int = None) -> tuple:
    """Sampler of the fiber of three brane labels together with its natural 2-form.

    Returns:
        tuple: Sampling function `sample(n, seed)` and :obj:`FormOracle`.
    """
    fiber = FusionFiber(alpha, beta, gamma, k)
    return fiber.sample, fiber.form()


@register_form("su2.omega_abc")
def _make_su2_omega_abc(alpha=0, beta=0, gamma=0, k=1, **kwargs):
    return FusionFiber(alpha, beta, gamma, k).form()
