import logging
import itertools
import numpy as np
from sympy import factorint

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

# Number of inequivalent Jandl gerbes over the level-k gerbe, per involution g -> (z g)^{-1}.
# Groups with 'even_level' only admit a Jandl structure at even levels.
JANDL_TABLE = {
    "SU2": {"involutions": {"inv": 1, "minus_inv": -1}, "count": 2, "even_level": False},
    "SO3": {"involutions": {"inv": 1}, "count": 4, "even_level": True},
    "PSO4n": {"involutions": {"inv": 1}, "count": 16, "even_level": True},
}


def _check_group(group: str) -> dict:
    if group not in JANDL_TABLE:
        raise ValueError("Unknown group '%s', known are %s." % (group, sorted(JANDL_TABLE)))
    return JANDL_TABLE[group]


def involution_ids(group: str) -> list:
    """Identifiers of the involutions :math:`g \\mapsto (z g)^{-1}` of a group, one per twist element."""
    return sorted(_check_group(group)["involutions"])


def count_involutions(group: str) -> int:
    return len(_check_group(group)["involutions"])


def jandl_census(group: str, level: int, involution: str = None) -> dict:
    """Number of inequivalent Jandl gerbes over the level `level` bundle gerbe of a compact group.

    Args:
        group (str): One of 'SU2', 'SO3' or 'PSO4n'.
        level (int): Positive level.
        involution (str): Involution id, see :obj:`involution_ids`. Default is None, which is the inversion.

    Returns:
        dict: Census with keys 'group', 'level', 'involution', 'twist', 'count', 'n_involutions' and 'total'.
    """
    entry = _check_group(group)
    level = int(level)
    if level < 1:
        raise ValueError("Level must be positive, got %s." % level)
    if entry["even_level"] and level % 2 != 0:
        raise ValueError("Group '%s' admits Jandl gerbes only at even level, got %s." % (group, level))
    involution = "inv" if involution is None else str(involution)
    if involution not in entry["involutions"]:
        raise ValueError("Unknown involution '%s' on %s, known are %s." % (
            involution, group, sorted(entry["involutions"])))
    n = len(entry["involutions"])
    return {"group": group, "level": level, "involution": involution, "twist": entry["involutions"][involution],
            "count": entry["count"], "n_involutions": n, "total": n * entry["count"]}


def _normalized_tuples(n: int) -> list:
    # Normalized cochains on Z2 vanish on tuples containing the unit 0.
    return [t for t in itertools.product([0, 1], repeat=n) if all(x != 0 for x in t)]


def _coboundary(n: int, modulus: int):
    r"""Bar coboundary :math:`C^n \rightarrow C^{n+1}` of normalized cochains of :math:`\mathbb{Z}_2` with values in
    :math:`\mathbb{Z}_{modulus}`, on which the generator acts by :math:`a \mapsto -a`. Cochains are dictionaries from
    normalized tuples to residues."""
    def act(g, a):
        return (-a) % modulus if g == 1 else a % modulus

    def delta(cochain: dict) -> dict:
        out = {}
        for t in _normalized_tuples(n + 1):
            value = act(t[0], cochain.get(t[1:], 0))
            for i in range(n):
                merged = t[:i] + ((t[i] + t[i + 1]) % 2, ) + t[i + 2:]
                value += (-1) ** (i + 1) * cochain.get(merged, 0)
            value += (-1) ** (n + 1) * cochain.get(t[:n], 0)
            out[t] = value % modulus
        return out

    return delta


def _all_cochains(n: int, modulus: int):
    keys = _normalized_tuples(n)
    for values in itertools.product(range(modulus), repeat=len(keys)):
        yield dict(zip(keys, values))


def _key(cochain: dict) -> tuple:
    return tuple(sorted(cochain.items()))


def cohomology_z2(n: int, m: int = 1) -> dict:
    r"""Group cohomology :math:`H^n(\mathbb{Z}_2, \mathbb{Z}_{2m})` with the generator acting by inversion, by
    exhaustive enumeration of normalized bar cochains. For growing `m` it approximates the coefficients
    :math:`U(1)`.

    Args:
        n (int): Degree, `0 <= n <= 4`.
        m (int): Coefficients are :math:`\mathbb{Z}_{2m}`. Default is 1.

    Returns:
        dict: Group descriptor with 'order', 'invariants' (invariant factors), 'factors' (prime factorization of the
            order) and 'name', e.g. 'Z2'.
    """
    n, m = int(n), int(m)
    if not 0 <= n <= 4:
        raise ValueError("Degree must be in [0, 4], got %s." % n)
    if m < 1:
        raise ValueError("Coefficient size must be positive, got %s." % m)
    modulus = 2 * m
    delta = _coboundary(n, modulus)
    kernel = [c for c in _all_cochains(n, modulus) if all(v == 0 for v in delta(c).values())]
    if n == 0:
        image = {_key({(): 0})}
    else:
        image = set(_key(_coboundary(n - 1, modulus)(c)) for c in _all_cochains(n - 1, modulus))
    order = len(kernel) // len(image)

    def multiple(c, d):
        return {t: (d * v) % modulus for t, v in c.items()}

    factors = {int(p): int(e) for p, e in factorint(order).items()}
    invariants = []
    for p, e in factors.items():
        # Number of cyclic p-factors of order at least p^j from the sizes of the p^j-torsion.
        torsion = [1] + [sum(1 for c in kernel if _key(multiple(c, p ** j)) in image) // len(image)
                         for j in range(1, e + 1)]
        ranks = [int(round(np.log(torsion[j] / torsion[j - 1]) / np.log(p))) for j in range(1, e + 1)]
        exponents = [sum(1 for r in ranks if r >= i) for i in range(1, (ranks[0] if ranks else 0) + 1)]
        invariants.extend([p ** x for x in exponents])
    invariants = _invariant_factors(invariants)
    name = " x ".join("Z%s" % x for x in invariants) if len(invariants) > 0 else "0"
    return {"degree": n, "m": m, "order": order, "invariants": invariants, "factors": factors, "name": name}


def _invariant_factors(prime_powers: list) -> list:
    """Merge elementary divisors into invariant factors :math:`d_1 | d_2 | \\dots`."""
    by_prime = {}
    for q in prime_powers:
        p = min(factorint(q))
        by_prime.setdefault(p, []).append(q)
    length = max([len(v) for v in by_prime.values()] + [0])
    out = [1] * length
    for p, qs in by_prime.items():
        qs = sorted(qs, reverse=True)
        for i, q in enumerate(qs):
            out[length - 1 - i] *= q
    return [x for x in out if x > 1]


def census_consistency(group: str = "SU2", level: int = 1, max_m: int = 8) -> dict:
    """Compare the census of a simply connected group with the order of the parameterizing group
    :math:`H^2(\\mathbb{Z}_2, \\mathbb{Z}_{2m})` and check that :math:`H^3` is :math:`\\mathbb{Z}_2` for all
    `m <= max_m`."""
    count = jandl_census(group, level)["count"]
    rows = []
    for m in range(1, max_m + 1):
        h2, h3 = cohomology_z2(2, m), cohomology_z2(3, m)
        rows.append({"m": m, "H2": h2["name"], "H3": h3["name"], "match": h2["order"] == count and
                     h3["invariants"] == [2]})
    return {"group": group, "level": level, "count": count, "rows": rows, "passed": all(r["match"] for r in rows)}
