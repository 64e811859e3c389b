import logging
import numpy as np
from typing import Union
from gerbecalc.fields.forms import zero_form
from gerbecalc.fields.target import SU2Target
from gerbecalc.gerbedata.branes import DBraneRecord, BiBraneRecord, class_world_volume, biconjugacy_world_volume, \
    validate_dbrane, validate_bibrane
from gerbecalc.gerbedata.report import ValidationReport, merge_reports
from gerbecalc.wzw.classes import BraneLabel, BiconjugacyClass
from gerbecalc.wzw.forms import canonical_three_form, omega_h, varpi, su2_pair_target

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


def _label(k: int, alpha: Union[int, BraneLabel]) -> BraneLabel:
    return alpha if isinstance(alpha, BraneLabel) else BraneLabel(k, alpha)


def symmetric_dbrane(k: int, alpha: Union[int, BraneLabel]) -> DBraneRecord:
    r"""Symmetric D-brane of the SU(2) WZW model at level `k`: the conjugacy class :math:`C_{\theta_\alpha}` with
    2-form :math:`\omega_h` and the trivial line bundle as module."""
    label = _label(k, alpha)
    return DBraneRecord(class_world_volume(label.conjugacy_class), omega_h(label, k=label.k),
                        zero_form(SU2Target(), 1), name="D(k=%s, a=%s)" % (label.k, label.alpha))


def symmetric_bibrane(k: int, alpha: Union[int, BraneLabel]) -> BiBraneRecord:
    r"""Symmetric bi-brane of the SU(2) WZW model at level `k` on the biconjugacy class of
    :math:`C_{\theta_\alpha}`, with 2-form :math:`\varpi` and the trivial line bundle."""
    label = _label(k, alpha)
    biconj = BiconjugacyClass(label.theta)
    return BiBraneRecord(biconjugacy_world_volume(biconj), varpi(biconj, k=label.k),
                         zero_form(su2_pair_target(), 1), name="B(k=%s, a=%s)" % (label.k, label.alpha))


def validate_symmetric_branes(k: int, labels: list = None, n_samples: int = 200, seed: int = 0,
                              tolerance: float = 1e-4, bibranes: bool = False) -> ValidationReport:
    """Check the curvature identity of the symmetric D-branes, or bi-branes, for all or some labels at level `k`.

    Args:
        k (int): Level.
        labels (list): Labels to check. Default is None, which means all of `0, ..., k`.
        n_samples (int): Sample points per brane. Default is 200.
        seed (int): Seed. Default is 0.
        tolerance (float): Residual tolerance. Default is 1e-4.
        bibranes (bool): Whether to check the bi-branes instead of the D-branes. Default is False.

    Returns:
        ValidationReport: Merged report with one part per label.
    """
    h = canonical_three_form(k)
    labels = list(range(int(k) + 1)) if labels is None else [int(a) for a in labels]
    parts = []
    for a in labels:
        if bibranes:
            report = validate_bibrane(h, h, symmetric_bibrane(k, a), n_samples=n_samples, seed=seed,
                                      tolerance=tolerance)
        else:
            report = validate_dbrane(h, symmetric_dbrane(k, a), n_samples=n_samples, seed=seed, tolerance=tolerance)
        report["name"] = "%s[k=%s,a=%s]" % (report["name"], k, a)
        parts.append(report)
    merged = merge_reports("bibranes" if bibranes else "dbranes", parts)
    merged["k"] = int(k)
    merged["labels"] = labels
    merged["max_residual_per_label"] = [float(r["max_residual"]) for r in parts]
    module_logger.info("Checked %s %s at level %s, max residual %s." % (
        len(labels), "bi-branes" if bibranes else "D-branes", k, merged["max_residual"]))
    return merged
