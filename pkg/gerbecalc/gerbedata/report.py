import numpy as np
from gerbecalc.data.utils import save_json_file, dump_json_string


class ValidationReport(dict):
    r"""Result of a validator as plain dictionary with keys 'name', 'passed', 'max_residual', 'mean_residual',
    'failing' and 'notes'. Validators return reports instead of raising on failing identities, so that batches
    can be checked at once.

    .. code-block:: python

        from gerbecalc.gerbedata.report import ValidationReport
        report = ValidationReport.from_residuals("example", [1e-12, 3e-5], tolerance=1e-4)
        print(report.passed, report["max_residual"])
    """

    def __init__(self, name: str, passed: bool, max_residual: float = 0.0, mean_residual: float = 0.0,
                 failing: list = None, notes: list = None, **kwargs):
        super(ValidationReport, self).__init__()
        self["name"] = name
        self["passed"] = bool(passed)
        self["max_residual"] = float(max_residual)
        self["mean_residual"] = float(mean_residual)
        self["failing"] = list(failing) if failing is not None else []
        self["notes"] = list(notes) if notes is not None else []
        self.update(kwargs)

    @classmethod
    def from_residuals(cls, name: str, residuals, tolerance: float, ids=None, **kwargs):
        """Report that passes iff every residual is at most `tolerance`. Failing entries are listed by `ids`, which
        default to the positions of the residuals."""
        residuals = np.asarray(residuals, dtype="float").reshape(-1)
        ids = list(range(len(residuals))) if ids is None else list(ids)
        if len(residuals) == 0:
            return cls(name, True, 0.0, 0.0, [], tolerance=float(tolerance), n_checked=0, **kwargs)
        bad = ~(residuals <= tolerance)
        failing = [ids[i] for i in np.nonzero(bad)[0]]
        finite = residuals[np.isfinite(residuals)]
        max_residual = float(np.max(residuals)) if np.all(np.isfinite(residuals)) else float("inf")
        return cls(name, not np.any(bad), max_residual, float(np.mean(finite)) if len(finite) > 0 else 0.0,
                   failing, tolerance=float(tolerance), n_checked=int(len(residuals)), **kwargs)

    @property
    def passed(self) -> bool:
        return bool(self["passed"])

    def add_note(self, note: str):
        self["notes"].append(str(note))
        return self

    def to_json(self) -> str:
        return dump_json_string(dict(self))

    def save(self, file_path: str):
        save_json_file(dict(self), file_path)


def merge_reports(name: str, reports: list) -> ValidationReport:
    """Combine reports, passing iff all pass. Failing entries are prefixed by the name of the sub-report."""
    failing = [[r["name"], f] for r in reports for f in r["failing"]]
    max_residual = max([r["max_residual"] for r in reports] + [0.0])
    mean_residual = float(np.mean([r["mean_residual"] for r in reports])) if len(reports) > 0 else 0.0
    return ValidationReport(name, all(r["passed"] for r in reports), max_residual, mean_residual, failing,
                            parts=[dict(r) for r in reports])
