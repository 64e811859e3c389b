import cmath
import numpy as np
from gerbecalc.data.utils import dump_json_string

DEFAULT_UNIT_TOLERANCE = 1e-9


class HolonomyResult:
    r"""Value of a surface holonomy engine.

    Values are kept as complex numbers. Closed-surface engines with rank one data produce unit complex numbers,
    boundary and defect engines carry traces of bundle holonomies which are in general not of modulus one.

    Args:
        value (complex): Holonomy.
        engine (str): Name of the engine that computed the value.
        diagnostics (dict): Quadrature error estimates, lift choices and similar information. Default is None.
    """

    def __init__(self, value: complex, engine: str, diagnostics: dict = None):
        self.value = complex(value)
        self.engine = str(engine)
        self.diagnostics = dict(diagnostics) if diagnostics is not None else {}

    @property
    def angle(self) -> float:
        """Phase in :math:`(-\\pi, \\pi]`."""
        return cmath.phase(self.value)

    def check_unit_modulus(self, tolerance: float = DEFAULT_UNIT_TOLERANCE) -> bool:
        return bool(abs(abs(self.value) - 1.0) <= tolerance)

    def distance(self, other) -> float:
        other = other.value if isinstance(other, HolonomyResult) else complex(other)
        return abs(self.value - other)

    def to_dict(self) -> dict:
        return {"schema": 1, "engine": self.engine, "value": [self.value.real, self.value.imag],
                "diagnostics": self.diagnostics}

    def to_json(self) -> str:
        return dump_json_string(self.to_dict())

    def __complex__(self):
        return self.value

    def __repr__(self):
        return "HolonomyResult(value=%s, engine=%s)" % (np.round(self.value, 12), self.engine)
