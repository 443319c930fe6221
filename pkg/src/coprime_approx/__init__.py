"""Constructing a pair (alpha, eta) that is badly approximable by coprime pairs only.

Exact integer and rational arithmetic throughout; real numbers appear only as
certified rational enclosures.
"""

from .errors import ConstructionError, PrecisionError
from .intervals import RationalInterval
from .state import ConstructionState, Parameters, build

__version__ = "0.1.0"

__all__ = ["ConstructionError", "PrecisionError", "RationalInterval",
           "ConstructionState", "Parameters", "build"]
