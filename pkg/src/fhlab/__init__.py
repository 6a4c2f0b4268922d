"""Exponent calculus, admissibility regions, and a periodic spectral
solver for fractional Hartree equations, with exact-arithmetic and
numerical verification harnesses."""

__version__ = "0.1.0"

from .exponents import DEFOCUSING, FOCUSING, ProblemParams, derive
from .regions import LebesguePair

__all__ = [
    "DEFOCUSING",
    "FOCUSING",
    "LebesguePair",
    "ProblemParams",
    "derive",
    "__version__",
]
