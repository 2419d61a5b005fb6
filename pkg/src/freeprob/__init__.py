"""Exact computations for the free unitary Brownian motion.

Coefficients live in the field Q(t, Q) with ``Q = exp(-t/2)``; every
identity is checked as an equality of rational functions.
"""

from .ncpart import MomentOracle, NCPartition, free_cumulant, mixed_cumulant
from .scalar import ONE, ZERO, PoleError, Q, Scalar, T
from .series import Series, compose, revert
from .tables import CoeffTable, Finding

__version__ = "0.1.0"

__all__ = [
    "Scalar",
    "PoleError",
    "T",
    "Q",
    "ONE",
    "ZERO",
    "Series",
    "compose",
    "revert",
    "NCPartition",
    "MomentOracle",
    "mixed_cumulant",
    "free_cumulant",
    "CoeffTable",
    "Finding",
]
