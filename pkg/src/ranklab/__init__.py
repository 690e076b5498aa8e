"""Decoder error probability of bounded distance decoders for rank-metric and subspace codes.

Exact q-analog counting, Gabidulin and lifted codes, closed-form DEP values
and bounds, and exhaustive and Monte Carlo oracles that check them.
"""

from __future__ import annotations

from .errors import (
    AmbiguousRadius,
    BudgetExceeded,
    ExcludedRegime,
    NoSuchConfiguration,
    NotACodeword,
    NoValidOutput,
    ParameterViolation,
    PreconditionViolated,
    RanklabError,
)
from .gf import MatrixGF, Subspace, field_create, field_of_order

__all__ = [
    "AmbiguousRadius",
    "BudgetExceeded",
    "ExcludedRegime",
    "MatrixGF",
    "NoSuchConfiguration",
    "NoValidOutput",
    "NotACodeword",
    "ParameterViolation",
    "PreconditionViolated",
    "RanklabError",
    "Subspace",
    "field_create",
    "field_of_order",
]

__version__ = "0.1.0"
