"""Exact computations with absolute values, ultrametrics, finite topologies,
subgroup semimetrics and Minkowski functionals over the rationals."""

from .errors import InputError, PreconditionError, RepresentationError, ResourceError, UltrakitError
from .reports import Report, Verdict
from .scalars import (
    ArchimedeanPower,
    Magnitude,
    PAdic,
    Trivial,
    abs_value,
    padic_valuation,
)
from .semimetric import DistanceMatrix, Partition
from .topology import FiniteTopology
from .groups import FiniteAbelianGroup, Subgroup

__all__ = [
    "ArchimedeanPower",
    "DistanceMatrix",
    "FiniteAbelianGroup",
    "FiniteTopology",
    "InputError",
    "Magnitude",
    "PAdic",
    "Partition",
    "PreconditionError",
    "Report",
    "RepresentationError",
    "ResourceError",
    "Subgroup",
    "Trivial",
    "UltrakitError",
    "Verdict",
    "abs_value",
    "padic_valuation",
]

__version__ = "0.1.0"
