"""Ergodic optimization for the one-sided binary shift.

Haar analysis of step functions, de Bruijn cycles and rotation polytopes,
gap-criterion certificates of the locking property, and Monte Carlo
experiments over Hilbert bricks.
"""

from .debruijn import DeBruijnGraph, PeriodicMeasure, enumerate_cycles, recursive_complexity
from .haar import HaarCoefficients, StepFunction, forward_transform, inverse_transform, truncate
from .optimize import ergodic_supremum
from .polytope import RotationPolytope, build_polytope
from .sequences import DEFAULT_SEQUENCE, GaugeSpec, SequenceSpec

__all__ = [
    "DEFAULT_SEQUENCE",
    "DeBruijnGraph",
    "GaugeSpec",
    "HaarCoefficients",
    "PeriodicMeasure",
    "RotationPolytope",
    "SequenceSpec",
    "StepFunction",
    "build_polytope",
    "enumerate_cycles",
    "ergodic_supremum",
    "forward_transform",
    "inverse_transform",
    "recursive_complexity",
    "truncate",
]
