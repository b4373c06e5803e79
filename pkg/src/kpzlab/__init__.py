"""Longest increasing subsequences of Poisson point processes: exact finite-size laws,
Painleve II scaling limits, the Baik-Rains family and Monte Carlo simulators.
"""
from .combinat import SymmetryClass
from .errors import (AccuracyError, BlowUpError, BoundExceededError, ConventionError, DomainError,
                     IllConditionedError, InstabilityError, KpzLabError, RangeError, StiffnessError)
from .groupavg import hammersley_cdf_exact, johansson_cdf_exact, symmetrized_cdf_exact
from .kernels import BACKEND as KERNEL_BACKEND
from .opuc import boundary_cdf, discrete_p2
from .painleve2 import default_grid, hastings_mcleod

__version__ = "0.1.0"

__all__ = [
    "SymmetryClass", "hammersley_cdf_exact", "symmetrized_cdf_exact", "johansson_cdf_exact",
    "boundary_cdf", "discrete_p2", "hastings_mcleod", "default_grid", "KERNEL_BACKEND",
    "KpzLabError", "DomainError", "BoundExceededError", "RangeError", "AccuracyError",
    "IllConditionedError", "InstabilityError", "StiffnessError", "BlowUpError", "ConventionError",
]
