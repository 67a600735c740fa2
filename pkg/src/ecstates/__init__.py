"""Excited (photon-added) coherent states of the quantum harmonic oscillator.

Three independent routes to the same observables:

* :mod:`ecstates.closed_form` and :mod:`ecstates.moments` - analytic wave
  functions and moment formulas,
* :mod:`ecstates.fock_oracle` - brute-force truncated Fock-space algebra,
* :mod:`ecstates.quadrature` - numerical integration of the wave function.
"""
from .errors import (
    ConstantsError,
    ConvergenceError,
    DomainError,
    ECSError,
    OrderError,
    PhaseError,
    TruncationError,
)
from .params import ECSParams, OscillatorConfig

__version__ = "0.1.0"

__all__ = [
    "ConstantsError",
    "ConvergenceError",
    "DomainError",
    "ECSError",
    "ECSParams",
    "OrderError",
    "OscillatorConfig",
    "PhaseError",
    "TruncationError",
]
