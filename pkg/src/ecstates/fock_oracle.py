"""Truncated Fock-space oracle.

States are amplitude vectors in the number basis.  Everything here is
computed by brute force from ladder-operator matrix elements and serves as
the ground truth against which the closed forms are checked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError
from .params import ECSParams, OscillatorConfig
from .special_functions import ecs_norm_poly

__all__ = [
    "ECSParams",
    "OscillatorConfig",
    "TruncatedState",
    "build_coherent",
    "build_ecs",
    "default_dim",
    "evolve",
    "moment_p",
    "moment_x",
    "raise_op",
]

DEFAULT_TAIL_BOUND = 1e-14
NORM_IDENTITY_RTOL = 1e-10


@dataclass(frozen=True)
class TruncatedState:
    """Normalized Fock-basis amplitudes ``c_0 .. c_{N-1}`` (read-only array)."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def tail_mass(self) -> float:
        return float(np.sum(np.abs(self.amps[-2:]) ** 2))

    def mean_number(self) -> float:
        return float(np.sum(np.arange(self.dim) * np.abs(self.amps) ** 2))


def default_dim(m: int, beta: float) -> int:
    """Truncation large enough for the Poisson tail plus ``m`` raisings."""
    return max(math.ceil(beta + 10 * math.sqrt(beta) + 20) + m, m + 20)


def _check_tail(amps, tail_bound):
    tail = float(np.sum(np.abs(amps[-2:]) ** 2))
    if amps.size < 2 or tail >= tail_bound:
        raise TruncationError(
            f"dim={amps.size} leaves tail mass {tail:.3e} (bound {tail_bound:.1e})"
        )


def build_coherent(
    params: ECSParams, dim: int | None = None, tail_bound: float = DEFAULT_TAIL_BOUND
) -> TruncatedState:
    """Coherent state ``e^{-beta/2} sum alpha^n / sqrt(n!) |n>`` truncated to ``dim``.

    The ``m`` field of ``params`` is ignored.
    """
    if dim is None:
        dim = default_dim(0, params.beta)
    if dim < 1:
        raise ValueError("dim must be positive")
    alpha = params.alpha
    amps = np.empty(dim, dtype=complex)
    amps[0] = math.exp(-params.beta / 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    _check_tail(amps, tail_bound)
    amps /= np.linalg.norm(amps)
    return TruncatedState(amps)


def raise_op(amps: np.ndarray) -> np.ndarray:
    """Apply the creation operator within the truncated space (top level is lost)."""
    out = np.zeros_like(amps)
    out[1:] = amps[:-1] * np.sqrt(np.arange(1, amps.size))
    return out


def build_ecs(
    params: ECSParams, dim: int | None = None, tail_bound: float = DEFAULT_TAIL_BOUND
) -> TruncatedState:
    """Normalized ``(a^dagger)^m |alpha>``.

    The squared norm before normalization is checked against ``m! N_m``; a
    mismatch can only come from truncation and raises :class:`TruncationError`.
    """
    m = params.m
    if dim is None:
        dim = default_dim(m, params.beta)
    if dim <= m + 1:
        raise TruncationError(f"dim={dim} cannot hold {m} raisings")
    amps = build_coherent(params, dim, tail_bound).amps.copy()
    for _ in range(m):
        amps = raise_op(amps)
    norm2 = float(np.sum(np.abs(amps) ** 2))
    expected = math.factorial(m) * ecs_norm_poly(m, params.beta)
    if abs(norm2 - expected) > NORM_IDENTITY_RTOL * expected:
        raise TruncationError(
            f"norm of raised state {norm2!r} differs from m! N_m = {expected!r} at dim={dim}"
        )
    _check_tail(amps, tail_bound)
    return TruncatedState(amps / math.sqrt(norm2))


def unnormalized_raised_norm2(params: ECSParams, dim: int | None = None) -> float:
    """Squared norm of ``(a^dagger)^m`` applied to the (normalized) truncated coherent state."""
    if dim is None:
        dim = default_dim(params.m, params.beta)
    amps = build_coherent(params, dim).amps.copy()
    for _ in range(params.m):
        amps = raise_op(amps)
    return float(np.sum(np.abs(amps) ** 2))


def evolve(state: TruncatedState, config: OscillatorConfig, t: float) -> TruncatedState:
    """Free evolution: ``c_n -> c_n exp(-i (n + 1/2) omega t)``."""
    n = np.arange(state.dim)
    return TruncatedState(state.amps * np.exp(-1j * (n + 0.5) * config.omega * t))


def _ladder_expectations(state):
    """Return ``<a>``, ``<a^2>`` and ``<a^dagger a>`` from banded matrix elements."""
    c = state.amps
    n = np.arange(state.dim)
    a1 = np.sum(np.conj(c[:-1]) * np.sqrt(n[1:]) * c[1:])
    a2 = np.sum(np.conj(c[:-2]) * np.sqrt(n[1:-1] * n[2:]) * c[2:])
    nbar = np.sum(n * np.abs(c) ** 2)
    return complex(a1), complex(a2), float(nbar)


def moment_x(state: TruncatedState, config: OscillatorConfig, power: int = 1) -> float:
    """``<x>`` or ``<x^2>`` with ``x = x0 (a + a^dagger)``."""
    a1, a2, nbar = _ladder_expectations(state)
    if power == 1:
        return config.x0 * 2 * a1.real
    if power == 2:
        return config.x0**2 * (2 * a2.real + 2 * nbar + 1)
    raise ValueError("power must be 1 or 2")


def moment_p(state: TruncatedState, config: OscillatorConfig, power: int = 1) -> float:
    """``<p>`` or ``<p^2>`` with ``p = -i p0 (a - a^dagger)``."""
    a1, a2, nbar = _ladder_expectations(state)
    if power == 1:
        return config.p0 * 2 * a1.imag
    if power == 2:
        return config.p0**2 * (2 * nbar + 1 - 2 * a2.real)
    raise ValueError("power must be 1 or 2")


def oracle_moments(params: ECSParams, config: OscillatorConfig, t: float, dim: int | None = None):
    """``(mean_x, delta_x, mean_p, delta_p)`` of the evolved excited coherent state."""
    state = evolve(build_ecs(params, dim), config, t)
    mx = moment_x(state, config, 1)
    mp = moment_p(state, config, 1)
    dx = math.sqrt(max(moment_x(state, config, 2) - mx * mx, 0.0))
    dp = math.sqrt(max(moment_p(state, config, 2) - mp * mp, 0.0))
    return mx, dx, mp, dp
