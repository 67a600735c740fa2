"""Analytic wave functions of Fock, coherent and excited coherent states.

Positions are passed as the dimensionless coordinate ``eps = gamma * x``.
Wave-function values carry the ``sqrt(gamma)`` normalisation, so
``|psi|^2`` is a probability density per unit ``x``.  A nonzero phase of
``alpha`` enters the time-dependent forms through ``theta = omega t - phi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OrderError, PhaseError
from .params import ECSParams, OscillatorConfig
from .special_functions import ecs_norm_poly, hermite_complex_eval, hermite_eval


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid in the dimensionless coordinate."""

    eps_min: float = -6.0
    eps_max: float = 6.0
    points: int = 241

    def __post_init__(self):
        if not self.eps_min < self.eps_max:
            raise ValueError("eps_min must be smaller than eps_max")
        if self.points < 2:
            raise ValueError("a grid needs at least two points")

    def values(self) -> np.ndarray:
        return np.linspace(self.eps_min, self.eps_max, self.points)


def _prefactor(config):
    return math.sqrt(config.gamma / math.sqrt(math.pi))


def ecs_amplitude(m: int, beta: float) -> float:
    """Hermite prefactor ``1 / (2^{m/2} sqrt(N_m m!))``."""
    return 1.0 / math.sqrt(2.0**m * ecs_norm_poly(m, beta) * math.factorial(m))


def psi_fock(n: int, eps, config: OscillatorConfig):
    """Number-state wave function ``[gamma / (2^n n! sqrt(pi))]^{1/2} H_n e^{-eps^2/2}``."""
    eps = np.asarray(eps, dtype=float)
    log_norm = 0.5 * (math.log(config.gamma) - n * math.log(2.0) - math.lgamma(n + 1)
                      - 0.5 * math.log(math.pi))
    return math.exp(log_norm) * hermite_eval(n, eps) * np.exp(-0.5 * eps * eps)


def fock_basis(nmax: int, eps, config: OscillatorConfig) -> np.ndarray:
    """Rows ``psi_0 .. psi_{nmax-1}`` on the points ``eps``.

    Uses the recurrence for normalized Hermite functions, which stays finite
    for orders where ``H_n`` and ``2^n n!`` separately overflow.
    """
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    out = np.empty((nmax, eps.size))
    out[0] = _prefactor(config) * np.exp(-0.5 * eps * eps)
    if nmax > 1:
        out[1] = math.sqrt(2.0) * eps * out[0]
    for n in range(1, nmax - 1):
        out[n + 1] = (math.sqrt(2.0 / (n + 1)) * eps * out[n]
                      - math.sqrt(n / (n + 1)) * out[n - 1])
    return out


def _require_real(params):
    if params.phi != 0:
        raise PhaseError(
            "stationary wave functions assume real alpha; use psi_ecs_t for phi != 0"
        )


def psi_coherent(params: ECSParams, eps, config: OscillatorConfig):
    """Displaced ground-state Gaussian ``(gamma/sqrt(pi))^{1/2} exp(-(eps - eps0)^2 / 2)``."""
    _require_real(params)
    eps = np.asarray(eps, dtype=float)
    return _prefactor(config) * np.exp(-0.5 * (eps - params.eps0) ** 2)


def psi_ecs(params: ECSParams, eps, config: OscillatorConfig):
    """Stationary excited coherent state: ``H_m(eps - eps0/2)`` times the coherent Gaussian."""
    _require_real(params)
    eps = np.asarray(eps, dtype=float)
    herm = hermite_eval(params.m, eps - 0.5 * params.eps0)
    return ecs_amplitude(params.m, params.beta) * herm * psi_coherent(params, eps, config)


def _shift(params, t, config):
    # complex Hermite shift (eps0 / 2) e^{-i theta}
    theta = params.theta(t, config)
    return theta, 0.5 * params.eps0 * np.exp(-1j * theta)


def psi_coherent_t(params: ECSParams, eps, t: float, config: OscillatorConfig):
    """Time-dependent coherent-state wave function."""
    eps = np.asarray(eps, dtype=float)
    theta, s = _shift(params, t, config)
    eps0 = params.eps0
    phase = np.exp(-1j * theta)
    expo = (-0.25 * eps0**2 * (1 + phase * phase) - 0.5 * eps * eps
            + eps * eps0 * phase - 0.5j * theta)
    return _prefactor(config) * np.exp(expo)


def psi_ecs_t(params: ECSParams, eps, t: float, config: OscillatorConfig):
    """Time-dependent excited coherent state ``H_m(eps - s) psi_alpha(x, t)`` (normalized)."""
    eps = np.asarray(eps, dtype=float)
    _, s = _shift(params, t, config)
    herm = hermite_complex_eval(params.m, eps - s)
    return ecs_amplitude(params.m, params.beta) * herm * psi_coherent_t(params, eps, t, config)


def dpsi_ecs_t(params: ECSParams, eps, t: float, config: OscillatorConfig):
    """Derivative of :func:`psi_ecs_t` with respect to ``eps`` (multiply by gamma for d/dx)."""
    eps = np.asarray(eps, dtype=float)
    theta, s = _shift(params, t, config)
    m = params.m
    gauss = psi_coherent_t(params, eps, t, config)
    herm = hermite_complex_eval(m, eps - s)
    dherm = 2 * m * hermite_complex_eval(m - 1, eps - s) if m > 0 else 0.0
    dlog_gauss = -eps + params.eps0 * np.exp(-1j * theta)
    return ecs_amplitude(m, params.beta) * gauss * (dherm + herm * dlog_gauss)


def density_m1(params: ECSParams, eps, t: float, config: OscillatorConfig):
    """Closed-form density of the first-order state,

    ``2 gamma / ((1 + beta) sqrt(pi)) exp(-(eps - eps0 c)^2) (eps^2 - eps eps0 c + eps0^2/4)``
    with ``c = cos(omega t - phi)``.
    """
    if params.m != 1:
        raise OrderError(f"density_m1 requires m = 1, got m = {params.m}")
    eps = np.asarray(eps, dtype=float)
    c = math.cos(params.theta(t, config))
    eps0 = params.eps0
    pref = 2 * config.gamma / ((1 + params.beta) * math.sqrt(math.pi))
    return pref * np.exp(-(eps - eps0 * c) ** 2) * (eps * eps - eps * eps0 * c + 0.25 * eps0**2)


def fock_synthesis(amps, eps, config: OscillatorConfig):
    """Position-space wave function ``sum_n c_n psi_n(eps)`` of Fock amplitudes."""
    amps = np.asarray(amps, dtype=complex)
    return amps @ fock_basis(amps.size, eps, config)


def align_global_phase(psi, reference):
    """Rotate ``psi`` so its phase matches ``reference`` at the peak of ``|reference|``."""
    psi = np.asarray(psi, dtype=complex)
    reference = np.asarray(reference, dtype=complex)
    k = int(np.argmax(np.abs(reference)))
    ratio = reference[k] / psi[k]
    return psi * (ratio / abs(ratio))
