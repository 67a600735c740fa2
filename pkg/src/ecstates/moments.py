"""Closed-form position and momentum moments of excited coherent states.

With ``theta = omega t - phi`` the moments are parameterized by

    <x>      = sqrt(2 hbar / mu omega) |alpha| S1 / N_m cos(theta)
    dx^2/x0^2 = C1 cos^2(theta) + C2
    dp^2/p0^2 = C1 sin^2(theta) + C2

where ``C1 = 4 beta / N_m (S2 - S1^2 / N_m)`` and
``C2 = (S3 + S4 - 2 S2 beta) / N_m``.

The sums S1 and S2 are the generalized Laguerre values ``L_m^(1)(-beta)``
and ``L_m^(2)(-beta)``.  For S3 and S4 the commonly printed sums are not
consistent with the ladder-operator algebra (already the coherent state
comes out wrong), so by default they are replaced by
``S3 = (m+1) N_{m+1} - N_m`` and ``S4 = (m+1) N_{m+1}``, which give
``S3 + S4 = N_m (2 <n> + 1)``.  The printed sums remain available with
``paper_literal=True`` and are never validated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .errors import ConstantsError, DomainError
from .params import ECSParams, OscillatorConfig
from .special_functions import ecs_norm_poly

VALIDATION_RTOL = 1e-9
SQUEEZE_TOL = 1e-12


@dataclass(frozen=True)
class MomentConstants:
    m: int
    beta: float
    N_m: float
    S1: float
    S2: float
    S3: float
    S4: float
    paper_literal: bool = False

    @property
    def C1(self) -> float:
        return 4 * self.beta / self.N_m * (self.S2 - self.S1**2 / self.N_m)

    @property
    def C2(self) -> float:
        return (self.S3 + self.S4 - 2 * self.S2 * self.beta) / self.N_m

    def variance_factor(self, cos2):
        """``C1 cos^2 + C2``; raises :class:`DomainError` where it is not positive."""
        val = self.C1 * np.asarray(cos2, dtype=float) + self.C2
        if np.any(val <= 0):
            raise DomainError(
                f"C1 cos^2 + C2 <= 0 for m={self.m}, beta={self.beta} "
                f"(C1={self.C1!r}, C2={self.C2!r}); constants are inconsistent"
            )
        return val


@dataclass
class MomentReport:
    """Time series of closed-form moments."""

    times: list
    mean_x: list
    delta_x: list
    delta_p: list
    product: list


def _s1(m, beta):
    return sum(comb(m + 1, r + 1) * beta**r / factorial(r) for r in range(m + 1))


def _s2(m, beta):
    return sum(comb(m + 2, r + 2) * beta**r / factorial(r) for r in range(m + 1))


def literal_s3(m: int, beta: float) -> float:
    """S3 exactly as commonly printed (inconsistent with the operator algebra)."""
    total = sum((comb(m, r) * beta**r * m + comb(m + 1, r + 1) * beta ** (r + 1)) / factorial(r)
                for r in range(m + 1))
    return total / factorial(m)


def literal_s4(m: int, beta: float) -> float:
    """S4 as printed, with the sum stopping at ``r = m``."""
    return (m + 1) * sum(comb(m + 1, r) * beta**r / factorial(r) for r in range(m + 1))


def raw_constants(m: int, beta: float, paper_literal: bool = False) -> MomentConstants:
    """Constants without oracle validation."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if beta < 0:
        raise ValueError("beta must be non-negative")
    beta = float(beta)
    n_m = ecs_norm_poly(m, beta)
    if paper_literal:
        s3, s4 = literal_s3(m, beta), literal_s4(m, beta)
    else:
        n_next = (m + 1) * ecs_norm_poly(m + 1, beta)
        s3, s4 = n_next - n_m, n_next
    return MomentConstants(m, beta, n_m, _s1(m, beta), _s2(m, beta), s3, s4, paper_literal)


def validate_constants(mc: MomentConstants, dim: int | None = None) -> dict:
    """Compare C1 and C2 with Fock-oracle variances.

    The oracle's ``dx^2/x0^2`` at ``theta = 0`` is ``C1 + C2`` and at
    ``theta = pi/2`` it is ``C2``.  The mean is checked through ``S1``.
    Returns the relative residuals.
    """
    from .fock_oracle import build_ecs, evolve, moment_x

    config = OscillatorConfig()
    params = ECSParams.from_beta(mc.m, mc.beta)
    state = build_ecs(params, dim)
    out = {}
    for label, t in (("C1+C2", 0.0), ("C2", math.pi / 2)):
        ev = evolve(state, config, t)
        mx = moment_x(ev, config, 1)
        var = (moment_x(ev, config, 2) - mx * mx) / config.x0**2
        closed = mc.C1 + mc.C2 if label == "C1+C2" else mc.C2
        out[label] = abs(closed - var) / max(abs(var), 1.0)
    mx0 = moment_x(state, config, 1)
    closed_mx = 2 * config.x0 * params.alpha_mag * mc.S1 / mc.N_m
    out["S1"] = abs(closed_mx - mx0) / max(abs(mx0), config.x0)
    return out


@lru_cache(maxsize=None)
def _validated(m, beta):
    mc = raw_constants(m, beta)
    residuals = validate_constants(mc)
    worst = max(residuals.values())
    if worst > VALIDATION_RTOL:
        raise ConstantsError(
            f"moment constants for m={m}, beta={beta} disagree with the oracle: {residuals}"
        )
    return mc


def moment_constants(m: int, beta: float, paper_literal: bool = False) -> MomentConstants:
    """N_m, S1..S4 (and C1, C2) for order ``m`` and intensity ``beta``.

    Corrected constants are checked against the Fock oracle on first use
    for each ``(m, beta)``; paper-literal constants are returned unchecked.
    """
    if paper_literal:
        return raw_constants(m, beta, paper_literal=True)
    return _validated(int(m), float(beta))


def _theta(params, config, t):
    return config.omega * np.asarray(t, dtype=float) - params.phi


def mean_x(mc: MomentConstants, params: ECSParams, config: OscillatorConfig, t):
    """``<x>(t) = sqrt(2 hbar / mu omega) |alpha| S1 / N_m cos(omega t - phi)``."""
    amp = math.sqrt(2 * config.hbar / (config.mass * config.omega))
    return amp * params.alpha_mag * mc.S1 / mc.N_m * np.cos(_theta(params, config, t))


def delta_x(mc: MomentConstants, config: OscillatorConfig, t, phi: float = 0.0):
    """Position width ``x0 sqrt(C1 cos^2(theta) + C2)``."""
    theta = config.omega * np.asarray(t, dtype=float) - phi
    return config.x0 * np.sqrt(mc.variance_factor(np.cos(theta) ** 2))


def delta_p(mc: MomentConstants, config: OscillatorConfig, t, phi: float = 0.0):
    """Momentum width ``p0 sqrt(C1 sin^2(theta) + C2)``."""
    theta = config.omega * np.asarray(t, dtype=float) - phi
    return config.p0 * np.sqrt(mc.variance_factor(np.sin(theta) ** 2))


def uncertainty_product(mc: MomentConstants, config: OscillatorConfig, t, phi: float = 0.0):
    """``delta_x * delta_p``."""
    return delta_x(mc, config, t, phi) * delta_p(mc, config, t, phi)


def uncertainty_product_closed(mc: MomentConstants, config: OscillatorConfig, t, phi: float = 0.0):
    """Expanded form ``hbar/2 [C2^2 + C1 C2 + C1^2/4 sin^2(2 theta)]^{1/2}``."""
    theta = config.omega * np.asarray(t, dtype=float) - phi
    c1, c2 = mc.C1, mc.C2
    return 0.5 * config.hbar * np.sqrt(c2 * c2 + c1 * c2 + 0.25 * c1 * c1 * np.sin(2 * theta) ** 2)


def width_ratio_m1(beta: float, t, omega: float = 1.0, phi: float = 0.0):
    """First-order ratio ``dx_1 / dx_0 = [(beta+3)/(beta+1) - 4 beta/(1+beta)^2 cos^2]^{1/2}``."""
    c = np.cos(omega * np.asarray(t, dtype=float) - phi)
    return np.sqrt((beta + 3) / (beta + 1) - 4 * beta / (1 + beta) ** 2 * c * c)


def uncertainty_product_m1(beta: float, config: OscillatorConfig, t, phi: float = 0.0):
    """First-order product, with the squared ``sin^2(2 theta)`` term."""
    theta = config.omega * np.asarray(t, dtype=float) - phi
    inner = (beta**2 + 3) * (beta + 3) / (beta + 1) + 4 * beta**2 / (beta + 1) ** 2 * np.sin(2 * theta) ** 2
    return config.hbar / (2 * (1 + beta)) * np.sqrt(inner)


def squeeze_ratio_bounds(beta: float) -> tuple[float, float]:
    """``(sqrt((beta^2+3)/(beta+1)^2), sqrt((beta+3)/(beta+1)))`` for m = 1."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    return math.sqrt((beta**2 + 3) / (beta + 1) ** 2), math.sqrt((beta + 3) / (beta + 1))


def ratio_range(mc: MomentConstants) -> tuple[float, float]:
    """Minimum and maximum over time of ``dx / dx0`` for any order."""
    ends = mc.variance_factor(np.array([0.0, 1.0]))
    return float(math.sqrt(ends.min())), float(math.sqrt(ends.max()))


def is_squeezed(m: int, beta: float) -> tuple[bool, float]:
    """Whether ``dx`` dips below the ground-state width at some time.

    Returns ``(squeezed, margin)`` with ``margin = 1 - min_t dx / dx0``.
    Margins within ``SQUEEZE_TOL`` of zero count as not squeezed so the
    boundary case ``m = 1, beta = 1`` is classified exactly.
    """
    lo, _ = ratio_range(moment_constants(m, beta))
    margin = 1.0 - lo
    if abs(margin) <= SQUEEZE_TOL:
        margin = 0.0
    return margin > 0, margin


def moment_report(params: ECSParams, config: OscillatorConfig, times, mc: MomentConstants | None = None) -> MomentReport:
    """Closed-form ``<x>``, ``dx``, ``dp`` and their product on ``times``."""
    if mc is None:
        mc = moment_constants(params.m, params.beta)
    times = np.asarray(times, dtype=float)
    dx = delta_x(mc, config, times, params.phi)
    dp = delta_p(mc, config, times, params.phi)
    return MomentReport(
        times=times.tolist(),
        mean_x=np.atleast_1d(mean_x(mc, params, config, times)).tolist(),
        delta_x=np.atleast_1d(dx).tolist(),
        delta_p=np.atleast_1d(dp).tolist(),
        product=np.atleast_1d(dx * dp).tolist(),
    )
