"""Real-line quadrature over the dimensionless coordinate.

The default rule is Gauss-Hermite centred on the Gaussian envelope of the
integrand: for ``f = exp(-(eps - c)^2) * polynomial`` it is exact once the
node count exceeds half the polynomial degree.  Every fixed-node result is
recomputed with twice the nodes and the two must agree to ``rel_tol``.
An adaptive (QUADPACK) rule over a finite span is available for diagnostics.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import roots_hermite

from .closed_form import dpsi_ecs_t, psi_ecs_t
from .errors import ConvergenceError
from .params import ECSParams, OscillatorConfig

GAUSSIAN = "fixed-node-gaussian"
ADAPTIVE = "adaptive-interval"
# beyond this the Gauss-Hermite weights underflow
MAX_NODES = 150


@dataclass(frozen=True)
class QuadratureSpec:
    method: str = GAUSSIAN
    eps_span: float = 12.0
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    nodes: int = 48
    center: float = 0.0

    def __post_init__(self):
        if self.method not in (GAUSSIAN, ADAPTIVE):
            raise ValueError(f"unknown quadrature method {self.method!r}")
        if self.rel_tol <= 0 or self.eps_span <= 0:
            raise ValueError("rel_tol and eps_span must be positive")

    @classmethod
    def for_state(cls, params: ECSParams, t: float = 0.0, config: OscillatorConfig | None = None,
                  **kw) -> "QuadratureSpec":
        """Spec tuned to the density of ``params``: span, node count and envelope centre."""
        config = config or OscillatorConfig()
        span = 8 + params.eps0 + 2 * math.sqrt(2 * params.m + 1)
        center = params.eps0 * math.cos(params.theta(t, config))
        kw.setdefault("nodes", max(48, 2 * (params.m + 2) + 16))
        return cls(eps_span=span, center=center, **kw)


@lru_cache(maxsize=None)
def _hermite_rule(n):
    u, w = roots_hermite(n)
    # fold the weight function back in: int f = sum w e^{u^2} f(u)
    return u, np.exp(np.log(w) + u * u)


def _gauss(f, spec, n):
    u, w = _hermite_rule(n)
    vals = np.asarray(f(spec.center + u))
    return np.sum(w * vals), np.sum(w * np.abs(vals))


def integrate_eps(f, spec: QuadratureSpec):
    """``int f(eps) d eps`` over the real line; ``f`` may be complex and must accept arrays."""
    if spec.method == ADAPTIVE:
        return _adaptive(f, spec)
    n = min(spec.nodes, MAX_NODES // 2)
    coarse, _ = _gauss(f, spec, n)
    fine, scale = _gauss(f, spec, 2 * n)
    if abs(fine - coarse) > spec.rel_tol * max(scale, np.finfo(float).tiny):
        raise ConvergenceError(
            f"Gauss-Hermite rule with {n} and {2 * n} nodes differ by {abs(fine - coarse):.3e}"
        )
    return fine


def _adaptive(f, spec):
    lo, hi = -spec.eps_span, spec.eps_span
    # absolute floor for integrands whose value is zero (odd moments)
    _, scale = _gauss(f, spec, min(spec.nodes, MAX_NODES // 2))
    epsabs = spec.rel_tol * max(scale, np.finfo(float).tiny)
    components = [np.real]
    if np.iscomplexobj(f(np.array([lo, 0.0, hi]))):
        components.append(np.imag)
    parts = []
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for component in components:
            try:
                val, _ = integrate.quad(lambda e: float(component(f(e))), lo, hi,
                                        epsrel=spec.rel_tol, epsabs=epsabs,
                                        limit=spec.max_subdivisions)
            except integrate.IntegrationWarning as exc:
                raise ConvergenceError(f"adaptive quadrature failed: {exc}") from exc
            parts.append(val)
    return parts[0] + 1j * parts[1] if len(parts) == 2 else parts[0]


def integrate_density(f, spec: QuadratureSpec, config: OscillatorConfig, weight_power: int = 0) -> float:
    """``int x^k f dx`` with ``x = eps / gamma`` for a density ``f`` given over ``eps``."""
    if weight_power not in (0, 1, 2):
        raise ValueError("weight_power must be 0, 1 or 2")
    g = config.gamma
    val = integrate_eps(lambda e: (e / g) ** weight_power * f(e), spec)
    return float(np.real(val)) / g


def quadrature_moments(params: ECSParams, config: OscillatorConfig, t: float,
                       spec: QuadratureSpec | None = None):
    """``(norm, mean_x, delta_x, mean_p, delta_p)`` integrated from the wave function.

    Momentum moments use ``p = -i hbar d/dx`` on the analytic derivative.
    """
    if spec is None:
        spec = QuadratureSpec.for_state(params, t, config)
    g = config.gamma
    hbar = config.hbar

    def dens(e):
        return np.abs(psi_ecs_t(params, e, t, config)) ** 2

    norm = integrate_density(dens, spec, config, 0)
    mx = integrate_density(dens, spec, config, 1) / norm
    mx2 = integrate_density(dens, spec, config, 2) / norm
    # d/dx = gamma d/deps, dx = d eps / gamma
    p1 = integrate_eps(
        lambda e: np.conj(psi_ecs_t(params, e, t, config)) * dpsi_ecs_t(params, e, t, config), spec)
    mp = float(np.real(-1j * hbar * p1)) / norm
    p2 = integrate_eps(lambda e: np.abs(dpsi_ecs_t(params, e, t, config)) ** 2, spec)
    mp2 = hbar**2 * g * float(np.real(p2)) / norm
    dx = math.sqrt(max(mx2 - mx * mx, 0.0))
    dp = math.sqrt(max(mp2 - mp * mp, 0.0))
    return norm, mx, dx, mp, dp
