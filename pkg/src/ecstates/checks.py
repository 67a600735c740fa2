"""Cross-validation checks behind ``ecstates verify``.

Each check returns a :class:`Check` with the worst residual seen and the
tolerance it was held to.  Exceptions raised inside a check (for example a
:class:`TruncationError` from an undersized Fock space) turn it into a
failed check instead of aborting the run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from . import closed_form as cf
from . import fock_oracle as fo
from . import moments as mo
from .params import ECSParams, OscillatorConfig
from .quadrature import QuadratureSpec, integrate_density, quadrature_moments
from .special_functions import (
    ecs_norm_poly,
    hermite_eval,
    laguerre_recurrence,
    shifted_hermite_closed,
    shifted_hermite_sum,
)

DEFAULT_M = (0, 1, 2, 3)
DEFAULT_BETA = (0.25, 1.0, 4.0, 9.0)


@dataclass
class Check:
    name: str
    residual: float | None
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        out = {
            "check_name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerifyOptions:
    m_values: tuple = DEFAULT_M
    beta_values: tuple = DEFAULT_BETA
    trunc_dim: int | None = None
    paper_literal: bool = False
    rel_tol: float = 1e-7
    config: OscillatorConfig = field(default_factory=OscillatorConfig)

    def constants(self, m, beta):
        return mo.moment_constants(m, beta, paper_literal=self.paper_literal)

    def period_times(self, n, endpoint=False):
        return np.linspace(0.0, self.config.period, n, endpoint=endpoint)


def _run(name, tolerance, fn):
    try:
        residual, detail = fn()
    except Exception as exc:  # reported as a failed check
        return Check(name, None, tolerance, False, f"{type(exc).__name__}: {exc}")
    residual = float(residual)
    return Check(name, residual, tolerance, bool(residual <= tolerance), detail)


def _rel(a, b, floor):
    return abs(a - b) / max(abs(a), abs(b), floor)


def hermite_recurrence():
    worst = 0.0
    for x in np.linspace(-5, 5, 41):
        h = [hermite_eval(n, x) for n in range(32)]
        for n in range(1, 31):
            terms = (h[n + 1], 2 * x * h[n], 2 * n * h[n - 1])
            scale = max(abs(v) for v in terms) or 1.0
            worst = max(worst, abs(terms[0] - terms[1] + terms[2]) / scale)
    return worst, "n <= 30, |x| <= 5"


def appendix_identity(terms=60):
    worst = 0.0
    for m in range(9):
        for s in (-1.5, -0.5, 0.5, 1.2):
            for eps in (-3.0, -1.0, 0.0, 1.7, 3.0):
                closed = shifted_hermite_closed(m, s, eps)
                partial = shifted_hermite_sum(m, s, eps, terms)
                worst = max(worst, abs(partial - closed) / (1 + abs(closed)))
    return worst, f"m <= 8, {terms} terms"


def laguerre_crosscheck():
    worst = 0.0
    for m in range(13):
        for beta in np.linspace(0, 16, 33):
            a, b = ecs_norm_poly(m, beta), laguerre_recurrence(m, -beta)
            worst = max(worst, abs(a - b) / abs(b))
    return worst, "m <= 12, beta <= 16"


def ecs_norm_identity(opts):
    worst = 0.0
    for m in range(5):
        for beta in opts.beta_values:
            p = ECSParams.from_beta(m, beta)
            norm2 = fo.unnormalized_raised_norm2(p, opts.trunc_dim)
            fo.build_ecs(p, opts.trunc_dim)
            expected = factorial(m) * ecs_norm_poly(m, beta)
            worst = max(worst, abs(norm2 - expected) / expected)
    return worst, "m <= 4"


def constants_vs_oracle(opts):
    worst = 0.0
    for m in opts.m_values:
        for beta in opts.beta_values:
            res = mo.validate_constants(opts.constants(m, beta), opts.trunc_dim)
            worst = max(worst, *res.values())
    label = "paper-literal S3/S4" if opts.paper_literal else "corrected S3/S4"
    return worst, label


def constants_m1_closed(opts):
    worst = worst_c2 = 0.0
    for beta in opts.beta_values:
        mc = opts.constants(1, beta)
        c2 = (beta + 3) / (beta + 1)
        c1 = -4 * beta / (1 + beta) ** 2
        worst_c2 = max(worst_c2, abs(mc.C2 - c2))
        worst = max(worst, abs(mc.C2 - c2), abs(mc.C1 - c1))
    return worst, f"m = 1 first-order width formula; max C2 residual {worst_c2!r}"


def three_way_moments(opts):
    cfg = opts.config
    worst = 0.0
    for m in opts.m_values:
        for beta in opts.beta_values:
            p = ECSParams.from_beta(m, beta)
            mc = opts.constants(m, beta)
            for t in opts.period_times(16):
                closed = (
                    float(mo.mean_x(mc, p, cfg, t)),
                    float(mo.delta_x(mc, cfg, t, p.phi)),
                    float(mo.delta_p(mc, cfg, t, p.phi)),
                )
                ox, odx, _, odp = fo.oracle_moments(p, cfg, t, opts.trunc_dim)
                _, qx, qdx, _, qdp = quadrature_moments(p, cfg, t)
                floors = (cfg.x0, cfg.x0, cfg.p0)
                for k, (o, q) in enumerate(((ox, qx), (odx, qdx), (odp, qdp))):
                    c = closed[k]
                    worst = max(worst, _rel(c, o, floors[k]), _rel(c, q, floors[k]),
                                _rel(o, q, floors[k]))
    return worst, "<x>, dx, dp pairwise: closed form / Fock oracle / quadrature"


def oracle_wavefunction(opts):
    cfg = opts.config
    eps = np.linspace(-6, 6, 241)
    worst = 0.0
    for m in (0, 1, 2, 3):
        for beta in [b for b in opts.beta_values if b <= 4] or [1.0]:
            p = ECSParams.from_beta(m, beta)
            state = fo.build_ecs(p, opts.trunc_dim)
            for t in opts.period_times(5):
                closed = cf.psi_ecs_t(p, eps, t, cfg)
                synth = cf.fock_synthesis(fo.evolve(state, cfg, t).amps, eps, cfg)
                diff = cf.align_global_phase(synth, closed) - closed
                worst = max(worst, float(np.max(np.abs(diff))))
    return worst, "closed-form psi vs Fock synthesis, m <= 3, beta <= 4"


def first_order_density(opts):
    cfg = opts.config
    eps = np.linspace(-6, 6, 241)
    worst = 0.0
    for beta in (0.25, 1.0, 4.0):
        p = ECSParams.from_beta(1, beta)
        for t in opts.period_times(8):
            a = np.abs(cf.psi_ecs_t(p, eps, t, cfg)) ** 2
            b = cf.density_m1(p, eps, t, cfg)
            worst = max(worst, float(np.max(np.abs(a - b))))
    return worst, "|psi_{z,1}|^2 vs closed density, 241 points x 8 times"


def normalization(opts):
    cfg = opts.config
    worst = 0.0
    for m in range(5):
        for beta in sorted(set(opts.beta_values) | {0.0}):
            if beta > 9:
                continue
            p = ECSParams.from_beta(m, beta)
            for t in opts.period_times(4):
                spec = QuadratureSpec.for_state(p, t, cfg)
                val = integrate_density(lambda e: np.abs(cf.psi_ecs_t(p, e, t, cfg)) ** 2,
                                        spec, cfg, 0)
                worst = max(worst, abs(val - 1))
    return worst, "m <= 4, beta <= 9"


def heisenberg_floor(opts):
    cfg = opts.config
    floor = cfg.hbar / 2
    worst = 0.0
    t = opts.period_times(64)
    for m in opts.m_values:
        for beta in opts.beta_values:
            prod = mo.uncertainty_product(opts.constants(m, beta), cfg, t)
            worst = max(worst, float(np.max(floor * (1 - 1e-9) - prod)), 0.0)
            gap = float(np.max(np.abs(prod - floor))) / floor
            if m == 0:
                worst = max(worst, gap)
            elif gap <= 1e-9:
                raise AssertionError(f"m={m}, beta={beta} sits on the minimum-uncertainty floor")
    return worst, "product >= hbar/2, equality only for m = 0"


def product_identity(opts):
    cfg = opts.config
    worst = 0.0
    t = opts.period_times(64)
    for m in opts.m_values:
        for beta in opts.beta_values:
            mc = opts.constants(m, beta)
            a = mo.uncertainty_product(mc, cfg, t)
            b = mo.uncertainty_product_closed(mc, cfg, t)
            worst = max(worst, float(np.max(np.abs(a - b) / b)))
    return worst, "dx*dp vs expanded C1/C2 form"


def squeezing_threshold(opts):
    wrong = []
    for beta in (0.5, 0.9, 1.0, 1.1, 2.0, 5.0):
        lo, _ = mo.ratio_range(opts.constants(1, beta))
        squeezed = lo < 1 - mo.SQUEEZE_TOL
        if squeezed != (beta > 1):
            wrong.append(beta)
    lo1, _ = mo.ratio_range(opts.constants(1, 1.0))
    lo4, _ = mo.ratio_range(opts.constants(1, 4.0))
    residual = max(abs(lo1 - 1.0), abs(lo4 - math.sqrt(19) / 5))
    if wrong:
        raise AssertionError(f"squeezing misclassified at beta={wrong}")
    return residual, "m = 1; squeezed iff beta > 1"


def ratio_bounds(opts):
    cfg = opts.config
    t = opts.period_times(64)
    worst = 0.0
    for beta in sorted(set(opts.beta_values) | {0.0, 0.5, 1.0, 2.0, 3.0}):
        lo, hi = mo.squeeze_ratio_bounds(beta)
        ratio = mo.delta_x(opts.constants(1, beta), cfg, t) / cfg.x0
        worst = max(worst, float(np.max(lo - ratio)), float(np.max(ratio - hi)), 0.0)
    return worst, "m = 1, 64 times"


def reductions(opts):
    cfg = opts.config
    eps = np.linspace(-6, 6, 241)
    worst = 0.0
    for beta in opts.beta_values:
        p = ECSParams.from_beta(0, beta)
        worst = max(worst, float(np.max(np.abs(cf.psi_ecs(p, eps, cfg) - cf.psi_coherent(p, eps, cfg)))))
        dx = mo.delta_x(mo.moment_constants(0, beta), cfg, opts.period_times(64))
        worst = max(worst, float(np.ptp(dx)))
    for m in range(9):
        p = ECSParams(m, 0.0)
        worst = max(worst, float(np.max(np.abs(cf.psi_ecs(p, eps, cfg) - cf.psi_fock(m, eps, cfg)))))
    return worst, "m = 0 -> coherent, alpha = 0 -> Fock, m = 0 width constant"


def erratum_residuals(beta_values) -> dict:
    """Residual of the printed S3/S4 sums against the first-order width formula."""
    out = {}
    for beta in beta_values:
        lit = mo.moment_constants(1, beta, paper_literal=True)
        out[repr(float(beta))] = {
            "C2_literal": lit.C2,
            "C2_expected": (beta + 3) / (beta + 1),
            "residual": (beta + 3) / (beta + 1) - lit.C2,
        }
    return out


def run_all(opts: VerifyOptions) -> list[Check]:
    return [
        _run("hermite_recurrence", 1e-12, hermite_recurrence),
        _run("appendix_identity", 1e-8, appendix_identity),
        _run("laguerre_crosscheck", 1e-12, laguerre_crosscheck),
        _run("ecs_norm_identity", 1e-10, lambda: ecs_norm_identity(opts)),
        _run("constants_vs_oracle", mo.VALIDATION_RTOL, lambda: constants_vs_oracle(opts)),
        _run("constants_first_order", 1e-12, lambda: constants_m1_closed(opts)),
        _run("three_way_moments", opts.rel_tol, lambda: three_way_moments(opts)),
        _run("oracle_wavefunction", 1e-8, lambda: oracle_wavefunction(opts)),
        _run("first_order_density", 1e-10, lambda: first_order_density(opts)),
        _run("normalization", 1e-9, lambda: normalization(opts)),
        _run("heisenberg_floor", 1e-9, lambda: heisenberg_floor(opts)),
        _run("product_identity", 1e-12, lambda: product_identity(opts)),
        _run("squeezing_threshold", 1e-9, lambda: squeezing_threshold(opts)),
        _run("ratio_bounds", 1e-12, lambda: ratio_bounds(opts)),
        _run("reductions", 1e-12, lambda: reductions(opts)),
    ]
