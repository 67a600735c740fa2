"""Hermite and Laguerre kernels and the shifted-argument Hermite series.

All Hermite evaluations use the physicists' convention and the upward
three-term recurrence ``H_{n+1} = 2x H_n - 2n H_{n-1}``.  Functions accept
scalars or numpy arrays and broadcast elementwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .errors import ConvergenceError


@dataclass(frozen=True)
class PolySequence:
    """Values ``p_0(x) .. p_N(x)`` of a polynomial family at one argument."""

    values: tuple
    argument: float | complex

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]


def hermite_sequence(nmax: int, x) -> PolySequence:
    """Return ``H_0(x) .. H_nmax(x)`` for a scalar (real or complex) argument."""
    if nmax < 0:
        raise ValueError("nmax must be non-negative")
    vals = [1.0 + 0 * x]
    if nmax >= 1:
        vals.append(2 * x)
    for n in range(1, nmax):
        vals.append(2 * x * vals[n] - 2 * n * vals[n - 1])
    return PolySequence(tuple(vals), x)


def _hermite(n, x):
    if n < 0:
        raise ValueError("Hermite order must be non-negative")
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev
    h = 2 * x
    for k in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h


def hermite_eval(n: int, x):
    """Physicists' Hermite polynomial ``H_n(x)`` for real ``x``.

    >>> float(hermite_eval(3, 2.0))
    40.0
    """
    x = np.asarray(x, dtype=float)
    out = _hermite(n, x)
    return out[()] if out.ndim == 0 else out


def hermite_complex_eval(m: int, z):
    """``H_m(z)`` at complex argument, same recurrence as :func:`hermite_eval`."""
    z = np.asarray(z, dtype=complex)
    out = _hermite(m, z)
    return out[()] if out.ndim == 0 else out


def ecs_norm_poly(m: int, beta: float) -> float:
    """Normalisation polynomial ``sum_r C(m, r) beta^r / r!``.

    This is the Laguerre polynomial ``L_m(-beta)``; the finite binomial sum
    is exact in m + 1 terms.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if beta < 0:
        raise ValueError("beta must be non-negative")
    return float(sum(comb(m, r) * beta**r / factorial(r) for r in range(m + 1)))


def laguerre_recurrence(m: int, x: float, k: int = 0) -> float:
    """Generalized Laguerre polynomial ``L_m^(k)(x)`` by the three-term recurrence.

    Kept independent of :func:`ecs_norm_poly` so it can serve as a check.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    l_prev, l_cur = 1.0, 1.0 + k - x
    if m == 0:
        return l_prev
    for n in range(1, m):
        l_prev, l_cur = l_cur, ((2 * n + 1 + k - x) * l_cur - (n + k) * l_prev) / (n + 1)
    return l_cur


def shifted_hermite_sum(
    m: int, s, eps, terms: int, rel_tol: float = 1e-10, stop_tol: float = 1e-14
) -> complex:
    """Partial sum ``sum_{n<terms} s^n H_{n+m}(eps) / n!``.

    Summation stops early once three consecutive partial sums agree to
    ``stop_tol``.  If the budget runs out first, the first omitted term
    must be below ``rel_tol`` relative to the sum, otherwise
    :class:`ConvergenceError` is raised.
    """
    if terms < 1:
        raise ValueError("terms must be positive")
    s = complex(s)
    eps = float(eps)
    # H_m .. H_{m+terms}; the extra entry feeds the tail check
    h = hermite_sequence(m + terms, eps).values
    total = 0j
    coef = 1.0 + 0j  # s^n / n!
    stable = 0
    for n in range(terms):
        prev = total
        total = total + coef * h[n + m]
        coef = coef * s / (n + 1)
        if n > 0 and abs(total - prev) <= stop_tol * abs(total):
            stable += 1
            if stable >= 2:
                return total
        else:
            stable = 0
    tail = abs(coef * h[m + terms])
    if tail > rel_tol * max(abs(total), 1.0):
        raise ConvergenceError(
            f"shifted Hermite series not converged after {terms} terms "
            f"(next term {tail:.3e}, sum {abs(total):.3e})"
        )
    return total


def shifted_hermite_closed(m: int, s, eps) -> complex:
    """Closed form ``exp(-s^2 + 2 s eps) H_m(eps - s)`` of the shifted series."""
    s = np.asarray(s, dtype=complex)
    eps = np.asarray(eps)
    out = np.exp(-s * s + 2 * s * eps) * _hermite(m, eps - s)
    return out[()] if out.ndim == 0 else out
