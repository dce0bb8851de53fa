"""Modified Bessel functions: I by its power series, K by the MacDonald integral.

``bessel_k`` integrates

    K_nu(rho) = 1/2 (rho/2)^nu int_0^inf t^(-nu-1) exp(-t - rho^2 / (4t)) dt

after the substitution ``t = e^u``. The integrand then decays
doubly-exponentially on both sides of its single maximum, so a finite window
around the peak carries everything above ``exp(-_WINDOW)`` of the peak value.
"""

from __future__ import annotations

import math

import numpy as np

from ._summation import CompensatedSum
from .errors import DomainError, NoConvergence, QuadratureFailure, RangeError
from .quadrature import composite_nodes

__all__ = ["I_SERIES_MAX_ABS", "K_MAX_ORDER", "bessel_i", "bessel_k", "log_bessel_k"]

#: Largest ``|zeta|`` accepted by :func:`bessel_i`.
I_SERIES_MAX_ABS = 60.0
#: Validated order range for :func:`bessel_k`.
K_MAX_ORDER = 200.0

_WINDOW = 60.0
_GL_ORDER = 20
_MAX_PANELS = 2048


def bessel_i(nu: float, zeta, tol: float = 1e-16):
    """``I_nu(zeta)`` from ``sum_n (zeta/2)^(nu+2n) / (n! Gamma(nu+n+1))``.

    ``(zeta/2)^nu`` uses the principal branch. Summation stops once the
    geometric bound on the remaining tail drops below ``tol`` times the
    partial sum.

    Raises
    ------
    RangeError
        If ``|zeta| > I_SERIES_MAX_ABS``.
    """
    if nu < 0:
        raise DomainError("bessel_i requires nu >= 0")
    z = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(z) > I_SERIES_MAX_ABS):
        raise RangeError(f"|zeta| > {I_SERIES_MAX_ABS} is outside the series range")
    half = 0.5 * z
    q = half * half
    nonzero = z != 0
    with np.errstate(divide="ignore", invalid="ignore"):
        lead = np.exp(nu * np.log(np.where(nonzero, half, 1.0)) - math.lgamma(nu + 1))
    lead = np.where(nonzero, lead, 1.0 if nu == 0 else 0.0)

    term = lead.copy()
    acc = CompensatedSum(z.shape)
    acc.add(term)
    done = ~nonzero
    for n in range(10_000):
        ratio = q / ((n + 1) * (nu + n + 1))
        term = term * ratio
        acc.add(term, ~done)
        r = np.abs(q) / ((n + 2) * (nu + n + 2))
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(r < 1, np.abs(term) * r / (1 - r), np.inf)
        done = done | (tail <= tol * np.abs(acc.value))
        if np.all(done):
            out = acc.value
            return complex(out) if out.ndim == 0 else out
    raise NoConvergence("Bessel I series did not converge")


def _peak(nu: float, rho: np.ndarray) -> np.ndarray:
    # maximiser e^u of -nu u - e^u - rho^2 e^-u / 4, cancellation-free
    root = np.sqrt(nu * nu + rho * rho)
    if nu >= 0:
        return rho * rho / (2.0 * (root + nu))
    return 0.5 * (root - nu)


def _shifted_exponent(v, e_star, b_star):
    # g(u* + v) - g(u*) written with the stationarity condition
    # nu = b* - e*, b* = rho^2 / (4 e*): a sum of two nonpositive terms
    return -e_star * (np.expm1(v) - v) - b_star * (np.expm1(-v) + v)


def log_bessel_k(nu: float, rho, tol: float = 1e-13):
    """``log K_nu(rho)`` for real order and ``rho > 0`` via the MacDonald integral.

    Raises
    ------
    DomainError
        If any ``rho <= 0`` or ``|nu| > K_MAX_ORDER``.
    QuadratureFailure
        If panel doubling reaches its limit before the tolerance is met.
    """
    r = np.atleast_1d(np.asarray(rho, dtype=float))
    if np.any(~(r > 0)) or np.any(~np.isfinite(r)):
        raise DomainError("bessel_k requires finite rho > 0")
    if abs(nu) > K_MAX_ORDER:
        raise DomainError(f"|nu| > {K_MAX_ORDER} is outside the validated range")
    tol = max(tol, 1e-15)
    qr = 0.25 * r * r
    e_star = _peak(nu, r)
    b_star = qr / e_star
    u_star = np.log(e_star)
    g_star = -nu * u_star - e_star - b_star
    step0 = np.minimum(1.0, 4.0 / np.sqrt(e_star + b_star))

    def walk(direction: float) -> np.ndarray:
        step = step0.copy()
        for _ in range(200):
            low = _shifted_exponent(direction * step, e_star, b_star) < -_WINDOW
            if np.all(low):
                return direction * step
            step = np.where(low, step, 2 * step)
        raise QuadratureFailure("could not bracket the MacDonald integrand")

    lo, hi = walk(-1.0), walk(1.0)
    panels = 8
    old = None
    while panels <= _MAX_PANELS:
        s, w = composite_nodes(np.linspace(0.0, 1.0, panels + 1), _GL_ORDER)
        v = lo[:, None] + (hi - lo)[:, None] * s[None, :]
        vals = np.exp(_shifted_exponent(v, e_star[:, None], b_star[:, None]))
        integral = (vals * w[None, :]).sum(axis=1) * (hi - lo)
        if old is not None and np.all(np.abs(integral - old) <= 0.1 * tol * integral):
            logk = math.log(0.5) + nu * np.log(0.5 * r) + g_star + np.log(integral)
            return logk if np.ndim(rho) else float(logk[0])
        old, panels = integral, panels * 2
    raise QuadratureFailure("MacDonald integral did not converge")


def bessel_k(nu: float, rho, tol: float = 1e-13):
    """MacDonald function ``K_nu(rho)`` for real ``nu`` and ``rho > 0``.

    Relative accuracy is ``max(tol, 1e-11)`` or better.

    Raises
    ------
    OverflowError
        If the value exceeds the double range (large order, small ``rho``).
    """
    logk = np.asarray(log_bessel_k(nu, rho, tol))
    if np.any(logk > 709.0):
        raise OverflowError("K_nu(rho) overflows double precision")
    out = np.exp(logk)
    return float(out) if out.ndim == 0 else out
