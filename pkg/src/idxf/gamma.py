"""Complex log-gamma and the gamma-derived helpers used throughout idxf.

``log_gamma`` is the analytic continuation of ``log Gamma`` from the positive
real axis (branch cut on the negative real axis), the same convention as
``scipy.special.loggamma``. It is evaluated by the Stirling series after an
upward shift of the argument, and by the reflection formula for
``Re z < 1/2``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "MAX_ABS_RE",
    "log_gamma",
    "gamma",
    "pochhammer",
    "generalized_degree",
    "abs_gamma_sq",
]

#: Largest ``|Re z|`` accepted by :func:`log_gamma`.
MAX_ABS_RE = 1.0e6

_POLE_TOL = 1e-12
_STIRLING_R = 16.0
_LOG_PI = math.log(math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

_BERNOULLI_EVEN = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
]
# B_{2k} / (2k (2k-1)), k = 1..10
_STIRLING_COEF = [
    float(b / ((2 * k) * (2 * k - 1))) for k, b in enumerate(_BERNOULLI_EVEN, start=1)
]


def _stirling(z: np.ndarray) -> np.ndarray:
    # valid for |z| >= _STIRLING_R, Re z > 0
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    corr = np.zeros_like(z)
    for c in reversed(_STIRLING_COEF):
        corr = corr * zinv2 + c
    return (z - 0.5) * np.log(z) - z + _HALF_LOG_2PI + corr * zinv


def _log_gamma_right(z: np.ndarray) -> np.ndarray:
    """log Gamma on Re z >= 1/2 by upward shift and Stirling."""
    # smallest shift with |z + shift| >= _STIRLING_R
    reach = np.sqrt(np.maximum(_STIRLING_R**2 - z.imag**2, 0.0))
    shift = np.maximum(np.ceil(reach - z.real), 0.0)
    out = _stirling(z + shift)
    nmax = int(shift.max()) if shift.size else 0
    for k in range(nmax):
        active = shift > k
        out = out - np.where(active, np.log(np.where(active, z + k, 1.0)), 0.0)
    return out


def _log_sin_pi_upper(z: np.ndarray) -> np.ndarray:
    # analytic branch of log sin(pi z) on Im z >= 0 that is real on (0, 1)
    # exp(2 pi i z) has period 1 in Re z; reducing first keeps expm1 accurate near poles
    frac = z - np.round(z.real)
    return (
        -1j * math.pi * z
        + np.log(-np.expm1(2j * math.pi * frac))
        - math.log(2.0)
        + 0.5j * math.pi
    )


def _check_poles(z: np.ndarray) -> None:
    re, im = z.real, z.imag
    bad = (np.abs(im) <= _POLE_TOL) & (re <= _POLE_TOL) & (np.abs(re - np.round(re)) <= _POLE_TOL)
    if np.any(bad):
        raise PoleError(f"log_gamma has a pole at {z[bad].ravel()[0]}")
    if np.any(~np.isfinite(z)):
        raise DomainError("log_gamma requires finite arguments")
    if np.any(np.abs(re) > MAX_ABS_RE):
        raise OverflowError(f"|Re z| exceeds {MAX_ABS_RE:g}")


def log_gamma(z):
    """Principal branch of ``log Gamma(z)`` for complex ``z``.

    Parameters
    ----------
    z : complex or array_like of complex
        Evaluation points. Nonpositive integers (within ``1e-12``) are poles.

    Returns
    -------
    complex or ndarray
        Same shape as ``z``.

    Raises
    ------
    PoleError
        If any point lies on a pole.
    OverflowError
        If ``|Re z| > MAX_ABS_RE``.
    """
    arr = np.asarray(z, dtype=complex)
    _check_poles(arr)
    lower = arr.imag < 0
    w = np.where(lower, np.conj(arr), arr)

    out = np.empty_like(w)
    right = w.real >= 0.5
    if np.any(right):
        out[right] = _log_gamma_right(w[right])
    left = ~right
    if np.any(left):
        wl = w[left]
        out[left] = _LOG_PI - _log_sin_pi_upper(wl) - _log_gamma_right(1.0 - wl)

    out = np.where(lower, np.conj(out), out)
    if out.ndim == 0:
        return complex(out)
    return out


def gamma(z):
    """``Gamma(z)`` as ``exp(log_gamma(z))``."""
    return np.exp(log_gamma(z))


def pochhammer(a, n: int):
    """Rising factorial ``(a)_n = a (a+1) ... (a+n-1)`` by running product.

    ``a`` may be an array; the product is taken elementwise.
    """
    if n < 0:
        raise DomainError("pochhammer requires n >= 0")
    out = np.ones_like(np.asarray(a, dtype=complex))
    for k in range(n):
        out = out * (np.asarray(a) + k)
    if out.ndim == 0:
        return complex(out)
    return out


def generalized_degree(x, gamma: float):
    """Generalized degree ``(-x)^(gamma) = i^gamma Gamma(gamma + ix) / Gamma(ix)``.

    ``i^gamma`` is the principal value ``exp(i pi gamma / 2)``. The value at
    ``x = 0`` is exactly zero.
    """
    if gamma <= 0:
        raise DomainError("generalized_degree requires gamma > 0")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(~np.isfinite(xa)):
        raise DomainError("generalized_degree requires finite x >= 0")
    out = np.zeros(xa.shape, dtype=complex)
    pos = xa > 0
    if np.any(pos):
        xp = xa[pos]
        logv = log_gamma(gamma + 1j * xp) - log_gamma(1j * xp) + 0.5j * math.pi * gamma
        out[pos] = np.exp(logv)
    if out.ndim == 0:
        return complex(out)
    return out


def abs_gamma_sq(a: float, x):
    """``|Gamma(a + ix)|^2`` evaluated as ``exp(2 Re log_gamma(a + ix))``."""
    xa = np.asarray(x, dtype=float)
    if a < 0:
        raise DomainError("abs_gamma_sq requires a >= 0")
    if a == 0 and np.any(xa == 0):
        raise PoleError("|Gamma(0)|^2 is a pole")
    out = np.exp(2.0 * np.real(log_gamma(a + 1j * xa)))
    if out.ndim == 0:
        return float(out)
    return out
