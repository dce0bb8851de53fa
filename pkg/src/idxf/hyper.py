"""Generalized hypergeometric series and continuous dual Hahn polynomials.

All series are summed forward in the term index with compensated summation.
Parameters broadcast against the argument, so a single call can evaluate a
whole vector of x-dependent parameters (``gamma + ix``) at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._summation import CompensatedSum
from .errors import DenominatorPole, DomainError, NoConvergence

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_MAX_TERMS",
    "CDHahnParams",
    "pfq_series",
    "cdhahn_poly",
    "cdhahn_normalized",
    "cdhahn_genfun_lhs",
    "cdhahn_genfun_rhs",
    "normalized_bound",
]

DEFAULT_TOL = 1e-14
DEFAULT_MAX_TERMS = 10_000
_CONSECUTIVE = 3


def _scalar_or_array(out: np.ndarray):
    if out.ndim == 0:
        return complex(out)
    return out


def pfq_series(
    numer: Sequence,
    denom: Sequence,
    z,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
):
    """Sum ``pFq(numer; denom; z)`` term by term.

    Stops once ``|term| <= tol * |partial sum|`` holds for three consecutive
    terms, which also covers series terminated by a nonpositive-integer
    numerator parameter (the trailing terms are exact zeros).

    Parameters
    ----------
    numer, denom : sequences of complex or array_like
        Upper and lower parameters; every entry broadcasts against ``z``.
    z : complex or array_like
        Argument. For ``p = q + 1`` it must satisfy ``|z| < 1``.
    tol : float
        Relative stopping tolerance, must be positive.
    max_terms : int
        Cap on the number of terms.

    Raises
    ------
    NoConvergence
        If ``max_terms`` terms were summed without meeting the criterion.
    DenominatorPole
        If a lower parameter hits a nonpositive integer before termination.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    p, q = len(numer), len(denom)
    if p > q + 1:
        raise DomainError(f"{p}F{q} diverges for every nonzero argument")
    arrays = np.broadcast_arrays(
        np.asarray(z, dtype=complex),
        *[np.asarray(a, dtype=complex) for a in numer],
        *[np.asarray(b, dtype=complex) for b in denom],
    )
    zz, a_par, b_par = arrays[0], arrays[1 : 1 + p], arrays[1 + p :]
    if p == q + 1 and np.any(np.abs(zz) >= 1):
        raise DomainError(f"{p}F{q} series requires |z| < 1")

    shape = zz.shape
    term = np.ones(shape, dtype=complex)
    acc = CompensatedSum(shape)
    acc.add(term)
    small = np.zeros(shape, dtype=int)
    done = np.zeros(shape, dtype=bool)
    for n in range(max_terms):
        num = np.ones(shape, dtype=complex)
        for a in a_par:
            num = num * (a + n)
        den = np.ones(shape, dtype=complex)
        for b in b_par:
            den = den * (b + n)
        num = num * term * zz
        pole = (den == 0) & (num != 0) & ~done
        if np.any(pole):
            raise DenominatorPole(f"denominator parameter equals -{n} before termination")
        safe = np.where(den == 0, 1.0, den)
        term = np.where(den == 0, 0.0, num / (safe * (n + 1)))
        active = ~done
        acc.add(term, active)
        total = np.abs(acc.value)
        is_small = np.abs(term) <= tol * total
        small = np.where(is_small, small + 1, 0)
        done = done | (small >= _CONSECUTIVE)
        if np.all(done):
            return _scalar_or_array(acc.value)
    raise NoConvergence(f"{p}F{q} series did not converge in {max_terms} terms")


@dataclass(frozen=True)
class CDHahnParams:
    """Parameters ``(a, b, c)`` of the continuous dual Hahn polynomial ``S_n(x^2; a, b, c)``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a + self.b > 0 and self.a + self.c > 0):
            raise DomainError("continuous dual Hahn parameters need a+b > 0 and a+c > 0")


def _as_params(p) -> CDHahnParams:
    if isinstance(p, CDHahnParams):
        return p
    return CDHahnParams(*p)


def cdhahn_normalized(n: int, xsq, p) -> np.ndarray:
    """``S_n(x^2; a, b, c) / ((a+b)_n (a+c)_n)``, the terminating 3F2 sum at 1.

    The products ``(a+ix)_k (a-ix)_k`` equal ``prod_j ((a+j)^2 + x^2)``, so
    every term is real and the sum is carried out in real arithmetic.
    """
    p = _as_params(p)
    if n < 0:
        raise DomainError("degree must be nonnegative")
    xs = np.asarray(xsq, dtype=float)
    if np.any(xs < 0):
        raise DomainError("xsq must be nonnegative")
    ab, ac = p.a + p.b, p.a + p.c
    term = np.ones(xs.shape)
    acc = CompensatedSum(xs.shape)
    acc.add(term)
    for k in range(n):
        term = term * (k - n) * ((p.a + k) ** 2 + xs) / ((ab + k) * (ac + k) * (k + 1))
        acc.add(term)
    out = acc.value.real
    if out.ndim == 0:
        return float(out)
    return out


def cdhahn_poly(n: int, xsq, p):
    """Continuous dual Hahn polynomial ``S_n(x^2; a, b, c)``.

    Evaluated as ``(a+b)_n (a+c)_n 3F2(-n, a+ix, a-ix; a+b, a+c; 1)`` with the
    ``n + 1`` terms summed forward.

    Examples
    --------
    >>> cdhahn_poly(1, 1.0, (2, 2, 0.5))
    5.0
    """
    p = _as_params(p)
    scale = math.prod((p.a + p.b + k) * (p.a + p.c + k) for k in range(n))
    return scale * cdhahn_normalized(n, xsq, p)


def cdhahn_genfun_lhs(x, xi, p, tol: float = DEFAULT_TOL):
    """Left side of the generating function, ``e^xi 2F2(a+ix, a-ix; a+b, a+c; -xi)``."""
    p = _as_params(p)
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=complex)
    f = pfq_series([p.a + 1j * x, p.a - 1j * x], [p.a + p.b, p.a + p.c], -xi, tol=tol)
    return _scalar_or_array(np.exp(xi) * f)


def normalized_bound(x, p) -> np.ndarray:
    """Bound ``P(x)`` with ``|S_n(x^2)/((a+b)_n (a+c)_n)| <= 2^n P(x)`` for every ``n``.

    ``P`` is the supremum over ``k`` of the partial products of the term
    ratios ``((a+j)^2+x^2)/((a+b+j)(a+c+j))``; once a factor drops below 1
    all later ones do too (needs ``b + c > 0``).
    """
    p = _as_params(p)
    if p.b + p.c <= 0:
        raise DomainError("tail bound requires b + c > 0")
    xs = np.asarray(x, dtype=float) ** 2
    prod = np.ones(xs.shape)
    best = np.ones(xs.shape)
    j = 0
    while True:
        r = ((p.a + j) ** 2 + xs) / ((p.a + p.b + j) * (p.a + p.c + j))
        grow = r >= 1.0
        if not np.any(grow):
            return best
        prod = np.where(grow, prod * r, prod)
        best = np.maximum(best, prod)
        j += 1


def cdhahn_genfun_rhs(x: float, xi: complex, p, tol: float = 1e-12) -> tuple[complex, int]:
    """Truncated right side ``sum_{n<=N} S_n/((a+b)_n (a+c)_n) xi^n / n!``.

    ``N`` is chosen from a rigorous tail bound: ``|S_n/((a+b)_n(a+c)_n)|`` is at
    most ``2^n P`` with ``P`` the supremum of the partial products of the term
    ratios, so the tail is dominated by an exponential-series tail in
    ``2|xi|``. Returns ``(value, N)``.
    """
    p = _as_params(p)
    y = 2.0 * abs(xi)
    big_p = float(normalized_bound(float(x), p))
    # smallest N with P y^(N+1)/(N+1)! / (1 - y/(N+2)) < tol
    n_cut = 0
    log_term = 0.0
    while True:
        log_term += math.log(y) - math.log(n_cut + 1) if y > 0 else -math.inf
        if n_cut + 2 > y and big_p * math.exp(log_term) / (1 - y / (n_cut + 2)) < tol:
            break
        n_cut += 1
    acc = CompensatedSum()
    for n in range(n_cut + 1):
        acc.add(cdhahn_normalized(n, x * x, p) * xi**n / math.factorial(n))
    return complex(acc.value), n_cut
