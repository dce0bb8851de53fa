"""The weighted Bergman space of entire functions on the complex plane.

The measure is

    dmu_gamma(z) = 2 / (pi Gamma(2 gamma)) rho^(2 gamma - 1) K_(2 gamma - 1)(2 rho) rho drho dtheta

with ``z = rho e^(i theta)``. The Bessel order ``2 gamma - 1`` is what makes
``z^n / sqrt(n! (2 gamma)_n)`` orthonormal: with the moment formula

    int_0^inf x^(mu-1) K_nu(x) dx = 2^(mu-2) Gamma((mu+nu)/2) Gamma((mu-nu)/2)

one gets ``||z^n||^2 = n! Gamma(n + 2 gamma) / Gamma(2 gamma)`` exactly for
that order and for no other (see :func:`monomial_norm_sq`). The order
``1/2 - gamma`` is kept behind ``index="alternate"`` for regression runs; the two
coincide only at ``gamma = 1/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal, Sequence

import numpy as np

from .bessel import I_SERIES_MAX_ABS, bessel_i, log_bessel_k
from .errors import DomainError, QuadratureFailure
from .hyper import pfq_series
from .quadrature import QuadratureSpec, integrate_disk_polar

__all__ = [
    "GammaParam",
    "BergmanFunction",
    "BERGMAN_SPEC",
    "measure_density",
    "monomial_norm_sq",
    "basis_element",
    "basis_function",
    "kernel_series",
    "kernel_closed",
    "kernel",
    "kernel_diagonal",
    "kernel_function",
    "bergman_inner",
    "bergman_gram",
    "radial_cutoff",
]

Index = Literal["standard", "alternate"]

#: Default quadrature for Bergman inner products.
BERGMAN_SPEC = QuadratureSpec(points_per_panel=16, tol=1e-11, graded=True, angular_points=32)
MIN_RHO_MAX = 25.0
_SERIES_DISPATCH = 25.0


@dataclass(frozen=True)
class GammaParam:
    """The real parameter ``gamma`` labelling spaces and transforms.

    In ``"strict"`` mode ``2 gamma`` must be a positive integer; ``"extended"``
    accepts any real ``gamma >= 1/2``.
    """

    gamma: float
    mode: Literal["strict", "extended"] = "strict"

    def __post_init__(self):
        g = float(self.gamma)
        if not math.isfinite(g) or g < 0.5:
            raise DomainError(f"gamma must be a finite real >= 1/2, got {self.gamma}")
        if self.mode not in ("strict", "extended"):
            raise DomainError(f"unknown gamma mode {self.mode!r}")
        if self.mode == "strict" and abs(2 * g - round(2 * g)) > 1e-12:
            raise DomainError(f"strict mode needs 2*gamma to be a positive integer, got gamma={g}")
        object.__setattr__(self, "gamma", g)

    @property
    def nu(self) -> float:
        """Bessel order ``2 gamma - 1`` of the measure and kernel."""
        return 2 * self.gamma - 1

    def require_oscillator(self) -> None:
        if self.gamma <= 1:
            raise DomainError(f"oscillator-linked features need gamma > 1, got {self.gamma}")


def _gp(gp) -> GammaParam:
    return gp if isinstance(gp, GammaParam) else GammaParam(float(gp), "extended")


def _order(gp: GammaParam, index: Index) -> float:
    if index == "standard":
        return gp.nu
    if index == "alternate":
        return 0.5 - gp.gamma
    raise DomainError(f"unknown Bessel index convention {index!r}")


def _log_density(rho: np.ndarray, gp: GammaParam, index: Index) -> np.ndarray:
    nu = _order(gp, index)
    return (
        math.log(2 / math.pi)
        - math.lgamma(2 * gp.gamma)
        + (2 * gp.gamma - 1) * np.log(rho)
        + log_bessel_k(nu, 2 * rho)
    )


@lru_cache(maxsize=64)
def _density_cached(gamma: float, mode: str, index: str, raw: bytes) -> np.ndarray:
    rho = np.frombuffer(raw, dtype=float)
    out = np.exp(_log_density(rho, GammaParam(gamma, mode), index))
    out.setflags(write=False)
    return out


def _density_on(rho: np.ndarray, gp: GammaParam, index: Index) -> np.ndarray:
    flat = np.ascontiguousarray(rho, dtype=float).ravel()
    return _density_cached(gp.gamma, gp.mode, index, flat.tobytes()).reshape(np.shape(rho))


def measure_density(z, gp, index: Index = "standard"):
    """Density of ``dmu_gamma`` with respect to ``rho drho dtheta``.

    Returns ``2/(pi Gamma(2 gamma)) rho^(2 gamma - 1) K_nu(2 rho)`` with
    ``nu = 2 gamma - 1`` (or ``1/2 - gamma`` for ``index="alternate"``).
    """
    gp = _gp(gp)
    rho = np.abs(np.asarray(z, dtype=complex))
    if np.any(rho == 0):
        raise DomainError("measure density is evaluated away from z = 0")
    out = np.exp(_log_density(np.atleast_1d(rho), gp, index))
    return float(out[0]) if rho.ndim == 0 else out.reshape(rho.shape)


def monomial_norm_sq(n: int, gp, index: Index = "standard") -> float:
    """Closed form of ``<z^n, z^n>_gamma`` from the Bessel-K moment formula.

    ``int_C |z|^(2n) dmu = 4/Gamma(2g) int_0^inf rho^(2n+2g) K_nu(2 rho) drho``
    and ``int_0^inf rho^s K_nu(2 rho) drho = Gamma((s+1+nu)/2) Gamma((s+1-nu)/2) / 4``.
    """
    gp = _gp(gp)
    nu = _order(gp, index)
    s = 2 * n + 2 * gp.gamma
    return math.exp(
        math.lgamma((s + 1 + nu) / 2) + math.lgamma((s + 1 - nu) / 2) - math.lgamma(2 * gp.gamma)
    )


def _log_basis_norm(n: int, gp: GammaParam) -> float:
    # log sqrt(n! (2 gamma)_n)
    g2 = 2 * gp.gamma
    return 0.5 * (math.lgamma(n + 1) + math.lgamma(g2 + n) - math.lgamma(g2))


def basis_element(n: int, gp, z):
    """Orthonormal basis function ``psi_n(z) = z^n / sqrt(n! (2 gamma)_n)``."""
    gp = _gp(gp)
    if n < 0:
        raise DomainError("basis index must be nonnegative")
    zz = np.asarray(z, dtype=complex)
    if n == 0:
        out = np.ones_like(zz)
    elif n <= 30:
        norm = math.prod(k * (2 * gp.gamma + k - 1) for k in range(1, n + 1))
        out = zz**n / math.sqrt(norm)
    else:
        nz = zz != 0
        with np.errstate(divide="ignore"):
            logv = n * np.log(np.where(nz, zz, 1.0)) - _log_basis_norm(n, gp)
        out = np.where(nz, np.exp(logv), 0.0)
    return complex(out) if out.ndim == 0 else out


def kernel_series(z, w, gp, tol: float = 1e-16):
    """Reproducing kernel as ``sum_n (z conj(w))^n / ((2 gamma)_n n!)``."""
    gp = _gp(gp)
    u = np.asarray(z, dtype=complex) * np.conj(np.asarray(w, dtype=complex))
    return pfq_series([], [2 * gp.gamma], u, tol=tol)


def kernel_closed(z, w, gp, root_sign: int = 1):
    """Closed form ``Gamma(2g) s^(1-2g) I_(2g-1)(2 s)`` with ``s = +-sqrt(z conj(w))``.

    ``root_sign`` selects the square root; both signs give the same value
    because the same branch of ``log s`` enters ``s^(1-2g)`` and the series of
    ``I``. Returns 1 where ``z conj(w) = 0``.
    """
    gp = _gp(gp)
    u = np.asarray(z, dtype=complex) * np.conj(np.asarray(w, dtype=complex))
    nz = u != 0
    s = root_sign * np.sqrt(np.where(nz, u, 1.0))
    if np.any(2 * np.abs(s) > I_SERIES_MAX_ABS):
        # propagate the I-series range error
        bessel_i(gp.nu, 2 * s)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = math.gamma(2 * gp.gamma) * np.exp((1 - 2 * gp.gamma) * np.log(s)) * bessel_i(gp.nu, 2 * s)
    out = np.where(nz, val, 1.0 + 0j)
    return complex(out) if out.ndim == 0 else out


def kernel(z, w, gp):
    """Kernel with series/closed-form dispatch on ``|z conj(w)|``."""
    u = np.abs(np.asarray(z) * np.conj(np.asarray(w)))
    if np.all(u <= _SERIES_DISPATCH):
        return kernel_series(z, w, gp)
    return kernel_closed(z, w, gp)


def kernel_diagonal(z, gp):
    """``K(z, z) = Gamma(2g) |z|^(1-2g) I_(2g-1)(2|z|)``, equal to 1 at the origin."""
    gp = _gp(gp)
    r = np.abs(np.asarray(z, dtype=complex))
    nz = r > 0
    rr = np.where(nz, r, 1.0)
    val = math.gamma(2 * gp.gamma) * rr ** (1 - 2 * gp.gamma) * np.real(bessel_i(gp.nu, 2 * rr))
    out = np.where(nz, val, 1.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BergmanFunction:
    """An entire function together with a radial growth bound.

    ``|f(z)| <= scale * (1 + |z|)^degree * exp(rate * |z|)`` is declared by the
    caller and checked at every quadrature node.
    """

    evaluator: Callable
    scale: float = 1.0
    degree: float = 0.0
    rate: float = 0.0

    def __call__(self, z):
        return self.evaluator(z)

    def bound(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.scale * (1 + rho) ** self.degree * np.exp(self.rate * rho)


def basis_function(n: int, gp) -> BergmanFunction:
    gp = _gp(gp)
    return BergmanFunction(
        lambda z: basis_element(n, gp, z),
        scale=math.exp(-_log_basis_norm(n, gp)),
        degree=n,
    )


def kernel_function(w: complex, gp) -> BergmanFunction:
    """``z -> K(z, w)`` with the bound ``exp(2 sqrt(|z||w|)) <= e^(2|w|) e^(|z|/2)``."""
    gp = _gp(gp)
    return BergmanFunction(lambda z: kernel(z, w, gp), scale=math.exp(2 * abs(w)), rate=0.5)


def radial_cutoff(bounds: Sequence[BergmanFunction], gp, tol: float,
                  index: Index = "standard", minimum: float = MIN_RHO_MAX) -> float:
    """Smallest radius whose tail contribution is at most ``tol / 10``.

    For ``rho >= R`` the log-derivative of ``rho * bound(rho) * density(rho)``
    is at most ``A - 2 + (D + 2 gamma + |nu|)/R`` (from ``K_(nu+1) > K_nu``),
    so the tail is below ``2 pi R E(R) / kappa(R)``.
    """
    gp = _gp(gp)
    nu = abs(_order(gp, index))
    deg = max(f.degree for f in bounds) * 2
    rate = max(f.rate for f in bounds) * 2
    log_scale = max(2 * math.log(f.scale) for f in bounds)
    if rate >= 2:
        raise DomainError("growth rate too fast for the Bergman measure")
    for start in range(int(minimum), 20_000, 400):
        r = np.arange(start, start + 400, dtype=float)
        kappa = 2 - rate - (deg + 2 * gp.gamma + nu) / r
        log_e = log_scale + deg * np.log1p(r) + rate * r + _log_density(r, gp, index)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_tail = math.log(2 * math.pi) + np.log(r) + log_e - np.log(kappa)
        ok = (kappa > 0) & (log_tail <= math.log(tol / 10))
        if np.any(ok):
            return float(r[np.argmax(ok)])
    raise QuadratureFailure("no radial cutoff meets the tail bound")


def bergman_gram(funcs: Sequence[BergmanFunction], gp, spec: QuadratureSpec = BERGMAN_SPEC,
                 index: Index = "standard", others: Sequence[BergmanFunction] | None = None):
    """Matrix ``G[i, j] = <f_i, g_j>_gamma`` computed in one polar quadrature.

    ``others`` defaults to ``funcs``.
    """
    gp = _gp(gp)
    others = funcs if others is None else others
    rho_max = radial_cutoff(list(funcs) + list(others), gp, spec.tol, index)

    def integrand(rho, theta):
        z = rho * np.exp(1j * theta)
        dens = _density_on(rho, gp, index)
        fv = np.stack([np.broadcast_to(f(z), z.shape) for f in funcs])
        gv = np.conj(np.stack([np.broadcast_to(g(z), z.shape) for g in others]))
        return fv[:, None] * gv[None, :] * dens

    def envelope(rho):
        fb = np.max([f.bound(rho) for f in funcs], axis=0)
        gb = np.max([g.bound(rho) for g in others], axis=0)
        return fb * gb * _density_on(rho, gp, index)

    return integrate_disk_polar(integrand, rho_max, spec, envelope=envelope)


def bergman_inner(f: BergmanFunction, g: BergmanFunction, gp, spec: QuadratureSpec = BERGMAN_SPEC,
                  index: Index = "standard") -> complex:
    """``<f, g>_gamma = int f(z) conj(g(z)) dmu_gamma(z)`` by polar quadrature."""
    return complex(bergman_gram([f], gp, spec, index, others=[g])[0, 0])
