"""Eigendata of the relativistic pseudoharmonic oscillator.

In the tuned regime ``8 g w^2 = m c^4`` both spectral exponents equal
``gamma`` and the orthonormal eigenfunctions on ``L^2(R_+, dx)`` read

    phi_n(x) = c_n i^gamma Gamma(gamma + ix)^2 / Gamma(ix) w0^(ix) S_n(x^2; gamma, gamma, 1/2)

with ``w0 = 1 / (2 gamma (gamma - 1))``. Their squared modulus is

    |phi_n(x)|^2 = c_n^2 (x sinh(pi x) / pi) |Gamma(gamma + ix)|^4 S_n^2
                 = 1/2 c_n^2 w(x) S_n^2,

where ``w(x) = |Gamma(gamma+ix)^2 Gamma(1/2+ix) / Gamma(2ix)|^2 / (2 pi)`` is
the continuous dual Hahn weight (use ``|Gamma(1/2+ix)|^2 = pi / cosh(pi x)``
and ``|Gamma(2ix)|^2 = pi / (2x sinh(2 pi x))``). The dual Hahn norms
``n! Gamma(n+2g) Gamma(n+g+1/2)^2`` then fix ``c_n`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .bergman import GammaParam, _gp
from .errors import DomainError, TuningError
from .gamma import log_gamma
from .hyper import CDHahnParams, cdhahn_normalized
from .quadrature import DecayEnvelope, fit_envelope

__all__ = [
    "PhysicalConfig",
    "AlphaPair",
    "EigenExpansion",
    "alpha_pm",
    "energy_level",
    "gamma_from_physical",
    "omega0_of_gamma",
    "physical_config_for_gamma",
    "normalization_const",
    "eigen_prefactor",
    "eigenfunction_eval",
    "eigenfunctions",
    "eigen_envelope",
]

_TUNING_RTOL = 1e-12


@dataclass(frozen=True)
class PhysicalConfig:
    """Mass, frequency, coupling, reduced Planck constant and speed of light."""

    m: float
    omega: float
    g: float
    hbar: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if min(self.m, self.omega, self.hbar, self.c) <= 0:
            raise DomainError("m, omega, hbar and c must be positive")
        if self.g < 0:
            raise DomainError("coupling g must be nonnegative")

    @property
    def omega0(self) -> float:
        return self.hbar * self.omega / (self.m * self.c**2)

    @property
    def g0(self) -> float:
        return self.m * self.g / self.hbar**2

    @property
    def compton_wavelength(self) -> float:
        return self.hbar / (self.m * self.c)


class AlphaPair(NamedTuple):
    alpha_plus: float
    alpha_minus: float


def alpha_pm(cfg: PhysicalConfig) -> AlphaPair:
    """Spectral exponents ``alpha_+ >= alpha_-``.

    Raises ``DomainError`` when ``8 g0 w0^2 > 1`` (complex exponents).
    """
    w0 = cfg.omega0
    disc = 1.0 - 8.0 * cfg.g0 * w0 * w0
    if disc < -_TUNING_RTOL:
        raise DomainError(f"8 g0 w0^2 = {1 - disc:.6g} > 1 gives complex exponents")
    root = math.sqrt(max(disc, 0.0))
    plus = 0.5 + 0.5 * math.sqrt(1 + 2 / w0 * (1 + root))
    minus = 0.5 + 0.5 * math.sqrt(1 + 2 / w0 * (1 - root))
    return AlphaPair(plus, minus)


def energy_level(n: int, cfg: PhysicalConfig) -> float:
    """``hbar w (2n + alpha_+ + alpha_-)``."""
    if n < 0:
        raise DomainError("level index must be nonnegative")
    ap = alpha_pm(cfg)
    return cfg.hbar * cfg.omega * (2 * n + ap.alpha_plus + ap.alpha_minus)


def gamma_from_physical(cfg: PhysicalConfig) -> GammaParam:
    """``gamma`` with ``2 gamma - 1 = sqrt(1 + 2 m c^2 / (hbar w))`` for a tuned config."""
    target = cfg.m * cfg.c**4
    if abs(8 * cfg.g * cfg.omega**2 - target) > _TUNING_RTOL * target:
        raise TuningError("configuration is not tuned: 8 g w^2 != m c^4")
    ratio = cfg.m * cfg.c**2 / (cfg.hbar * cfg.omega)
    return GammaParam(0.5 * (1 + math.sqrt(1 + 2 * ratio)), "extended")


def omega0_of_gamma(gp, alternate: bool = False) -> float:
    """Reduced frequency ``w0 = 1 / (2 gamma (gamma - 1))`` in the tuned regime.

    Inverting ``2 gamma - 1 = sqrt(1 + 2 / w0)`` gives this form.
    ``alternate=True`` returns ``1 / (gamma (2 gamma - 1))`` instead, which
    disagrees with that inversion; it exists only for regression checks.
    """
    gp = _gp(gp)
    g = gp.gamma
    if g <= 1:
        raise DomainError(f"w0 is positive only for gamma > 1, got {g}")
    if alternate:
        return 1.0 / (g * (2 * g - 1))
    return 1.0 / (2 * g * (g - 1))


def physical_config_for_gamma(gp) -> PhysicalConfig:
    """A tuned configuration in units ``hbar = w = c = 1`` realising ``gamma``."""
    gp = _gp(gp)
    gp.require_oscillator()
    m = 2 * gp.gamma * (gp.gamma - 1)
    return PhysicalConfig(m=m, omega=1.0, g=m / 8.0)


def normalization_const(n: int, ap: AlphaPair) -> float:
    """``c_n = (n! Gamma(n+a+ + a-) Gamma(n+a+ + 1/2) Gamma(n+a- + 1/2) / 2)^(-1/2)``."""
    a, b = ap
    log_sq = (
        math.log(0.5)
        + math.lgamma(n + 1)
        + math.lgamma(n + a + b)
        + math.lgamma(n + a + 0.5)
        + math.lgamma(n + b + 0.5)
    )
    return math.exp(-0.5 * log_sq)


def _log_scaled_norm(n: int, g: float) -> float:
    # log of c_n (2g)_n (g+1/2)_n = sqrt(2) sqrt(Gamma(n+2g)/n!) / (Gamma(2g) Gamma(g+1/2))
    return (
        0.5 * math.log(2.0)
        + 0.5 * (math.lgamma(n + 2 * g) - math.lgamma(n + 1))
        - math.lgamma(2 * g)
        - math.lgamma(g + 0.5)
    )


def eigen_prefactor(gp, x, omega0: float | None = None):
    """``i^gamma Gamma(gamma + ix)^2 / Gamma(ix) w0^(ix)``, one exponential of log-gammas.

    Exactly zero at ``x = 0``.
    """
    gp = _gp(gp)
    gp.require_oscillator()
    w0 = omega0_of_gamma(gp) if omega0 is None else omega0
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError("eigenfunctions live on x >= 0")
    out = np.zeros(xa.shape, dtype=complex)
    pos = xa > 0
    if np.any(pos):
        xp = xa[pos]
        g = gp.gamma
        logv = (
            2 * log_gamma(g + 1j * xp)
            - log_gamma(1j * xp)
            + 0.5j * math.pi * g
            + 1j * xp * math.log(w0)
        )
        out[pos] = np.exp(logv)
    return out


def eigenfunctions(nmax: int, gp, x, omega0: float | None = None) -> np.ndarray:
    """``phi_0 .. phi_nmax`` at ``x``; shape ``(nmax + 1,) + x.shape``."""
    gp = _gp(gp)
    pre = eigen_prefactor(gp, x, omega0)
    xsq = np.asarray(x, dtype=float) ** 2
    params = CDHahnParams(gp.gamma, gp.gamma, 0.5)
    rows = [
        math.exp(_log_scaled_norm(n, gp.gamma)) * cdhahn_normalized(n, xsq, params) * pre
        for n in range(nmax + 1)
    ]
    return np.array(rows)


def eigenfunction_eval(n: int, gp, x, omega0: float | None = None):
    """Orthonormal eigenfunction ``phi_n(x)`` of the tuned oscillator."""
    if n < 0:
        raise DomainError("eigenfunction index must be nonnegative")
    gp = _gp(gp)
    pre = eigen_prefactor(gp, x, omega0)
    params = CDHahnParams(gp.gamma, gp.gamma, 0.5)
    s = cdhahn_normalized(n, np.asarray(x, dtype=float) ** 2, params)
    out = math.exp(_log_scaled_norm(n, gp.gamma)) * s * pre
    return complex(out) if np.ndim(out) == 0 else out


def eigen_envelope(nmax: int, gp) -> DecayEnvelope:
    """Fitted bound on ``max_{n <= nmax} |phi_n(x)|``.

    ``|phi_n(x)|`` behaves like ``x^(2g - 1/2 + 2n) exp(-pi x / 2)``; the scale is
    fitted on a grid well past the peak of the slowest profile.
    """
    gp = _gp(gp)
    deg = 2 * gp.gamma - 0.5 + 2 * nmax
    x_max = 4 * deg / math.pi + 30
    return fit_envelope(lambda x: eigenfunctions(nmax, gp, x), math.pi / 2, deg, x_max)


@dataclass
class EigenExpansion:
    """Finite expansion ``sum_n c_n phi_n`` over the oscillator eigenbasis."""

    gamma: GammaParam
    coefficients: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def __post_init__(self):
        self.gamma = _gp(self.gamma)
        self.coefficients = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))
        if self.coefficients.ndim != 1:
            raise DomainError("coefficients must be a flat vector")
        if not np.all(np.isfinite(self.coefficients)):
            raise DomainError("coefficients must be finite")

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def __call__(self, x):
        c = self.coefficients
        if c.size == 0:
            return np.zeros(np.shape(x), dtype=complex)
        phis = eigenfunctions(c.size - 1, self.gamma, x)
        return np.tensordot(c, phis, axes=1)

    def envelope(self) -> DecayEnvelope:
        c = self.coefficients
        if c.size == 0 or not np.any(c):
            return DecayEnvelope(rate=math.pi / 2, scale=0.0)
        env = eigen_envelope(c.size - 1, self.gamma)
        return DecayEnvelope(env.kind, env.rate, env.poly_degree, env.scale * float(np.sum(np.abs(c))))
