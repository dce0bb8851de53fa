"""Deterministic composite Gauss-Legendre quadrature.

Three integral shapes are covered: the half line (with a tail cut-off derived
from a declared decay envelope), a finite interval with doubly-exponential
decay at both ends (used for the MacDonald integral), and the complex plane in
polar coordinates. Node placement is fixed by the :class:`QuadratureSpec`, so
repeated runs produce bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Literal

import numpy as np

from .errors import DomainError, EnvelopeError, QuadratureFailure, RangeError

__all__ = [
    "QuadratureSpec",
    "DecayEnvelope",
    "gauss_legendre_rule",
    "composite_nodes",
    "integrate_interval",
    "integrate_halfline",
    "integrate_disk_polar",
    "fit_envelope",
]

MAX_RULE = 512


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls every integral in the package.

    Attributes
    ----------
    points_per_panel : int
        Initial Gauss-Legendre order per panel; doubled on refinement.
    panel_growth : float
        Ratio between consecutive panel widths (``1`` gives uniform panels).
    cutoff : float
        Minimum truncation point of the half line. The envelope may push the
        actual cut-off further out, never closer in.
    tol : float
        Refinement tolerance; the tail is bounded by ``tol / 10``.
    first_panel : float
        Width of the first panel.
    graded : bool
        Geometrically refine the first panel towards the origin, for
        integrands with a logarithmic or fractional-power singularity at 0.
    angular_points : int
        Initial trapezoid count in the angle for polar integrals.
    max_points : int
        Refinement limit for ``points_per_panel``.
    """

    points_per_panel: int = 16
    panel_growth: float = 1.0
    cutoff: float = 1.0
    tol: float = 1e-10
    first_panel: float = 1.0
    graded: bool = False
    angular_points: int = 32
    max_points: int = 128

    def __post_init__(self):
        if self.points_per_panel < 4:
            raise DomainError("points_per_panel must be >= 4")
        if self.panel_growth < 1:
            raise DomainError("panel_growth must be >= 1")
        if not (self.cutoff > 0 and self.tol > 0 and self.first_panel > 0):
            raise DomainError("cutoff, tol and first_panel must be positive")

    def with_tol(self, tol: float) -> "QuadratureSpec":
        return replace(self, tol=tol)


@dataclass(frozen=True)
class DecayEnvelope:
    """Upper bound ``scale * (1+x)^poly_degree * exp(-rate * x^p)`` for ``|f(x)|``.

    ``p = 1`` for ``kind="exponential-rate"`` and ``p = 2`` for
    ``kind="super-exponential"``.
    """

    kind: Literal["exponential-rate", "super-exponential"] = "exponential-rate"
    rate: float = 1.0
    poly_degree: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.rate <= 0:
            raise DomainError("envelope rate must be positive")
        if self.poly_degree < 0 or self.scale < 0:
            raise DomainError("envelope degree and scale must be nonnegative")
        if self.kind not in ("exponential-rate", "super-exponential"):
            raise DomainError(f"unknown envelope kind {self.kind!r}")

    def log(self, x):
        x = np.asarray(x, dtype=float)
        power = x if self.kind == "exponential-rate" else x * x
        with np.errstate(divide="ignore"):
            return np.log(self.scale) + self.poly_degree * np.log1p(x) - self.rate * power

    def __call__(self, x):
        return np.exp(self.log(x))

    def decay(self, x: float) -> float:
        """Lower bound on ``-d/dx log env`` over ``[x, inf)``."""
        slope = self.rate if self.kind == "exponential-rate" else 2 * self.rate * x
        return slope - self.poly_degree / (1 + x)

    def tail(self, x: float) -> float:
        """Upper bound on the integral of the envelope over ``[x, inf)``."""
        kappa = self.decay(x)
        if kappa <= 0:
            return math.inf
        return float(self(x)) / kappa

    def __mul__(self, other: "DecayEnvelope") -> "DecayEnvelope":
        if self.kind != other.kind:
            raise DomainError("cannot multiply envelopes of different kinds")
        return DecayEnvelope(
            self.kind,
            self.rate + other.rate,
            self.poly_degree + other.poly_degree,
            self.scale * other.scale,
        )


@lru_cache(maxsize=None)
def _gl_cached(n: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(1, n + 1)
    x = np.cos(math.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        p0, p1 = np.ones_like(x), x.copy()
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = n * (x * p1 - p0) / (x * x - 1)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    p0, p1 = np.ones_like(x), x.copy()
    for j in range(2, n + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = n * (x * p1 - p0) / (x * x - 1)
    w = 2.0 / ((1 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on ``[-1, 1]``.

    Nodes are found by Newton iteration on the Legendre three-term recurrence.
    Exact for polynomials of degree ``<= 2n - 1``.
    """
    if not (2 <= n <= MAX_RULE):
        raise RangeError(f"Gauss-Legendre order must be in [2, {MAX_RULE}], got {n}")
    return _gl_cached(int(n))


def composite_nodes(breaks, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of an ``n``-point rule on each panel between ``breaks``."""
    breaks = np.asarray(breaks, dtype=float)
    t, w = gauss_legendre_rule(n)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + hi) * 0.5 + half * t[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def _panel_breaks(start: float, stop: float, first: float, growth: float) -> list[float]:
    out = [start]
    width = first
    while out[-1] < stop:
        out.append(min(out[-1] + width, stop))
        width *= growth
    return out


def _graded_breaks(first: float, ratio: float = 0.15, floor: float = 1e-14) -> list[float]:
    out = [0.0]
    b = first
    fine = []
    while b > floor * first:
        fine.append(b)
        b *= ratio
    return out + fine[::-1]


def _converged(new, old, tol: float) -> bool:
    new, old = np.asarray(new), np.asarray(old)
    scale = np.maximum(1.0, np.abs(new))
    return bool(np.all(np.abs(new - old) <= tol * scale))


def integrate_interval(f: Callable, a: float, b: float, n_panels: int = 8, n: int = 16,
                       tol: float = 1e-12, max_panels: int = 4096):
    """Composite Gauss-Legendre on ``[a, b]``, doubling panels until stable."""
    old = None
    panels = n_panels
    while panels <= max_panels:
        x, w = composite_nodes(np.linspace(a, b, panels + 1), n)
        val = np.sum(np.asarray(f(x)) * w, axis=-1)
        if old is not None and _converged(val, old, tol):
            return val
        old, panels = val, panels * 2
    raise QuadratureFailure(f"interval quadrature on [{a}, {b}] did not converge")


def _halfline_cutoff(env: DecayEnvelope, spec: QuadratureSpec) -> float:
    x = spec.cutoff
    step = spec.first_panel
    for _ in range(100_000):
        if env.tail(x) <= spec.tol / 10:
            return x
        x += step
        step *= spec.panel_growth
    raise QuadratureFailure("no half-line cutoff satisfies the envelope tail bound")


def _check_envelope(values, bound, where: str) -> None:
    mag = np.abs(values)
    if mag.ndim > 1:
        mag = mag.reshape(-1, mag.shape[-1]).max(axis=0)
    # small absolute slack for rounding of values that are ~0
    bad = mag > bound * (1 + 1e-12) + 1e-300
    if np.any(bad):
        i = int(np.argmax(bad))
        raise EnvelopeError(f"integrand exceeds its envelope at {where}[{i}]: {mag[i]:.3e} > {bound[i]:.3e}")


def integrate_halfline(f: Callable, env: DecayEnvelope, spec: QuadratureSpec = QuadratureSpec()):
    """Integrate ``f`` over ``(0, inf)``.

    Composite Gauss-Legendre over panels of geometrically growing width up to
    a cut-off ``X`` where the envelope tail is at most ``spec.tol / 10``. The
    order per panel doubles until two successive results differ by at most
    ``spec.tol`` (relative to ``max(1, |I|)``).

    ``f`` takes an array of nodes and returns values along the last axis, so a
    vector of integrands may be integrated in one pass.

    Raises
    ------
    EnvelopeError
        If ``|f|`` exceeds ``env`` at any node.
    QuadratureFailure
        If refinement reaches ``spec.max_points`` without converging.
    """
    cut = _halfline_cutoff(env, spec)
    breaks = _panel_breaks(0.0, cut, spec.first_panel, spec.panel_growth)
    if spec.graded:
        breaks = _graded_breaks(breaks[1]) + breaks[2:]
    n = spec.points_per_panel
    old = None
    while n <= spec.max_points:
        x, w = composite_nodes(breaks, n)
        vals = np.asarray(f(x))
        _check_envelope(vals, env(x), "x")
        val = np.sum(vals * w, axis=-1)
        if old is not None and _converged(val, old, spec.tol):
            return val
        old, n = val, 2 * n
    raise QuadratureFailure(f"half-line quadrature did not converge up to {spec.max_points} points/panel")


def integrate_disk_polar(g: Callable, rho_max: float, spec: QuadratureSpec = QuadratureSpec(),
                         envelope: Callable | None = None):
    """Integrate ``g(rho, theta) rho drho dtheta`` over the disk ``rho <= rho_max``.

    Trapezoid rule in the angle (exact for trigonometric polynomials of degree
    below the point count) times composite Gauss-Legendre in the radius. Both
    orders double until two refinements agree to ``spec.tol``.

    ``g`` is called with ``rho`` of shape ``(Nr, 1)`` and ``theta`` of shape
    ``(1, Nt)`` and may return extra leading axes. ``envelope(rho)``, if given,
    bounds ``|g|`` and is checked at every node.
    """
    if rho_max <= 0:
        raise DomainError("rho_max must be positive")
    breaks = _panel_breaks(0.0, rho_max, spec.first_panel, spec.panel_growth)
    if spec.graded:
        breaks = _graded_breaks(breaks[1]) + breaks[2:]
    n, m = spec.points_per_panel, spec.angular_points
    old = None
    while n <= spec.max_points:
        r, wr = composite_nodes(breaks, n)
        theta = 2 * math.pi * np.arange(m) / m
        vals = np.asarray(g(r[:, None], theta[None, :]))
        if envelope is not None:
            _check_envelope(np.abs(vals).max(axis=-1), np.asarray(envelope(r)), "rho")
        radial = np.sum(vals, axis=-1) * (2 * math.pi / m)
        val = np.sum(radial * (wr * r), axis=-1)
        if old is not None and _converged(val, old, spec.tol):
            return val
        old, n, m = val, 2 * n, 2 * m
    raise QuadratureFailure(f"polar quadrature did not converge up to {spec.max_points} points/panel")


def fit_envelope(f: Callable, rate: float, poly_degree: float, x_max: float,
                 margin: float = 4.0, samples: int = 4000) -> DecayEnvelope:
    """Exponential-rate envelope whose scale is fitted to ``|f|`` on ``(0, x_max]``.

    The scale is ``margin`` times the largest observed ratio of ``|f|`` to the
    unit-scale profile. The profile's rate must be no faster than the true
    decay of ``f``; the integrators re-check the bound at every node.
    """
    x = np.linspace(x_max / samples, x_max, samples)
    prof = DecayEnvelope("exponential-rate", rate, poly_degree, 1.0)
    mag = np.abs(np.asarray(f(x)))
    if mag.ndim > 1:
        mag = mag.reshape(-1, mag.shape[-1]).max(axis=0)
    ratio = float(np.max(mag / prof(x)))
    return replace(prof, scale=max(ratio, 1e-300) * margin)
