"""Coherent states of the tuned oscillator and the index 2F2 transform.

The coherent state labelled by ``z`` is

    <x|z> = K(z, z)^(-1/2) sum_n psi_n(z) phi_n(x),

with ``psi_n`` the orthonormal Bergman monomials and ``phi_n`` the oscillator
eigenfunctions. The generating function of the continuous dual Hahn
polynomials sums the series in closed form:

    sum_n psi_n(z) phi_n(x) = sqrt(2) i^g w0^(ix) Gamma(g+ix)^2 / Gamma(ix)
        * e^z 2F2(g+ix, g-ix; 2g, g+1/2; -z) / (sqrt(Gamma(2g)) Gamma(g+1/2)).

The transform is ``F[phi](z) = int_0^inf T(x, z) conj(phi(x)) dx`` where ``T``
is the sum above. It maps ``phi_n`` to ``psi_n`` and is conjugate-linear in
``phi``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .bergman import (
    BERGMAN_SPEC,
    BergmanFunction,
    GammaParam,
    _gp,
    _log_basis_norm,
    basis_element,
    bergman_gram,
    kernel_diagonal,
)
from .errors import DomainError, EnvelopeError, NoConvergence
from .hyper import CDHahnParams, normalized_bound, pfq_series
from .oscillator import EigenExpansion, eigen_prefactor, eigenfunctions
from .quadrature import DecayEnvelope, QuadratureSpec, _halfline_cutoff, fit_envelope, integrate_halfline
from .report import VerificationReport

__all__ = [
    "MAX_LABEL_ABS",
    "TRANSFORM_SPEC",
    "CoherentStateLabel",
    "SampledFunction",
    "TransformResult",
    "transform_kernel",
    "kernel_envelope",
    "cs_closed",
    "cs_series",
    "cs_series_order",
    "cs_norm_sq",
    "transform_apply_sampled",
    "transform_apply_coeffs",
    "expansion_image",
    "isometry_report",
]

#: Largest ``|z|`` in the validated evaluation box.
MAX_LABEL_ABS = 25.0
TRANSFORM_SPEC = QuadratureSpec(points_per_panel=16, tol=1e-10)
_SERIES_RTOL = 1e-13
_SERIES_MAX_ORDER = 500
_CHUNK = 8


@dataclass(frozen=True)
class CoherentStateLabel:
    """Point ``z`` of the label space together with ``gamma > 1``."""

    z: complex
    gamma: GammaParam

    def __post_init__(self):
        object.__setattr__(self, "gamma", _gp(self.gamma))
        object.__setattr__(self, "z", complex(self.z))
        self.gamma.require_oscillator()
        if not np.isfinite(self.z) or abs(self.z) > MAX_LABEL_ABS:
            raise DomainError(f"|z| must be at most {MAX_LABEL_ABS}")


def _check_labels(z) -> np.ndarray:
    zz = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(zz)) or np.any(np.abs(zz) > MAX_LABEL_ABS):
        raise DomainError(f"labels must be finite with |z| <= {MAX_LABEL_ABS}")
    return zz


def _log_phi0_const(g: float) -> float:
    # log of c_0 = sqrt(2) / (sqrt(Gamma(2g)) Gamma(g + 1/2))
    return 0.5 * math.log(2.0) - 0.5 * math.lgamma(2 * g) - math.lgamma(g + 0.5)


def transform_kernel(x, z, gp, sqrt2: bool = True, omega0: float | None = None):
    """``T(x, z) = sum_n psi_n(z) phi_n(x)`` in closed form.

    ``x`` and ``z`` broadcast. ``sqrt2=False`` drops the factor ``sqrt(2)``
    and reproduces a normalization that is too small by one half.
    """
    gp = _gp(gp)
    gp.require_oscillator()
    zz = _check_labels(z)
    xa = np.asarray(x, dtype=float)
    xb, zb = np.broadcast_arrays(xa, zz)
    g = gp.gamma
    pre = eigen_prefactor(gp, xb, omega0)
    hyp = pfq_series([g + 1j * xb, g - 1j * xb], [2 * g, g + 0.5], -zb)
    log_c = _log_phi0_const(g) - (0.0 if sqrt2 else 0.5 * math.log(2.0))
    out = math.exp(log_c) * pre * np.exp(zb) * hyp
    return complex(out) if np.ndim(out) == 0 else np.asarray(out)


def cs_closed(x, z, gp, sqrt2: bool = True, omega0: float | None = None):
    """Coherent state ``<x|z>`` from the closed form.

    ``sqrt2=False`` evaluates the variant without ``sqrt(2)`` whose squared
    norm is 1/2. Equals ``phi_0(x)`` at ``z = 0`` and vanishes at ``x = 0``.
    """
    gp = _gp(gp)
    t = transform_kernel(x, z, gp, sqrt2=sqrt2, omega0=omega0)
    out = t / np.sqrt(kernel_diagonal(z, gp))
    return complex(out) if np.ndim(out) == 0 else out


def _coeff_order(z: complex, g: float, sqrt_k: float) -> int:
    # smallest N with |z|^(N+1) / sqrt((N+1)! (2g)_(N+1)) < tol sqrt(K(z, z))
    a = abs(z)
    if a == 0:
        return 0
    target = math.log(_SERIES_RTOL * sqrt_k)
    for n in range(_SERIES_MAX_ORDER):
        m = n + 1
        log_c = m * math.log(a) - 0.5 * (math.lgamma(m + 1) + math.lgamma(2 * g + m) - math.lgamma(2 * g))
        if log_c < target:
            return n
    raise NoConvergence("coherent-state series needs too many terms")


def _pointwise_tail(n_cut: int, z: complex, gp: GammaParam, x: np.ndarray) -> np.ndarray:
    # |psi_n(z) phi_n(x)| <= c_0 P(x) |prefactor(x)| (2|z|)^n / n!
    g = gp.gamma
    y = 2 * abs(z)
    if y == 0:
        return np.zeros(x.shape)
    m = n_cut + 1
    if m + 1 <= y:
        return np.full(x.shape, np.inf)
    log_t = _log_phi0_const(g) + m * math.log(y) - math.lgamma(m + 1) - math.log1p(-y / (m + 1))
    big_p = normalized_bound(x, CDHahnParams(g, g, 0.5))
    return math.exp(log_t) * big_p * np.abs(eigen_prefactor(gp, x))


def cs_series_order(x, z, gp) -> int:
    """Truncation index for :func:`cs_series`.

    Starts from the coefficient ratio test and grows until the pointwise bound
    ``|psi_n(z) phi_n(x)| <= c_0 P(x) |prefactor| (2|z|)^n / n!`` makes the tail negligible at
    every requested ``x``.
    """
    gp = _gp(gp)
    gp.require_oscillator()
    z = complex(_check_labels(z))
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    sqrt_k = math.sqrt(kernel_diagonal(z, gp))
    n_cut = _coeff_order(z, gp.gamma, sqrt_k)
    scale = np.abs(eigen_prefactor(gp, xa)) * math.exp(_log_phi0_const(gp.gamma)) * sqrt_k
    while n_cut < _SERIES_MAX_ORDER:
        tail = _pointwise_tail(n_cut, z, gp, xa)
        if np.all(tail <= _SERIES_RTOL * np.maximum(scale, 1e-300)):
            return n_cut
        n_cut += 1
    raise NoConvergence("coherent-state series needs too many terms")


def cs_series(x, z, gp, N: int | None = None):
    """Coherent state ``<x|z>`` summed over the eigenbasis up to index ``N``."""
    gp = _gp(gp)
    gp.require_oscillator()
    z = complex(_check_labels(z))
    if N is None:
        N = cs_series_order(x, z, gp)
    if N < 0:
        raise DomainError("truncation index must be nonnegative")
    phis = eigenfunctions(N, gp, x)
    coef = np.array([basis_element(n, gp, z) for n in range(N + 1)])
    out = np.tensordot(coef, phis, axes=1) / math.sqrt(kernel_diagonal(z, gp))
    return complex(out) if np.ndim(out) == 0 else out


def kernel_envelope(z, gp, margin: float = 4.0) -> DecayEnvelope:
    """Fitted bound on ``max_z |T(x, z)|`` over the labels ``z``.

    ``|T(x, z)|`` decays like ``x^(2g-1/2) exp(-pi x/2 + O((x^2 |z|)^(1/3)))``.
    The envelope uses the slower rate ``pi/4`` and is fitted far enough out
    that the cube-root correction has been overtaken.
    """
    gp = _gp(gp)
    zz = np.atleast_1d(_check_labels(z)).ravel()
    zmax = float(np.max(np.abs(zz))) if zz.size else 0.0
    x_max = 40.0 + 20.0 * zmax
    deg = 2 * gp.gamma - 0.5

    def mags(x):
        return np.abs(transform_kernel(x[None, :], zz[:, None], gp))

    return fit_envelope(mags, math.pi / 4, deg, x_max, margin=margin)


def cs_norm_sq(z, gp, sqrt2: bool = True, spec: QuadratureSpec = TRANSFORM_SPEC) -> float:
    """``int_0^inf |<x|z>|^2 dx`` by half-line quadrature."""
    gp = _gp(gp)
    z = complex(_check_labels(z))
    k = kernel_diagonal(z, gp)
    env = kernel_envelope(z, gp)
    env = env * env
    env = DecayEnvelope(env.kind, env.rate, env.poly_degree, env.scale / k)
    return float(integrate_halfline(lambda x: np.abs(cs_closed(x, z, gp, sqrt2)) ** 2, env, spec))


@dataclass
class SampledFunction:
    """Function on ``(0, X]`` given by samples plus a declared decay envelope.

    Values between samples come from a cubic spline in the real and imaginary
    parts. Requests beyond the last sample are refused.
    """

    x: np.ndarray
    values: np.ndarray
    decay: DecayEnvelope
    _spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.x.ndim != 1 or self.x.shape != self.values.shape or self.x.size < 4:
            raise DomainError("need at least 4 samples with matching x and values")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.values))):
            raise DomainError("samples must be finite")
        if self.x[0] < 0 or np.any(np.diff(self.x) <= 0):
            raise DomainError("sample abscissae must be nonnegative and strictly increasing")
        if np.any(np.abs(self.values) > self.decay(self.x) * (1 + 1e-12)):
            raise EnvelopeError("samples exceed their declared envelope")
        xs, vs = self.x, self.values
        if xs[0] > 0:
            # eigenbasis functions vanish at the origin; anchor the spline there
            xs, vs = np.concatenate([[0.0], xs]), np.concatenate([[0.0], vs])
        self._spline = CubicSpline(xs, np.stack([vs.real, vs.imag], axis=-1))

    @property
    def support_end(self) -> float:
        return float(self.x[-1])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x > self.support_end * (1 + 1e-12)):
            raise EnvelopeError(f"evaluation beyond the last sample at x = {self.support_end}")
        v = self._spline(x)
        return v[..., 0] + 1j * v[..., 1]

    def envelope(self) -> DecayEnvelope:
        return self.decay


@dataclass
class TransformResult:
    """Transform values on a label grid, in request order."""

    z: np.ndarray
    values: np.ndarray
    gamma: GammaParam
    source: str
    linear: bool = False

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise NoConvergence("transform produced non-finite values")

    def rows(self) -> list[tuple[float, float, float, float]]:
        return [(z.real, z.imag, f.real, f.imag) for z, f in zip(self.z, self.values)]


def _max_threads() -> int:
    try:
        return max(1, int(os.environ.get("IDXF_MAX_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn: Callable, chunks: Sequence) -> list:
    workers = min(_max_threads(), len(chunks))
    if workers <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # Executor.map yields in submission order
        return list(pool.map(fn, chunks))


def _phi_envelope(phi, envelope: DecayEnvelope | None) -> DecayEnvelope:
    if envelope is not None:
        return envelope
    if hasattr(phi, "envelope"):
        return phi.envelope()
    raise DomainError("a decay envelope for phi is required")


def transform_apply_sampled(phi: Callable, grid, gp, spec: QuadratureSpec = TRANSFORM_SPEC,
                            envelope: DecayEnvelope | None = None,
                            linear: bool = False) -> TransformResult:
    """``F[phi](z) = int_0^inf T(x, z) conj(phi(x)) dx`` by half-line quadrature.

    Parameters
    ----------
    phi : callable
        Function of ``x >= 0``. Its envelope comes from ``envelope`` or from
        ``phi.envelope()``.
    grid : array_like of complex
        Labels, each with ``|z| <= MAX_LABEL_ABS``.
    linear : bool
        Return ``conj(F[phi])`` instead, the linear variant.

    Raises
    ------
    EnvelopeError
        If the integrand exceeds its bound, or a sampled ``phi`` ends before
        the quadrature cut-off.
    """
    gp = _gp(gp)
    gp.require_oscillator()
    zz = np.atleast_1d(_check_labels(grid)).ravel()
    phi_env = _phi_envelope(phi, envelope)
    if phi_env.scale == 0:
        return TransformResult(zz, np.zeros(zz.shape, complex), gp, _describe(phi), linear)

    def run(chunk: np.ndarray) -> np.ndarray:
        env = kernel_envelope(chunk, gp) * phi_env
        end = getattr(phi, "support_end", None)
        if end is not None and _halfline_cutoff(env, spec) > end:
            raise EnvelopeError(
                f"samples end at x = {end} before the tail bound is met "
                f"(needs {_halfline_cutoff(env, spec):.3g})"
            )

        def integrand(x):
            t = transform_kernel(x[None, :], chunk[:, None], gp)
            return t * np.conj(np.asarray(phi(x)))[None, :]

        return integrate_halfline(integrand, env, spec)

    chunks = [zz[i:i + _CHUNK] for i in range(0, zz.size, _CHUNK)]
    vals = np.concatenate(_ordered_map(run, chunks))
    if linear:
        vals = np.conj(vals)
    return TransformResult(zz, vals, gp, _describe(phi), linear)


def _describe(phi) -> str:
    if isinstance(phi, EigenExpansion):
        return f"expansion[{phi.coefficients.size}]"
    if isinstance(phi, SampledFunction):
        return f"samples[{phi.x.size}]"
    return type(phi).__name__


def transform_apply_coeffs(expansion: EigenExpansion, grid, linear: bool = False) -> TransformResult:
    """``F(z) = sum_n conj(c_n) psi_n(z)`` for ``phi = sum_n c_n phi_n``."""
    expansion.gamma.require_oscillator()
    zz = np.atleast_1d(_check_labels(grid)).ravel()
    vals = _coeff_image(expansion, zz)
    if linear:
        vals = np.conj(vals)
    return TransformResult(zz, vals, expansion.gamma, _describe(expansion), linear)


def _coeff_image(expansion: EigenExpansion, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    vals = np.zeros(z.shape, dtype=complex)
    for n, c in enumerate(expansion.coefficients):
        if c != 0:
            vals += np.conj(c) * basis_element(n, expansion.gamma, z)
    return vals


def expansion_image(expansion: EigenExpansion) -> BergmanFunction:
    """``F[phi]`` as an entire function with a growth bound."""
    gp = expansion.gamma
    c = expansion.coefficients
    if c.size == 0:
        return BergmanFunction(lambda z: np.zeros(np.shape(z), complex), scale=0.0)
    scale = float(np.sum(np.abs(c)) * max(math.exp(-_log_basis_norm(n, gp)) for n in range(c.size)))

    return BergmanFunction(lambda z: _coeff_image(expansion, z), scale=max(scale, 1e-300), degree=c.size - 1)


def isometry_report(expansion: EigenExpansion, gp=None, spec: QuadratureSpec = TRANSFORM_SPEC,
                    tol: float = 1e-6) -> VerificationReport:
    """Compare ``||phi||^2`` on the half-line with ``||F[phi]||^2`` in the Bergman space.

    Both norms are computed by quadrature: the first against the eigenfunction
    envelope, the second with the polar Bergman rule.
    """
    gp = expansion.gamma if gp is None else _gp(gp)
    if gp != expansion.gamma:
        raise DomainError("expansion and report use different gamma")
    gp.require_oscillator()
    if expansion.norm_sq == 0:
        phi_sq = f_sq = 0.0
    else:
        env = expansion.envelope()
        phi_sq = float(integrate_halfline(lambda x: np.abs(expansion(x)) ** 2, env * env, spec))
        image = expansion_image(expansion)
        f_sq = float(bergman_gram([image], gp, BERGMAN_SPEC)[0, 0].real)
    gap = abs(f_sq - phi_sq)
    return VerificationReport(
        check="isometry",
        parameters={"gamma": gp.gamma, "coefficients": [[c.real, c.imag] for c in expansion.coefficients]},
        max_abs_error=gap,
        tolerance=tol,
        cases=[{"inputs": {"norm_phi_sq": phi_sq}, "expected": phi_sq, "got": f_sq, "error": gap}],
    )

