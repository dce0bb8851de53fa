"""Verification suites: every identity checked against an independent oracle.

Each suite takes a :class:`GammaParam` and a tolerance for the
quadrature-backed checks and returns a list of :class:`VerificationReport`.
Special-function identities carry their own fixed tolerances.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .bergman import (
    BERGMAN_SPEC,
    GammaParam,
    basis_element,
    basis_function,
    bergman_gram,
    kernel_closed,
    kernel_function,
    kernel_series,
    monomial_norm_sq,
)
from .bessel import bessel_i, bessel_k
from .errors import DomainError
from .gamma import gamma as gamma_fn
from .hyper import CDHahnParams, cdhahn_genfun_lhs, cdhahn_genfun_rhs, cdhahn_poly
from .oscillator import (
    EigenExpansion,
    PhysicalConfig,
    alpha_pm,
    eigen_envelope,
    eigenfunction_eval,
    eigenfunctions,
    energy_level,
    gamma_from_physical,
    omega0_of_gamma,
    physical_config_for_gamma,
)
from .quadrature import QuadratureSpec, integrate_halfline
from .report import VerificationReport
from .transform import (
    TRANSFORM_SPEC,
    cs_closed,
    cs_norm_sq,
    cs_series,
    isometry_report,
    transform_apply_coeffs,
    transform_apply_sampled,
)

__all__ = ["SUITES", "OSCILLATOR_SUITES", "DEFAULT_TOL", "run_suites", "suite_names"]

DEFAULT_TOL = 1e-8
SEED = 20240917

GENFUN_X = (0.3, 1.0, 2.7)
GENFUN_XI = (1, -1, 2j, -2j, 1 + 0.5j, 3)
GENFUN_GAMMAS = (1.5, 2.0, 2.5)
CS_X = (0.3, 0.7, 1.3, 2.7)
CS_Z = (1, 1j, 1 + 2j, 2 - 1j, 3)
TRANSFORM_GRID = (1, 1 + 1j, -1.5 + 0.5j, 2j, 2 - 1j)
REPRODUCING_W = (0.5, -1 + 1j, 2j, 1.5 - 0.5j, -2.5)


def _case(inputs, expected, got, error) -> dict:
    return {"inputs": inputs, "expected": expected, "got": got, "error": float(error)}


def _report(check: str, params: dict, cases: list, tol: float, notes=(), expect_failure=False):
    err = max((c["error"] for c in cases), default=0.0)
    return VerificationReport(check, params, err, tol, cases, list(notes), expect_failure)


def _rel(a, b) -> float:
    scale = abs(b)
    return abs(a - b) / scale if scale > 0 else abs(a - b)


def _kernel_grid(radius: float = 5.0) -> np.ndarray:
    # 7 points in the disk of the given radius, varied moduli and phases
    mods = radius * np.array([0.0, 0.15, 0.3, 0.5, 0.7, 0.85, 1.0])
    phases = np.array([0.0, 0.9, 2.1, -2.6, 3.0, -0.7, 1.6])
    return mods * np.exp(1j * phases)


def _quad_spec(base: QuadratureSpec, tol: float) -> QuadratureSpec:
    return base.with_tol(max(min(base.tol, tol / 100), 1e-13))


# -- special functions ----------------------------------------------------------

def suite_gamma(gp: GammaParam, tol: float) -> list[VerificationReport]:
    rng = np.random.default_rng(SEED)
    z = rng.uniform(-15, 15, 1000) + 1j * rng.uniform(-15, 15, 1000)
    g0, g1 = gamma_fn(z), gamma_fn(z + 1)
    err = np.abs(g1 - z * g0) / np.abs(g1)
    worst = np.argsort(err)[-5:]
    cases = [_case({"z": z[i]}, g1[i], z[i] * g0[i], err[i]) for i in worst]
    cases.append(_case({"points": 1000}, 0.0, float(err.max()), err.max()))
    out = [_report("gamma.recurrence", {"box": 15, "points": 1000, "seed": SEED}, cases, 1e-12)]

    x = np.geomspace(1e-3, 30.0, 400)
    got = np.abs(gamma_fn(1j * x)) ** 2
    ref = math.pi / (x * np.sinh(math.pi * x))
    err = np.abs(got - ref) / ref
    cases = [_case({"x": x[i]}, ref[i], got[i], err[i]) for i in range(0, x.size, 40)]
    cases.append(_case({"x": x[int(err.argmax())]}, ref[err.argmax()], got[err.argmax()], err.max()))
    out.append(_report("gamma.imaginary_axis_modulus", {"x_range": [1e-3, 30]}, cases, 1e-12))
    return out


def suite_bessel(gp: GammaParam, tol: float) -> list[VerificationReport]:
    rho = np.linspace(0.1, 20.0, 200)
    got = bessel_k(0.5, rho)
    ref = np.sqrt(math.pi / (2 * rho)) * np.exp(-rho)
    err = np.abs(got - ref) / ref
    cases = [_case({"rho": rho[i]}, ref[i], got[i], err[i]) for i in range(0, rho.size, 20)]
    cases.append(_case({"rho": rho[err.argmax()]}, ref[err.argmax()], got[err.argmax()], err.max()))
    out = [_report("bessel.k_half_closed_form", {"rho_range": [0.1, 20]}, cases, 1e-10)]

    zeta = np.linspace(0.1, 10.0, 200)
    got = np.real(bessel_i(0.5, zeta))
    ref = np.sqrt(2 / (math.pi * zeta)) * np.sinh(zeta)
    err = np.abs(got - ref) / ref
    cases = [_case({"zeta": zeta[i]}, ref[i], got[i], err[i]) for i in range(0, zeta.size, 20)]
    cases.append(_case({"zeta": zeta[err.argmax()]}, ref[err.argmax()], got[err.argmax()], err.max()))
    out.append(_report("bessel.i_half_closed_form", {"zeta_range": [0.1, 10]}, cases, 1e-11))

    cases = []
    rho = np.array([0.05, 0.5, 1.0, 3.0, 10.0, 30.0])
    for nu in sorted({0.3, 1.0, gp.nu, 2.5, 7.25}):
        kp, km = bessel_k(nu, rho), bessel_k(-nu, rho)
        for r, a, b in zip(rho, kp, km):
            cases.append(_case({"nu": nu, "rho": r}, a, b, _rel(b, a)))
    out.append(_report("bessel.k_order_symmetry", {"nu": "0.3,1,2g-1,2.5,7.25"}, cases, 1e-11))

    # positivity on the same grid, error 1 for any violation
    cases = []
    for nu in (0.0, 0.5, gp.nu, 4.0):
        k = bessel_k(nu, rho)
        i = np.real(bessel_i(nu, rho))
        cases.append(_case({"nu": nu}, "positive", float(min(k.min(), i.min())), float(np.any(k <= 0) or np.any(i <= 0))))
    out.append(_report("bessel.positivity", {"rho": rho.tolist()}, cases, 0.0))
    return out


def suite_hyper(gp: GammaParam, tol: float) -> list[VerificationReport]:
    gammas = sorted(set(GENFUN_GAMMAS) | {gp.gamma})
    cases = []
    for g in gammas:
        p = CDHahnParams(g, g, 0.5)
        for x in GENFUN_X:
            for xi in GENFUN_XI:
                lhs = cdhahn_genfun_lhs(x, xi, p)
                rhs, n_cut = cdhahn_genfun_rhs(x, xi, p, tol=1e-13)
                cases.append(_case({"gamma": g, "x": x, "xi": xi, "N": n_cut}, lhs, rhs, _rel(rhs, lhs)))
    out = [_report("hyper.generating_function", {"gammas": gammas}, cases, 1e-10)]

    cases = []
    for a, b, c in ((gp.gamma, gp.gamma, 0.5), (0.7, 1.3, 0.25), (2.0, 0.5, 1.5)):
        for x in (0.0, 0.4, 1.9, 5.0):
            ref = (a + b) * (a + c) - a * a - x * x
            got = cdhahn_poly(1, x * x, (a, b, c))
            cases.append(_case({"abc": [a, b, c], "x": x}, ref, got, _rel(got, ref)))
    out.append(_report("hyper.cdhahn_degree_one", {}, cases, 1e-14))
    return out


# -- Bergman space --------------------------------------------------------------

def _orthonormality_cases(gram: np.ndarray) -> list[dict]:
    n = gram.shape[0]
    cases = []
    for i in range(n):
        for j in range(i, n):
            ref = 1.0 if i == j else 0.0
            cases.append(_case({"m": i, "n": j}, ref, gram[i, j], abs(gram[i, j] - ref)))
    return cases


def suite_bergman(gp: GammaParam, tol: float) -> list[VerificationReport]:
    spec = _quad_spec(BERGMAN_SPEC, tol)
    funcs = [basis_function(n, gp) for n in range(13)]
    gram = bergman_gram(funcs, gp, spec)
    out = [_report("bergman.orthonormality", {"gamma": gp.gamma, "n_max": 12}, _orthonormality_cases(gram), tol)]

    alt = bergman_gram(funcs, gp, spec, index="alternate")
    moved = gp.gamma != 0.5
    out.append(_report(
        "bergman.orthonormality_alternate_order",
        {"gamma": gp.gamma, "n_max": 12, "bessel_order": 0.5 - gp.gamma},
        _orthonormality_cases(alt),
        tol,
        notes=["measure with Bessel order 1/2-gamma; differs from 2*gamma-1 unless gamma = 1/2"],
        expect_failure=moved,
    ))

    cases = []
    for n in range(13):
        ref = monomial_norm_sq(n, gp, "alternate") / monomial_norm_sq(n, gp)
        cases.append(_case({"n": n}, ref, alt[n, n].real, _rel(alt[n, n].real, ref)))
    out.append(_report(
        "bergman.alternate_order_moments", {"gamma": gp.gamma}, cases, tol,
        notes=["the alternate-order diagonal follows the Bessel-K moment formula"],
    ))

    grid = _kernel_grid()
    cases = []
    for z in grid:
        for w in grid:
            s, c = kernel_series(z, w, gp), kernel_closed(z, w, gp)
            cases.append(_case({"z": z, "w": w}, s, c, _rel(c, s)))
    out.append(_report("bergman.kernel_closed_form", {"gamma": gp.gamma, "radius": 5}, cases, 1e-10))

    kfs = [kernel_function(w, gp) for w in REPRODUCING_W]
    rep = bergman_gram(funcs[:7], gp, spec, others=kfs)
    cases = []
    for n in range(7):
        for j, w in enumerate(REPRODUCING_W):
            ref = basis_element(n, gp, w)
            cases.append(_case({"n": n, "w": w}, ref, rep[n, j], abs(rep[n, j] - ref)))
    out.append(_report("bergman.reproducing_property", {"gamma": gp.gamma}, cases, tol))
    return out


# -- oscillator -----------------------------------------------------------------

def suite_oscillator(gp: GammaParam, tol: float) -> list[VerificationReport]:
    gp.require_oscillator()
    spec = _quad_spec(TRANSFORM_SPEC, tol)
    env = eigen_envelope(8, gp)

    def outer(x):
        p = eigenfunctions(8, gp, x)
        return p[:, None] * np.conj(p)[None, :]

    gram = integrate_halfline(outer, env * env, spec)
    out = [_report("oscillator.orthonormality", {"gamma": gp.gamma, "n_max": 8}, _orthonormality_cases(gram), tol)]

    rng = np.random.default_rng(SEED)
    cases, alt_cases = [], []
    for _ in range(20):
        m, c, hbar = np.exp(rng.uniform(-2, 2, 3))
        omega = float(np.exp(rng.uniform(-2, 2)))
        cfg = PhysicalConfig(m=m, omega=omega, g=m * c**4 / (8 * omega**2), hbar=hbar, c=c)
        g = gamma_from_physical(cfg)
        ratio = hbar * omega / (m * c * c)
        inputs = {"m": m, "omega": omega, "hbar": hbar, "c": c, "gamma": g.gamma}
        cases.append(_case(inputs, ratio, omega0_of_gamma(g), _rel(omega0_of_gamma(g), ratio)))
        alt = omega0_of_gamma(g, alternate=True)
        alt_cases.append(_case(inputs, ratio, alt, _rel(alt, ratio)))
    out.append(_report("oscillator.omega0_consistency", {"configs": 20, "seed": SEED}, cases, 1e-12))
    out.append(_report(
        "oscillator.omega0_alternate_form", {"configs": 20, "seed": SEED}, alt_cases, 1e-12,
        notes=["w0 = 1/(gamma (2 gamma - 1)) does not invert 2 gamma - 1 = sqrt(1 + 2/w0)"],
        expect_failure=True,
    ))

    cfg = physical_config_for_gamma(gp)
    ap = alpha_pm(cfg)
    cases = [_case({"which": "alpha_plus"}, gp.gamma, ap.alpha_plus, _rel(ap.alpha_plus, gp.gamma)),
             _case({"which": "alpha_minus"}, gp.gamma, ap.alpha_minus, _rel(ap.alpha_minus, gp.gamma))]
    for n in range(6):
        ref = 2 * n + 2 * gp.gamma
        got = energy_level(n, cfg) / (cfg.hbar * cfg.omega)
        cases.append(_case({"n": n}, ref, got, _rel(got, ref)))
    out.append(_report("oscillator.tuned_spectrum", {"gamma": gp.gamma}, cases, 1e-12))

    cases = [_case({"n": n, "x": 0.0}, 0.0, eigenfunction_eval(n, gp, 0.0), abs(eigenfunction_eval(n, gp, 0.0)))
             for n in range(9)]
    out.append(_report("oscillator.boundary_zero", {"gamma": gp.gamma}, cases, 0.0))
    return out


# -- transform ------------------------------------------------------------------

def suite_transform(gp: GammaParam, tol: float) -> list[VerificationReport]:
    gp.require_oscillator()
    spec = _quad_spec(TRANSFORM_SPEC, tol)
    cases = []
    for z in CS_Z:
        for x in CS_X:
            s, c = cs_series(x, z, gp), cs_closed(x, z, gp)
            cases.append(_case({"x": x, "z": z}, s, c, _rel(c, s)))
    out = [_report("transform.coherent_state_series_vs_closed", {"gamma": gp.gamma}, cases, 1e-9)]

    cases, half = [], []
    for z in CS_Z:
        v = cs_norm_sq(z, gp, spec=spec)
        cases.append(_case({"z": z}, 1.0, v, abs(v - 1)))
        h = cs_norm_sq(z, gp, sqrt2=False, spec=spec)
        half.append(_case({"z": z}, 0.5, h, abs(h - 0.5)))
    out.append(_report("transform.coherent_state_normalization", {"gamma": gp.gamma}, cases, tol))
    out.append(_report(
        "transform.coherent_state_without_sqrt2", {"gamma": gp.gamma}, half, tol,
        notes=["dropping sqrt(2) from the closed form halves the squared norm"],
    ))

    grid = np.array(TRANSFORM_GRID)
    cases = []
    for n in range(7):
        c = np.zeros(n + 1, complex)
        c[n] = 1
        got = transform_apply_sampled(EigenExpansion(gp, c), grid, gp, spec).values
        ref = basis_element(n, gp, grid)
        for z, a, b in zip(grid, ref, got):
            cases.append(_case({"n": n, "z": z}, a, b, _rel(b, a)))
    out.append(_report("transform.eigenstate_to_monomial", {"gamma": gp.gamma, "n_max": 6}, cases, tol))

    rng = np.random.default_rng(SEED)
    cases, path_cases = [], []
    expansions = []
    for k in range(20):
        size = int(rng.integers(1, 9))
        c = rng.normal(size=size) + 1j * rng.normal(size=size)
        e = EigenExpansion(gp, c / np.linalg.norm(c))
        expansions.append(e)
        rep = isometry_report(e, spec=spec)
        cases.append(_case({"index": k, "length": size}, rep.cases[0]["expected"], rep.cases[0]["got"], rep.max_abs_error))
    out.append(_report("transform.isometry", {"gamma": gp.gamma, "expansions": 20, "seed": SEED}, cases, tol))

    for k, e in enumerate(expansions[:4]):
        exact = transform_apply_coeffs(e, grid).values
        quad = transform_apply_sampled(e, grid, gp, spec).values
        for z, a, b in zip(grid, exact, quad):
            path_cases.append(_case({"index": k, "z": z}, a, b, abs(b - a)))
    out.append(_report("transform.sampled_vs_exact", {"gamma": gp.gamma}, path_cases, tol))

    a, b = 2j, 0.5 - 1.5j
    e1, e2 = expansions[0], expansions[1]
    size = max(e1.coefficients.size, e2.coefficients.size)
    c1 = np.pad(e1.coefficients, (0, size - e1.coefficients.size))
    c2 = np.pad(e2.coefficients, (0, size - e2.coefficients.size))
    mix = EigenExpansion(gp, a * c1 + b * c2)
    cases = []
    for label, apply in (
        ("exact", lambda e: transform_apply_coeffs(e, grid).values),
        ("sampled", lambda e: transform_apply_sampled(e, grid, gp, spec).values),
    ):
        lhs = apply(mix)
        rhs = np.conj(a) * apply(e1) + np.conj(b) * apply(e2)
        for z, u, v in zip(grid, rhs, lhs):
            cases.append(_case({"path": label, "z": z}, u, v, abs(v - u)))
    out.append(_report("transform.conjugate_linearity", {"a": a, "b": b}, cases, tol))
    return out


SUITES: dict[str, Callable[[GammaParam, float], list[VerificationReport]]] = {
    "gamma": suite_gamma,
    "bessel": suite_bessel,
    "hyper": suite_hyper,
    "bergman": suite_bergman,
    "oscillator": suite_oscillator,
    "transform": suite_transform,
}
OSCILLATOR_SUITES = frozenset({"oscillator", "transform"})


def suite_names(selector: str) -> list[str]:
    """Expand a suite selector (``all`` or one name) into suite names."""
    if selector == "all":
        return list(SUITES)
    if selector not in SUITES:
        raise DomainError(f"unknown suite {selector!r}")
    return [selector]


def run_suites(names, gp: GammaParam, tol: float = DEFAULT_TOL) -> list[VerificationReport]:
    """Run the named suites in order, after checking ``gamma`` fits all of them."""
    if OSCILLATOR_SUITES.intersection(names):
        gp.require_oscillator()
    reports = []
    for name in names:
        reports.extend(SUITES[name](gp, tol))
    return reports
