"""Tests for the composite Gauss-Legendre integrators."""

import math

import numpy as np
import pytest

from idxf.errors import DomainError, EnvelopeError, QuadratureFailure, RangeError
from idxf.quadrature import (
    DecayEnvelope,
    QuadratureSpec,
    composite_nodes,
    fit_envelope,
    gauss_legendre_rule,
    integrate_disk_polar,
    integrate_halfline,
    integrate_interval,
)


@pytest.mark.parametrize("n", [2, 5, 16, 64, 200])
def test_gauss_legendre_matches_numpy(n):
    x, w = gauss_legendre_rule(n)
    xr, wr = np.polynomial.legendre.leggauss(n)
    assert np.allclose(x, xr, atol=1e-14)
    assert np.allclose(w, wr, atol=1e-14)


@pytest.mark.parametrize("n", [3, 8, 20])
def test_gauss_legendre_exact_degree(n):
    x, w = gauss_legendre_rule(n)
    for k in range(2 * n):
        ref = 0.0 if k % 2 else 2.0 / (k + 1)
        assert np.dot(w, x**k) == pytest.approx(ref, abs=1e-14)


@pytest.mark.parametrize("n", [1, 513])
def test_gauss_legendre_range(n):
    with pytest.raises(RangeError):
        gauss_legendre_rule(n)


def test_composite_nodes_total_weight():
    x, w = composite_nodes([0.0, 0.5, 2.0, 3.0], 7)
    assert w.sum() == pytest.approx(3.0, rel=1e-15)
    assert x.min() > 0 and x.max() < 3


def test_integrate_interval():
    assert integrate_interval(np.cos, 0.0, math.pi / 2) == pytest.approx(1.0, rel=1e-14)


def test_halfline_exponential():
    env = DecayEnvelope(rate=1.0)
    assert integrate_halfline(lambda x: np.exp(-x), env) == pytest.approx(1.0, abs=1e-10)


def test_halfline_vector_integrand():
    env = DecayEnvelope(rate=1.0, poly_degree=3)
    got = integrate_halfline(lambda x: np.stack([x**k * np.exp(-x) for k in range(4)]), env)
    assert np.allclose(got, [1, 1, 2, 6], atol=1e-9)


def test_halfline_super_exponential():
    env = DecayEnvelope("super-exponential", rate=1.0)
    got = integrate_halfline(lambda x: np.exp(-x * x), env)
    assert got == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-10)


def test_halfline_graded_log_singularity():
    # int_0^inf x log(x) e^-x dx = Gamma'(2) = 1 - Euler gamma
    spec = QuadratureSpec(graded=True, tol=1e-12)
    env = DecayEnvelope(rate=0.5, scale=1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        got = integrate_halfline(lambda x: x * np.log(x) * np.exp(-x), env, spec)
    assert got == pytest.approx(1 - np.euler_gamma, abs=1e-11)


def test_envelope_violation_raises():
    env = DecayEnvelope(rate=2.0, scale=0.5)
    with pytest.raises(EnvelopeError):
        integrate_halfline(lambda x: np.exp(-x), env)


def test_halfline_refinement_limit():
    spec = QuadratureSpec(points_per_panel=4, max_points=8, tol=1e-14)
    env = DecayEnvelope(rate=0.01, scale=2.0)
    with pytest.raises(QuadratureFailure):
        integrate_halfline(lambda x: np.cos(40 * x) * np.exp(-0.01 * x), env, spec)


def test_disk_area_and_gaussian():
    spec = QuadratureSpec(tol=1e-12)
    assert integrate_disk_polar(lambda r, t: np.ones(np.broadcast(r, t).shape), 1.0, spec) == pytest.approx(math.pi)
    got = integrate_disk_polar(lambda r, t: r**2 * np.exp(-r**2) * np.ones_like(t), 12.0, spec)
    assert got == pytest.approx(math.pi, rel=1e-11)


def test_disk_angular_orthogonality():
    spec = QuadratureSpec(tol=1e-12)
    got = integrate_disk_polar(lambda r, t: np.exp(3j * t) * np.exp(-r), 30.0, spec)
    assert abs(got) < 1e-13


def test_envelope_algebra():
    a = DecayEnvelope(rate=1.0, poly_degree=2, scale=3.0)
    b = DecayEnvelope(rate=0.5, poly_degree=1, scale=2.0)
    c = a * b
    assert (c.rate, c.poly_degree, c.scale) == (1.5, 3, 6.0)
    assert c(2.0) == pytest.approx(a(2.0) * b(2.0))
    assert a.tail(100.0) >= 3 * 101**2 * math.exp(-100) / 1.0
    with pytest.raises(DomainError):
        a * DecayEnvelope("super-exponential")


def test_envelope_validation():
    with pytest.raises(DomainError):
        DecayEnvelope(rate=0.0)
    with pytest.raises(DomainError):
        DecayEnvelope(scale=-1.0)
    with pytest.raises(DomainError):
        DecayEnvelope(kind="linear")


def test_fit_envelope_bounds_samples():
    f = lambda x: x**3 * np.exp(-x)  # noqa: E731
    env = fit_envelope(f, 0.9, 3, 60.0)
    x = np.linspace(0.01, 60, 5000)
    assert np.all(f(x) <= env(x))


def test_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(points_per_panel=2)
    with pytest.raises(DomainError):
        QuadratureSpec(tol=0)
    assert QuadratureSpec().with_tol(1e-6).tol == 1e-6
