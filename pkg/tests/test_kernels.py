"""Memory kernels, certified decay bounds, one-sided transforms."""

import numpy as np
import pytest
from scipy.integrate import quad

from landau2s import (SpeciesParams, make_maxwellian, coulomb_potential,
                      electron_kernel, ion_kernel, combined_kernel,
                      kernel_combined, fit_decay_bound, laplace_transform,
                      laplace_grid, DomainError, ModeError,
                      NoDecayBoundError, DivergenceError)

SP = SpeciesParams(m_e=1.0, m_i=1836.0)
MX = make_maxwellian(1.0)
COUL = coulomb_potential(8)


def test_kernel_vanishes_at_zero_lag():
    kern = combined_kernel(1, MX, COUL, SP)
    assert kern.evaluate(0.0) == 0.0


def test_kernel_closed_form_at_unit_lag():
    # (e/m_e) 4 pi^2 w_hat(1) fbar(1) k^2 s at s = 1
    kern = combined_kernel(1, MX, COUL, SP)
    expected = 4.0 * np.pi**2 * np.exp(-2.0 * np.pi**2)
    assert kern.evaluate(1.0) == pytest.approx(expected, rel=1e-14)
    assert kernel_combined(1, MX, COUL, SP, 1.0) == pytest.approx(
        expected, rel=1e-14)


def test_ion_kernel_ratio():
    ke = electron_kernel(2, MX, COUL, SP)
    ki = ion_kernel(2, MX, COUL, SP)
    s = np.linspace(0.0, 3.0, 61)
    np.testing.assert_allclose(np.asarray(ki.evaluate(s)),
                               -SP.mass_ratio * np.asarray(ke.evaluate(s)),
                               rtol=0.0, atol=1e-18)


def test_kernel_species_identity():
    # K_e(s) + (m_i/m_e) K_i(s) = 0 to machine precision
    ke = electron_kernel(1, MX, COUL, SP)
    ki = ion_kernel(1, MX, COUL, SP)
    s = np.linspace(0.0, 4.0, 81)
    ke_vals = np.asarray(ke.evaluate(s))
    resid = ke_vals + (SP.m_i / SP.m_e) * np.asarray(ki.evaluate(s))
    assert np.max(np.abs(resid)) < 4.0 * np.finfo(float).eps * np.max(
        np.abs(ke_vals))


def test_kernel_domain_guards():
    kern = combined_kernel(1, MX, COUL, SP)
    with pytest.raises(DomainError):
        kern.evaluate(-0.5)
    with pytest.raises(ModeError):
        combined_kernel(0, MX, COUL, SP)


def test_kernel_decays_for_analytic_profile():
    kern = combined_kernel(1, MX, COUL, SP)
    assert abs(kern.evaluate(5.0)) < 1e-40


# -- decay bounds ---------------------------------------------------------------


def test_decay_bound_holds_at_fresh_samples():
    kern = combined_kernel(1, MX, COUL, SP)
    bound = fit_decay_bound(kern, t_max=4.0)
    rng = np.random.default_rng(17)
    t = rng.uniform(0.0, 4.0, size=1000)
    mags = np.abs(np.asarray(kern.evaluate(t)))
    assert np.all(mags <= bound.envelope(t) * (1.0 + 1e-12))


def test_decay_bound_tight_somewhere():
    kern = combined_kernel(1, MX, COUL, SP)
    bound = fit_decay_bound(kern, t_max=4.0)
    t = np.linspace(0.0, 4.0, 4001)
    mags = np.abs(np.asarray(kern.evaluate(t)))
    ratio = mags / bound.envelope(t)
    assert np.max(ratio) > 0.99


def test_decay_bound_scaling():
    kern = combined_kernel(1, MX, COUL, SP)
    doubled = lambda t: 2.0 * np.asarray(kern.evaluate(t))
    b1 = fit_decay_bound(kern, t_max=4.0)
    b2 = fit_decay_bound(doubled, t_max=4.0)
    assert b2.lambda0 == b1.lambda0
    assert b2.C0 == pytest.approx(2.0 * b1.C0, rel=1e-9)


def test_flat_kernel_has_no_bound():
    with pytest.raises(NoDecayBoundError):
        fit_decay_bound(lambda t: np.ones_like(np.asarray(t, float)),
                        t_max=4.0)


def test_zero_kernel_bound_sentinel():
    bound = fit_decay_bound(lambda t: np.zeros_like(np.asarray(t, float)),
                            t_max=4.0)
    assert bound.C0 == 0.0
    assert np.isinf(bound.lambda0)
    assert bound.super_exponential


def test_pure_exponential_rate_recovered():
    bound = fit_decay_bound(lambda t: np.exp(-2.0 * np.pi * np.asarray(t)),
                            t_max=4.0)
    assert 0.9 <= bound.lambda0 <= 1.0
    assert bound.C0 == pytest.approx(1.0, rel=1e-9)
    assert not bound.super_exponential


def test_gaussian_kernel_hits_grid_cap_with_flag():
    kern = combined_kernel(1, MX, COUL, SP)
    bound = fit_decay_bound(kern, t_max=4.0)
    assert bound.super_exponential
    assert bound.lambda0 == pytest.approx(10.0)


# -- laplace transform -----------------------------------------------------------


def test_laplace_zero_kernel():
    res = laplace_transform(lambda t: np.zeros_like(np.asarray(t, float)),
                            0.3 + 1.0j, t_max=5.0)
    assert res.value == 0.0


def test_laplace_closed_form_exponential():
    # int_0^inf e^{-2 pi s} ds = 1/(2 pi) at xi = 0
    res = laplace_transform(lambda t: np.exp(-2.0 * np.pi * np.asarray(t)),
                            0.0, t_max=10.0)
    assert res.value == pytest.approx(1.0 / (2.0 * np.pi), abs=1e-8)


def test_laplace_matches_adaptive_quadrature():
    kern = combined_kernel(1, MX, COUL, SP)
    xi = 0.1 + 0.5j
    w = 2.0 * np.pi * np.conj(xi)

    def integrand_re(s):
        return (np.exp(w * s) * kern.evaluate(s)).real

    def integrand_im(s):
        return (np.exp(w * s) * kern.evaluate(s)).imag

    re, _ = quad(integrand_re, 0.0, 6.0, epsabs=1e-13, limit=200)
    im, _ = quad(integrand_im, 0.0, 6.0, epsabs=1e-13, limit=200)
    res = laplace_transform(kern, xi, t_max=6.0)
    assert res.value.real == pytest.approx(re, abs=1e-7)
    assert res.value.imag == pytest.approx(im, abs=1e-7)


def test_laplace_divergence_guard():
    kern = combined_kernel(1, MX, COUL, SP)
    bound = fit_decay_bound(kern, t_max=4.0)
    with pytest.raises(DivergenceError):
        laplace_transform(kern, complex(bound.lambda0 + 1.0), bound=bound)


def test_laplace_linearity():
    f = lambda t: np.exp(-2.0 * np.pi * np.asarray(t))
    g = lambda t: np.asarray(t) * np.exp(-4.0 * np.pi * np.asarray(t))
    both = lambda t: f(t) + g(t)
    xi = 0.05 + 0.3j
    vf = laplace_transform(f, xi, t_max=8.0).value
    vg = laplace_transform(g, xi, t_max=8.0).value
    vb = laplace_transform(both, xi, t_max=8.0).value
    assert vb == pytest.approx(vf + vg, abs=1e-12)


def test_laplace_truncation_honesty():
    kern = combined_kernel(1, MX, COUL, SP)
    bound = fit_decay_bound(kern, t_max=4.0)
    xi = 0.2 + 0.4j
    full = laplace_transform(kern, xi, t_max=4.0, bound=bound)
    half = laplace_transform(kern, xi, t_max=2.0, bound=bound)
    assert abs(full.value - half.value) <= half.tail_bound + 1e-15


def test_laplace_grid_matches_pointwise():
    kern = combined_kernel(1, MX, COUL, SP)
    xis = np.array([0.1 + 0.3j, 0.4 - 1.2j, 0.0 + 0.0j])
    grid_vals = laplace_grid(kern, xis, t_max=5.0)
    for xi, gv in zip(xis, grid_vals):
        assert gv == pytest.approx(
            laplace_transform(kern, xi, t_max=5.0).value, abs=1e-12)
