"""Stability of an equilibrium profile: real-axis criterion and strip margin.

Two complementary quantities decide whether mode k supports a growing
oscillation. The boundary function

    Z(k, omega) = w_hat(k) [ PV int f'(v)/(v - omega) dv - i pi f'(omega) ]

is the limit of the reweighted kernel transform as the growth rate tends to
zero from above. A profile is stable at mode k when, at every zero omega0 of
f', the real number (1 + m_e/m_i) w_hat(k) PV int f'(v)/(v - omega0) dv stays
below 1; the only way the dispersion function can reach 1 on the imaginary
boundary is at such a zero, where Z is real.

The margin scan quantifies the distance to instability on a whole strip of
candidate growth rates: kappa is the minimum of |(1 + m_e/m_i) D(xi) - 1|
over Re xi in [0, Lambda] and a grid of frequencies, where D is the transform
of the kernel as it enters the equation for the density difference (the
negative of the electron-orientation kernel). A root of the minimized
expression inside the strip is exactly a mode whose amplitude evolves like
exp(-2 pi Re(xi) t), so kappa > 0 certifies that no such slow mode exists
below rate Lambda.

The principal value is computed with the subtracted integrand
(f'(v) - f'(omega))/(v - omega) on an interval symmetric about omega, which
removes the singularity without one-sided truncation bias. For Gaussian
mixtures the same Cauchy integral is also available in closed form through
the Faddeeva function, including its analytic continuation across the real
axis; root finding in the analysis layer builds on that.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import wofz

from ._quad import panel_nodes
from .equilibria import EquilibriumProfile, SpeciesParams
from .potential import InteractionPotential
from .kernels import (ModeKernel, combined_kernel, fit_decay_bound,
                      laplace_grid, DecayBound)
from .errors import DivergenceError, ParameterError

_SQRT_PI = np.sqrt(np.pi)


# -- principal value machinery ---------------------------------------------------

def _min_sigma(profile: EquilibriumProfile) -> float:
    if profile.kind == "tabulated":
        return max(float(np.min(np.diff(profile.grid))) * 4.0, 1e-3)
    return min(s for _, _, s in profile.components)


def principal_value_integral(profile: EquilibriumProfile, omega: float) -> float:
    """PV int f'(v)/(v - omega) dv via the subtracted integrand.

    The integration interval is symmetric about omega so the subtraction term
    f'(omega)/(v - omega) integrates to zero exactly rather than leaving a
    truncation remainder.
    """
    omega = float(omega)
    radius = profile.support_radius() + abs(omega) + 5.0
    if profile.kind == "tabulated":
        # stay inside the table; symmetry about omega is kept by clipping both sides
        lo, hi = profile.grid[0], profile.grid[-1]
        radius = min(radius, min(omega - lo, hi - omega))
        if radius <= 0:
            raise ParameterError("omega outside tabulated profile range")
    npu = max(64, int(np.ceil(32.0 / _min_sigma(profile))))
    x, w = panel_nodes(omega - radius, omega + radius, nodes_per_unit=npu)
    dfp = profile.derivative(x) - profile.derivative(omega)
    dv = x - omega
    g = np.where(np.abs(dv) < 1e-12, profile.derivative(omega, order=2),
                 dfp / np.where(np.abs(dv) < 1e-12, 1.0, dv))
    return float(np.sum(w * g))


def dispersion_Z(k: int, omega: float, profile: EquilibriumProfile,
                 potential: InteractionPotential) -> complex:
    """Boundary dispersion function at real frequency omega."""
    pv = principal_value_integral(profile, omega)
    return potential.value(k) * (pv - 1j * np.pi * profile.derivative(omega))


def cauchy_integral_continued(profile: EquilibriumProfile, zeta):
    """G(zeta) = int f'(v)/(v - zeta) dv, continued from above the real axis.

    For Im zeta > 0 this is the plain integral; the Faddeeva expression
    extends it to an entire function of zeta. The upper half-plane is the
    native side because the kernel transform with weight exp(2 pi conj(xi) s)
    converges classically for Re xi < 0, which maps to Im zeta > 0 under
    zeta = -i conj(xi) / |k|; damped modes are then found by following the
    continuation into the lower half-plane. The choice is verified against
    direct quadrature of the transform in the tests. Gaussian mixtures only.
    """
    if profile.kind == "tabulated":
        raise ParameterError(
            "analytic continuation needs an analytic profile family")
    zeta = np.asarray(zeta, dtype=complex)
    out = np.zeros_like(zeta)
    for wgt, u, s in profile.components:
        zh = (zeta - u) / (np.sqrt(2.0) * s)
        z_up = 1j * _SQRT_PI * wofz(zh)
        out = out + wgt * (-1.0 / s**2) * (1.0 + zh * z_up)
    return out if out.ndim else complex(out)


# -- zeros of the derivative -----------------------------------------------------

def find_derivative_zeros(profile: EquilibriumProfile, v_range=None,
                          n_scan: int = 10_000) -> list[float]:
    """Zeros of f' located by a sign-change scan plus bisection."""
    if n_scan < 100:
        raise ParameterError("n_scan must be at least 100")
    if v_range is None:
        if profile.kind == "tabulated":
            v_range = (float(profile.grid[0]), float(profile.grid[-1]))
        else:
            r = profile.support_radius()
            v_range = (-r, r)
    lo, hi = map(float, v_range)
    x = np.linspace(lo, hi, n_scan)
    fp = np.asarray(profile.derivative(x))

    zeros: list[float] = []
    for i in range(n_scan - 1):
        a, b, fa, fb = x[i], x[i + 1], fp[i], fp[i + 1]
        if fa == 0.0:
            zeros.append(float(a))
            continue
        if fa * fb < 0.0:
            for _ in range(80):
                m = 0.5 * (a + b)
                fm = float(profile.derivative(m))
                if fm == 0.0 or (b - a) < 1e-12:
                    a = b = m
                    break
                if fa * fm < 0.0:
                    b, fb = m, fm
                else:
                    a, fa = m, fm
            zeros.append(0.5 * (a + b))
    if fp[-1] == 0.0:
        zeros.append(float(x[-1]))

    merged: list[float] = []
    for z in sorted(zeros):
        if not merged or abs(z - merged[-1]) > 1e-9:
            merged.append(z)
    return merged


# -- reports ----------------------------------------------------------------------

@dataclass(frozen=True)
class PenroseReport:
    k: int
    derivative_zeros: tuple
    criterion_values: tuple
    stable: bool
    kappa: float | None = None
    Lambda: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "derivative_zeros": list(self.derivative_zeros),
            "criterion_values": list(self.criterion_values),
            "stable": self.stable,
            "kappa": self.kappa,
            "Lambda": self.Lambda,
        }


def penrose_criterion(k: int, profile: EquilibriumProfile,
                      potential: InteractionPotential,
                      sp: SpeciesParams) -> PenroseReport:
    """Real-axis criterion: stable iff every value stays below 1."""
    factor = 1.0 + sp.mass_ratio
    zeros = find_derivative_zeros(profile)
    values = tuple(factor * potential.value(k)
                   * principal_value_integral(profile, z) for z in zeros)
    stable = all(v < 1.0 for v in values)
    return PenroseReport(k, tuple(zeros), values, stable)


@dataclass(frozen=True)
class MarginScan:
    """Result of one strip scan; kl holds the difference-orientation
    transform samples on the (re, omega) grid so factor variations can be
    reconstructed without recomputing quadratures."""

    kappa: float
    Lambda: float
    factor: float
    re_grid: np.ndarray
    om_grid: np.ndarray
    kl: np.ndarray
    argmin: tuple

    def values(self, factor: float | None = None) -> np.ndarray:
        f = self.factor if factor is None else factor
        return np.abs(f * self.kl - 1.0)


def default_omega_range(profile: EquilibriumProfile) -> tuple[float, float]:
    if profile.kind == "tabulated":
        r = profile.support_radius()
        return (-r, r)
    r = max(abs(u) + 10.0 * s for _, u, s in profile.components)
    return (-r, r)


def penrose_margin(k: int, profile: EquilibriumProfile,
                   potential: InteractionPotential, sp: SpeciesParams,
                   Lambda: float, re_steps: int = 6, om_range=None,
                   om_steps: int = 201, kern_tmax: float = 4.0,
                   factor: float | None = None, kern: ModeKernel | None = None,
                   bound: DecayBound | None = None) -> MarginScan:
    """kappa = min |factor * D(xi) - 1| over Re xi in [0, Lambda].

    D is the transform of the kernel in difference orientation, i.e. the
    negative of the electron-orientation kernel built by combined_kernel.
    The strip cap must sit strictly below the certified kernel decay rate,
    otherwise the reweighted transform does not converge.
    """
    if Lambda < 0:
        raise ParameterError("Lambda must be non-negative")
    if kern is None:
        kern = combined_kernel(k, profile, potential, sp)
    if bound is None:
        bound = fit_decay_bound(kern, t_max=kern_tmax)
    if not np.isinf(bound.lambda0) and Lambda >= bound.lambda0:
        raise DivergenceError(
            f"Lambda = {Lambda} not below certified kernel rate {bound.lambda0}")
    if factor is None:
        factor = 1.0 + sp.mass_ratio
    if om_range is None:
        om_range = default_omega_range(profile)

    re = np.linspace(0.0, Lambda, max(2, re_steps))
    om = np.linspace(om_range[0], om_range[1], max(2, om_steps))
    xis = re[:, None] + 1j * om[None, :]
    kl = -laplace_grid(kern, xis.ravel(), t_max=kern_tmax).reshape(xis.shape)
    vals = np.abs(factor * kl - 1.0)
    j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    return MarginScan(float(vals[j]), float(Lambda), float(factor),
                      re, om, kl, (int(j[0]), int(j[1])))


def penrose_margin_refined(k, profile, potential, sp, Lambda,
                           re_steps=6, om_range=None, om_steps=201,
                           kern_tmax=4.0, factor=None, rel_change=0.01,
                           max_doublings=5):
    """Double both grids until kappa moves by less than rel_change."""
    kern = combined_kernel(k, profile, potential, sp)
    bound = fit_decay_bound(kern, t_max=kern_tmax)
    scan = penrose_margin(k, profile, potential, sp, Lambda, re_steps,
                          om_range, om_steps, kern_tmax, factor, kern, bound)
    history = [scan.kappa]
    for _ in range(max_doublings):
        re_steps = 2 * re_steps - 1
        om_steps = 2 * om_steps - 1
        finer = penrose_margin(k, profile, potential, sp, Lambda, re_steps,
                               om_range, om_steps, kern_tmax, factor, kern,
                               bound)
        history.append(finer.kappa)
        prev = scan
        scan = finer
        if abs(finer.kappa - prev.kappa) <= rel_change * max(abs(prev.kappa),
                                                             1e-300):
            break
    return scan, history


def penrose_report(k: int, profile: EquilibriumProfile,
                   potential: InteractionPotential, sp: SpeciesParams,
                   Lambda: float, **margin_kwargs) -> tuple[PenroseReport, MarginScan]:
    """Criterion and refined margin in one bundle."""
    crit = penrose_criterion(k, profile, potential, sp)
    scan, _ = penrose_margin_refined(k, profile, potential, sp, Lambda,
                                     **margin_kwargs)
    report = PenroseReport(crit.k, crit.derivative_zeros,
                           crit.criterion_values, crit.stable,
                           kappa=scan.kappa, Lambda=scan.Lambda)
    return report, scan
