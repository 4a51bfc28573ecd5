"""Per-mode Volterra system for the two density modes.

With r = m_e / m_i and the electron-orientation memory kernel K built by
kernels.combined_kernel, each spatial mode k obeys

    phi_e(t) = a_e(t) + int_0^t K(t - tau) d(tau) dtau,
    phi_i(t) = a_i(t) - r int_0^t K(t - tau) d(tau) dtau,

where d = phi_i - phi_e is the density difference driving the field and the
forcings a_s come from free transport of the initial disturbances. Two exact
consequences shape both the scheme and its tests: the weighted combination
r phi_e + phi_i equals r a_e + a_i identically (the memory terms cancel), and
the difference closes into one scalar equation

    d(t) = (a_i - a_e)(t) - (1 + r) int_0^t K(t - tau) d(tau) dtau.

Discretization is the product-trapezoidal rule, implicit in the newest value;
K(0) = 0 for physical kernels, so the diagonal factor is exactly 1 and the
update is effectively explicit. The scheme is second-order in dt and
preserves the weighted-sum identity to rounding.

TheoremConstants packages the certified ingredients of the decay statement:
a kernel envelope (C0, lambda0), forcing envelopes (alpha, lambda for the
weighted sum and for the difference), the stability margin (kappa, Lambda),
and a claimed rate lambda_prime gated strictly below all of them.
theorem_bound turns those into explicit amplitude constants and checks the
resulting pointwise envelopes on a solved series.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .equilibria import SpeciesParams
from .kernels import DecayBound, fit_decay_bound, _as_callable
from .errors import ParameterError

_MAX_STEPS = 10**7


@dataclass(frozen=True)
class ModeForcing:
    """Forcing pair for one mode; a_e, a_i are callables of time,
    vectorized over arrays."""

    k: int
    a_e: Callable
    a_i: Callable


def make_forcing(k: int, pert_e, pert_i) -> ModeForcing:
    """Free transport turns a disturbance into a_s(t) = h~_s(k, k t)."""
    kk = int(k)

    def a_e(t):
        return np.asarray(pert_e.mode_transform(kk, kk * np.asarray(t, float)),
                          dtype=complex)

    def a_i(t):
        return np.asarray(pert_i.mode_transform(kk, kk * np.asarray(t, float)),
                          dtype=complex)

    return ModeForcing(kk, a_e, a_i)


@dataclass(frozen=True)
class ModeSeries:
    """Discrete density modes on the uniform grid t_n = n dt."""

    k: int
    dt: float
    phi_e: np.ndarray
    phi_i: np.ndarray

    def __post_init__(self):
        if len(self.phi_e) != len(self.phi_i):
            raise ParameterError("series length mismatch")

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.phi_e))

    @property
    def difference(self) -> np.ndarray:
        return self.phi_i - self.phi_e

    def weighted_sum(self, sp: SpeciesParams) -> np.ndarray:
        return sp.mass_ratio * self.phi_e + self.phi_i


def export_rows(series: ModeSeries, sp: SpeciesParams):
    """Column layout used by the CSV exporter (and handy in tests)."""
    t = series.times
    d = series.difference
    w = series.weighted_sum(sp)
    header = ["t", "re_phi_e", "im_phi_e", "re_phi_i", "im_phi_i",
              "abs_difference", "re_weighted_sum", "im_weighted_sum"]
    cols = np.column_stack([t, series.phi_e.real, series.phi_e.imag,
                            series.phi_i.real, series.phi_i.imag,
                            np.abs(d), w.real, w.imag])
    return header, cols


# -- scheme core -------------------------------------------------------------------

def _grid(T: float, dt: float) -> np.ndarray:
    if dt <= 0 or T <= 0:
        raise ParameterError("T and dt must be positive")
    n = int(round(T / dt))
    if n < 1:
        raise ParameterError("horizon shorter than one step")
    if n > _MAX_STEPS:
        raise ParameterError(f"{n} steps exceeds limit {_MAX_STEPS}")
    return dt * np.arange(n + 1)


def _volterra_scalar(kern_vals: np.ndarray, rhs: np.ndarray,
                     dt: float) -> np.ndarray:
    """Solve y = rhs + int K y by product trapezoid; implicit diagonal."""
    n_tot = len(rhs)
    diag = 1.0 - 0.5 * dt * kern_vals[0]
    if abs(diag) < 1e-14:
        raise ParameterError("degenerate implicit factor 1 - dt K(0)/2")
    y = np.zeros(n_tot, dtype=complex)
    y[0] = rhs[0] / diag
    rev = kern_vals[::-1]
    for n in range(1, n_tot):
        acc = 0.5 * kern_vals[n] * y[0]
        if n > 1:
            acc = acc + np.dot(rev[n_tot - n:n_tot - 1], y[1:n])
        y[n] = (rhs[n] + dt * acc) / diag
    return y


def _conv(kern_vals: np.ndarray, y: np.ndarray, dt: float) -> np.ndarray:
    """Product-trapezoid running convolution int_0^{t_n} K(t_n - tau) y."""
    n_tot = len(y)
    out = np.zeros(n_tot, dtype=complex)
    rev = kern_vals[::-1]
    for n in range(1, n_tot):
        acc = 0.5 * (kern_vals[n] * y[0] + kern_vals[0] * y[n])
        if n > 1:
            acc = acc + np.dot(rev[n_tot - n:n_tot - 1], y[1:n])
        out[n] = dt * acc
    return out


def solve_mode(k: int, f: ModeForcing, kern, sp: SpeciesParams,
               T: float, dt: float) -> ModeSeries:
    """March the coupled pair; K(0) = 0 makes every step explicit.

    kern is the electron-orientation kernel object (combined_kernel) or any
    callable of the lag with the same meaning.
    """
    times = _grid(T, dt)
    n_tot = len(times)
    kern_c = _as_callable(kern)
    kv = np.asarray(kern_c(times), dtype=complex)
    # the implicit diagonal factor is 1 + (1+r) dt K(0)/2; physical kernels
    # vanish at zero lag, which this scheme relies on
    assert abs(kv[0]) < 1e-13, "kernel must vanish at zero lag"
    ae = np.asarray(f.a_e(times), dtype=complex)
    ai = np.asarray(f.a_i(times), dtype=complex)
    r = sp.mass_ratio

    phi_e = np.empty(n_tot, dtype=complex)
    phi_i = np.empty(n_tot, dtype=complex)
    d = np.empty(n_tot, dtype=complex)
    phi_e[0], phi_i[0] = ae[0], ai[0]
    d[0] = ai[0] - ae[0]
    rev = kv[::-1]
    for n in range(1, n_tot):
        acc = 0.5 * kv[n] * d[0]
        if n > 1:
            acc = acc + np.dot(rev[n_tot - n:n_tot - 1], d[1:n])
        s = dt * acc
        phi_e[n] = ae[n] + s
        phi_i[n] = ai[n] - r * s
        d[n] = (ai[n] - ae[n]) - (1.0 + r) * s
    return ModeSeries(f.k, float(dt), phi_e, phi_i)


def solve_difference_mode(k: int, f: ModeForcing, kern, sp: SpeciesParams,
                          T: float, dt: float):
    """Scalar solve for d = phi_i - phi_e.

    Returns (difference, weighted_sum); the second output is the conserved
    combination r a_e + a_i, which the full system would carry unchanged.
    """
    times = _grid(T, dt)
    kern_c = _as_callable(kern)
    kv = np.asarray(kern_c(times), dtype=complex)
    ae = np.asarray(f.a_e(times), dtype=complex)
    ai = np.asarray(f.a_i(times), dtype=complex)
    r = sp.mass_ratio
    d = _volterra_scalar(-(1.0 + r) * kv, ai - ae, dt)
    return d, r * ae + ai


def solve_two_kernel_mode(k: int, f: ModeForcing, kern_e, kern_i,
                          T: float, dt: float) -> ModeSeries:
    """General pair with independent species kernels.

    phi_s = a_s + int K_s(t - tau) d(tau) dtau for both species, so the
    difference obeys a scalar equation with kernel K_i - K_e. No decay
    guarantee is asserted here; this path exists for kernels that are not
    proportional to each other.
    """
    times = _grid(T, dt)
    ke = np.asarray(_as_callable(kern_e)(times), dtype=complex)
    ki = np.asarray(_as_callable(kern_i)(times), dtype=complex)
    ae = np.asarray(f.a_e(times), dtype=complex)
    ai = np.asarray(f.a_i(times), dtype=complex)
    d = _volterra_scalar(ki - ke, ai - ae, dt)
    phi_e = ae + _conv(ke, d, dt)
    phi_i = ai + _conv(ki, d, dt)
    return ModeSeries(f.k, float(dt), phi_e, phi_i)


# -- theorem ingredients ------------------------------------------------------------

@dataclass(frozen=True)
class ForcingBounds:
    """Envelopes |r a_e + a_i| <= alpha_plus exp(-2 pi lambda_plus t) and
    |a_i - a_e| <= alpha_minus exp(-2 pi lambda_minus t); iterates as the
    4-tuple, full fit details live in bound_plus / bound_minus."""

    alpha_plus: float
    lambda_plus: float
    alpha_minus: float
    lambda_minus: float
    bound_plus: DecayBound = field(repr=False, default=None)
    bound_minus: DecayBound = field(repr=False, default=None)

    def __iter__(self):
        return iter((self.alpha_plus, self.lambda_plus,
                     self.alpha_minus, self.lambda_minus))


def fit_forcing_bounds(f: ModeForcing, sp: SpeciesParams,
                       t_max: float) -> ForcingBounds:
    """Fit exponential envelopes to the two forcing combinations, with the
    same protocol as the kernel decay fit."""
    r = sp.mass_ratio
    plus = fit_decay_bound(lambda t: r * f.a_e(t) + f.a_i(t), t_max=t_max)
    minus = fit_decay_bound(lambda t: f.a_i(t) - f.a_e(t), t_max=t_max)
    return ForcingBounds(plus.C0, plus.lambda0, minus.C0, minus.lambda0,
                         plus, minus)


@dataclass(frozen=True)
class TheoremConstants:
    C0: float
    lambda0: float
    alpha_plus: float
    lambda_plus: float
    alpha_minus: float
    lambda_minus: float
    kappa: float
    Lambda: float
    lambda_prime: float

    def __post_init__(self):
        for name in ("C0", "alpha_plus", "alpha_minus"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative")
        for name in ("lambda0", "lambda_plus", "lambda_minus", "Lambda"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")
        if not self.kappa > 0:
            raise ParameterError("kappa must be positive")
        if not self.lambda_prime < self.rate_cap:
            raise ParameterError(
                "lambda_prime must lie strictly below min(lambda_plus, "
                "lambda_minus, Lambda, lambda0)")

    @property
    def rate_cap(self) -> float:
        return min(self.lambda_plus, self.lambda_minus, self.Lambda,
                   self.lambda0)

    def to_json_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "C0", "lambda0", "alpha_plus", "lambda_plus", "alpha_minus",
            "lambda_minus", "kappa", "Lambda", "lambda_prime")}


def _amplitude_constants(c: TheoremConstants, r: float, l2_form: bool):
    """Explicit amplitude constants of the decay statement.

    The cross term couples the kernel envelope to the difference-forcing
    envelope through the margin. With the L2 form each envelope integral
    contributes 1/sqrt(4 pi (lambda - lambda')); the alternative form uses
    the plain integral 1/(2 pi (lambda - lambda')) instead.
    """
    def gap_factor(lam):
        gap = lam - c.lambda_prime
        if np.isinf(gap):
            return 0.0
        return 1.0 / np.sqrt(4.0 * np.pi * gap) if l2_form \
            else 1.0 / (2.0 * np.pi * gap)

    cross = ((1.0 + r) * c.C0 * gap_factor(c.lambda0)
             * c.alpha_minus * gap_factor(c.lambda_minus) / c.kappa)
    inner = c.alpha_minus + cross
    c_e = (c.alpha_plus + inner) / (1.0 + r)
    c_i = (c.alpha_plus + r * inner) / (1.0 + r)
    return c_e, c_i


@dataclass(frozen=True)
class TheoremCheck:
    """Unpacks as (C_e, C_i, holds); the *_corrected fields carry the
    variant with the plain-integral gap factor."""

    C_e: float
    C_i: float
    holds: bool
    C_e_corrected: float
    C_i_corrected: float
    holds_corrected: bool
    max_violation: float

    def __iter__(self):
        return iter((self.C_e, self.C_i, self.holds))

    def to_json_dict(self) -> dict:
        return {
            "C_e": self.C_e, "C_i": self.C_i, "holds": self.holds,
            "C_e_corrected": self.C_e_corrected,
            "C_i_corrected": self.C_i_corrected,
            "holds_corrected": self.holds_corrected,
            "max_violation": self.max_violation,
        }


def theorem_bound(series: ModeSeries, consts: TheoremConstants,
                  sp: SpeciesParams) -> TheoremCheck:
    """Check |phi_s(t)| <= C_s exp(-2 pi lambda' t) at every sample."""
    r = sp.mass_ratio
    t = series.times
    envelope = np.exp(-2.0 * np.pi * consts.lambda_prime * t)

    def check(c_e, c_i):
        viol = max(float(np.max(np.abs(series.phi_e) - c_e * envelope)),
                   float(np.max(np.abs(series.phi_i) - c_i * envelope)))
        return viol

    c_e, c_i = _amplitude_constants(consts, r, l2_form=True)
    c_e2, c_i2 = _amplitude_constants(consts, r, l2_form=False)
    v1 = check(c_e, c_i)
    v2 = check(c_e2, c_i2)
    return TheoremCheck(c_e, c_i, v1 <= 0.0, c_e2, c_i2, v2 <= 0.0, v1)
