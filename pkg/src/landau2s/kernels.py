"""Memory kernels of the per-mode density equations.

Linearizing the two-species dynamics around a spatially uniform equilibrium
and following characteristics, the density mode rho_hat_s(k, t) of species s
satisfies a closed convolution identity. Under the transform conventions used
here (integer spatial modes, velocity transform with kernel
exp(-2 pi i eta v)), differentiating the velocity profile brings down
2 pi i eta and the field mode carries -2 pi i k w_hat(k) e, so the memory
kernel picks up the prefactor (-2 pi i k)(2 pi i k s) = 4 pi^2 k^2 s:

    K_e(s) = +(e/m_e) 4 pi^2 w_hat(k) fbar_e(k s) k^2 s      (electrons)
    K_i(s) = -(e/m_i) 4 pi^2 w_hat(k) fbar_i(k s) k^2 s      (ions)

so K_e(s) + (m_i/m_e) K_i(s) = 0 when both species share one profile. The
electron equation gains memory with a plus sign,

    rho_e(t) = a_e(t) + int_0^t K_e(t - tau) [rho_i - rho_e](tau) dtau,

and the ion equation with the opposite sign and mass weight. Solvers and
stability scans that work with the density difference use the kernel with
the sign it takes in that equation, which is the negative of K_e; helpers
below always state which orientation they expect.

Decay bounds certify |K(t)| <= C0 exp(-2 pi lambda0 t) from samples, and the
one-sided transform

    K^L(xi) = int_0^inf exp(2 pi conj(xi) s) K(s) ds

converges for Re xi < lambda0 (the weight grows like exp(2 pi Re(xi) s); the
conjugation makes K^L(lambda + i omega) the Fourier transform in omega of the
exponentially reweighted kernel).
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from ._quad import panel_nodes
from .equilibria import EquilibriumProfile, SpeciesParams
from .potential import InteractionPotential
from .errors import (DomainError, ModeError, NoDecayBoundError,
                     DivergenceError, ParameterError)

KernelLike = Union["ModeKernel", Callable]


@dataclass(frozen=True)
class ModeKernel:
    """Memory kernel of one spatial mode.

    species_scale is the signed charge-to-mass prefactor (+e/m_e for the
    electron kernel, -e/m_i for the ion kernel). evaluate accepts scalar or
    array lags and vanishes identically at lag 0.
    """

    k: int
    species_scale: float
    w_hat_k: float
    profile: EquilibriumProfile

    def evaluate(self, lag):
        lag_arr = np.asarray(lag, dtype=float)
        if np.any(lag_arr < 0):
            raise DomainError("kernel lag must be non-negative")
        out = (self.species_scale * 4.0 * np.pi**2 * self.w_hat_k
               * self.profile.fourier(self.k * lag_arr)
               * self.k**2 * lag_arr)
        return out if np.ndim(lag) else complex(out)

    __call__ = evaluate


def electron_kernel(k: int, profile: EquilibriumProfile,
                    potential: InteractionPotential,
                    sp: SpeciesParams) -> ModeKernel:
    if k == 0:
        raise ModeError("no kernel at the neutral mode k = 0")
    return ModeKernel(k, sp.e_charge / sp.m_e, potential.value(k), profile)


def ion_kernel(k: int, profile: EquilibriumProfile,
               potential: InteractionPotential,
               sp: SpeciesParams) -> ModeKernel:
    if k == 0:
        raise ModeError("no kernel at the neutral mode k = 0")
    return ModeKernel(k, -sp.e_charge / sp.m_i, potential.value(k), profile)


def combined_kernel(k: int, profile: EquilibriumProfile,
                    potential: InteractionPotential,
                    sp: SpeciesParams) -> ModeKernel:
    """Kernel of the shared-profile reduction, electron orientation.

    Equal profiles collapse the two species kernels onto one function: the
    ion kernel is -(m_e/m_i) times this one. The difference equation
    d = (a_i - a_e) - (1 + m_e/m_i) * (K conv d) uses this kernel directly;
    anything phrased for the opposite orientation must negate it.
    """
    return electron_kernel(k, profile, potential, sp)


def kernel_combined(k: int, profile: EquilibriumProfile,
                    potential: InteractionPotential, sp: SpeciesParams,
                    lag) -> complex:
    """Point evaluation of combined_kernel."""
    return combined_kernel(k, profile, potential, sp).evaluate(lag)


def _as_callable(kern: KernelLike) -> Callable:
    return kern.evaluate if isinstance(kern, ModeKernel) else kern


# -- decay bounds --------------------------------------------------------------

_RATE_GRID = np.geomspace(1e-3, 10.0, 200)


@dataclass(frozen=True)
class DecayBound:
    """Certified envelope |K(t)| <= C0 exp(-2 pi lambda0 t) on [0, t_max].

    super_exponential marks signals that beat every rate on the search grid;
    lambda0 is then the grid cap, not an estimate of the true decay. A zero
    signal gets C0 = 0 and lambda0 = inf.
    """

    C0: float
    lambda0: float
    t_max: float
    super_exponential: bool = False

    def envelope(self, t):
        if np.isinf(self.lambda0):
            return np.zeros_like(np.asarray(t, dtype=float))
        return self.C0 * np.exp(-2.0 * np.pi * self.lambda0 * np.asarray(t))


def fit_decay_bound(kern: KernelLike, t_max: float, samples: int = 512,
                    rate_grid=None) -> DecayBound:
    """Largest grid rate whose reweighted signal peaks away from t_max.

    For each candidate rate lambda the function |K(t)| exp(2 pi lambda t) is
    sampled on [0, t_max]; a rate is admissible when the maximum is not
    attained at the right endpoint (a signal still growing there gives no
    honest extrapolation). C0 is the refined maximum at the chosen rate, so
    the bound touches the signal and holds at every sample by construction.
    """
    if not t_max > 0:
        raise ParameterError("t_max must be positive")
    if samples < 16:
        raise ParameterError("need at least 16 samples")
    rates = _RATE_GRID if rate_grid is None else np.asarray(rate_grid, float)
    f = _as_callable(kern)
    t = np.linspace(0.0, t_max, samples)
    mag = np.abs(np.asarray(f(t), dtype=complex))
    if not np.any(mag > 0):
        return DecayBound(0.0, np.inf, t_max, super_exponential=True)

    # all reweighting happens in log space: exp(2 pi * 10 * t_max) overflows
    # for long horizons while log magnitudes stay comfortably finite
    with np.errstate(divide="ignore"):
        log_mag = np.log(mag)

    best = None
    for lam in rates[::-1]:
        log_w = log_mag + 2.0 * np.pi * lam * t
        if int(np.argmax(log_w)) < samples - 1:
            best = lam
            break
    if best is None:
        raise NoDecayBoundError(
            "signal does not decay exponentially at any grid rate")

    # refine the peak so the certified C0 is the continuum maximum
    dense_t = np.linspace(0.0, t_max, 4 * samples)
    with np.errstate(divide="ignore"):
        dense_w = np.log(np.abs(np.asarray(f(dense_t), dtype=complex))) \
            + 2.0 * np.pi * best * dense_t
    j = int(np.argmax(dense_w))
    lo = dense_t[max(j - 1, 0)]
    hi = dense_t[min(j + 1, dense_t.size - 1)]
    log_c0 = dense_w[j]

    def neg_log_w(s):
        m = abs(complex(np.asarray(f(s), dtype=complex)))
        if m == 0.0:
            return np.inf
        return -(np.log(m) + 2.0 * np.pi * best * s)

    if hi > lo:
        res = minimize_scalar(neg_log_w, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        log_c0 = max(log_c0, -float(res.fun))
    return DecayBound(float(np.exp(log_c0)), float(best), t_max,
                      super_exponential=bool(best == rates[-1]))


# -- one-sided transform --------------------------------------------------------

class LaplaceResult(NamedTuple):
    value: complex
    tail_bound: float


def laplace_transform(kern: KernelLike, xi: complex, t_max: float | None = None,
                      bound: DecayBound | None = None,
                      nodes_per_unit: int = 64) -> LaplaceResult:
    """Truncated transform int_0^t_max exp(2 pi conj(xi) s) K(s) ds.

    When a decay bound is supplied the truncation error is certified:
    tail <= C0 exp(-2 pi (lambda0 - Re xi) t_max) / (2 pi (lambda0 - Re xi)),
    and requests with Re xi >= lambda0 are refused since the full integral
    does not converge under the certified envelope. Without a bound the
    caller must pick t_max and the tail is reported as nan.
    """
    f = _as_callable(kern)
    xi = complex(xi)
    if bound is not None:
        if not np.isinf(bound.lambda0) and xi.real >= bound.lambda0:
            raise DivergenceError(
                f"Re xi = {xi.real} not below certified rate {bound.lambda0}")
        if t_max is None:
            if bound.C0 == 0.0:
                return LaplaceResult(0.0 + 0.0j, 0.0)
            gap = bound.lambda0 - xi.real if not np.isinf(bound.lambda0) else 1.0
            # push the certified tail under 1e-12 relative to C0
            t_max = max(bound.t_max,
                        np.log(max(bound.C0, 1.0) / 1e-12) / (2 * np.pi * gap))
    if t_max is None:
        raise ParameterError("t_max required when no decay bound is given")

    x, w = panel_nodes(0.0, float(t_max), nodes_per_unit)
    kv = np.asarray(f(x), dtype=complex)
    val = complex(np.sum(w * np.exp(2.0 * np.pi * np.conj(xi) * x) * kv))

    tail = float("nan")
    if bound is not None:
        if np.isinf(bound.lambda0) or bound.C0 == 0.0:
            tail = 0.0
        else:
            gap = bound.lambda0 - xi.real
            tail = bound.C0 * np.exp(-2 * np.pi * gap * t_max) / (2 * np.pi * gap)
    return LaplaceResult(val, tail)


def laplace_grid(kern: KernelLike, xis, t_max: float,
                 nodes_per_unit: int = 64) -> np.ndarray:
    """Transform on an array of xi values, sharing one set of kernel samples."""
    f = _as_callable(kern)
    xis = np.asarray(xis, dtype=complex)
    x, w = panel_nodes(0.0, float(t_max), nodes_per_unit)
    kv = np.asarray(f(x), dtype=complex) * w
    weights = np.exp(2.0 * np.pi * np.conj(xis)[..., None] * x)
    return weights @ kv
