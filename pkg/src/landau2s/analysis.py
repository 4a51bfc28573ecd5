"""Decay-rate extraction and cross-solver comparison.

Rates are always reported in the normalization |s(t)| ~ C exp(-2 pi rate t),
matching the kernel and forcing envelopes elsewhere in the package. An
oscillatory signal is fitted through the logarithms of its envelope peaks; a
signal without enough peaks is treated as monotone and fitted through the
logarithm of every positive sample in the window. By default the first tenth
of the horizon is dropped: early samples mix transients into what is an
asymptotic statement.

dispersion_root searches for a complex xi with (1 + m_e/m_i) D(xi) = 1,
where D is the transform of the difference-orientation kernel, evaluated in
closed form through the continued Cauchy integral of the equilibrium
derivative (see penrose.cauchy_integral_continued for the branch choice and
its verification). Under this convention a root at Re(xi) = lambda > 0 is a
mode whose amplitude decays like exp(-2 pi lambda t), so the predicted decay
rate is Re(xi*); roots come in conjugate pairs for real-valued kernels. The
iteration is a plain two-dimensional Newton method on (Re xi, Im xi) with a
finite-difference Jacobian, which stays valid even though D depends on xi
through conj(xi) and is therefore not complex-differentiable in xi.
"""

from dataclasses import dataclass

import numpy as np

from .equilibria import EquilibriumProfile, SpeciesParams
from .potential import InteractionPotential
from .penrose import cauchy_integral_continued
from .errors import (ParameterError, RangeError, NoRootError,
                     InsufficientDataError)


@dataclass(frozen=True)
class DecayFit:
    """Fitted envelope |s(t)| ~ amplitude * exp(-2 pi rate * t)."""

    rate: float
    amplitude: float
    residual: float
    window: tuple
    method: str
    n_points: int

    def to_json_dict(self) -> dict:
        return {"rate": self.rate, "amplitude": self.amplitude,
                "residual": self.residual, "window": list(self.window),
                "method": self.method, "n_points": self.n_points}


def default_window(times) -> tuple:
    t0, t1 = float(times[0]), float(times[-1])
    return (t0 + 0.1 * (t1 - t0), t1)


def _log_line_fit(t: np.ndarray, log_s: np.ndarray):
    slope, intercept = np.polyfit(t, log_s, 1)
    resid = log_s - (slope * t + intercept)
    return slope, intercept, float(np.sqrt(np.mean(resid**2)))


def fit_exponential_envelope(times, values, window=None,
                             min_points: int = 8) -> DecayFit:
    """Fit the decay (or growth, rate < 0) of a complex signal's magnitude.

    Peaks are strict three-point local maxima of |s|; when fewer than
    min_points of them fall in the window the signal is fitted as monotone
    through all positive samples instead. Zero samples never enter a fit.
    """
    t = np.asarray(times, dtype=float)
    s = np.abs(np.asarray(values))
    if t.ndim != 1 or t.shape != s.shape or len(t) < 3:
        raise ParameterError("need matching 1D time and value arrays")
    if window is None:
        window = default_window(t)
    w0, w1 = float(window[0]), float(window[1])
    span = t[-1] - t[0]
    if w0 >= w1 or w0 < t[0] - 1e-12 * span or w1 > t[-1] + 1e-12 * span:
        raise ParameterError("fit window must lie within the series range")

    interior = (s[1:-1] > s[:-2]) & (s[1:-1] > s[2:])
    peak_idx = np.flatnonzero(interior) + 1
    peak_idx = peak_idx[(t[peak_idx] >= w0) & (t[peak_idx] <= w1)]
    peak_idx = peak_idx[s[peak_idx] > 0.0]

    if len(peak_idx) >= min_points:
        tt, ss, method = t[peak_idx], s[peak_idx], "peaks"
    else:
        mask = (t >= w0) & (t <= w1) & (s > 0.0)
        tt, ss, method = t[mask], s[mask], "monotone"
        if len(tt) < min_points:
            raise InsufficientDataError(
                f"{len(peak_idx)} envelope peaks and {len(tt)} positive "
                f"samples in window; need {min_points} of either")

    slope, intercept, residual = _log_line_fit(tt, np.log(ss))
    return DecayFit(rate=-slope / (2.0 * np.pi),
                    amplitude=float(np.exp(intercept)),
                    residual=residual, window=(w0, w1), method=method,
                    n_points=len(tt))


# -- dispersion root ----------------------------------------------------------------

def difference_transform(k: int, profile: EquilibriumProfile,
                         potential: InteractionPotential,
                         sp: SpeciesParams):
    """Closed-form transform of the difference-orientation kernel.

    Returns a callable of xi, valid on the whole plane by continuation.
    """
    if k == 0:
        raise ParameterError("mode 0 carries no field")
    w_hat = potential.value(k)
    scale = sp.e_charge / sp.m_e

    def transform(xi):
        zeta = -1j * np.conj(xi) / k
        return scale * w_hat * cauchy_integral_continued(profile, zeta)

    return transform


def dispersion_root(k: int, profile: EquilibriumProfile,
                    potential: InteractionPotential, sp: SpeciesParams,
                    guess: complex, transform=None, tol: float = 1e-10,
                    max_iter: int = 100) -> complex:
    """Newton solve of (1 + m_e/m_i) D(xi) = 1 from the given guess.

    transform overrides D with an arbitrary callable (useful for synthetic
    checks); by default the closed-form kernel transform is used. The decay
    rate predicted by a root is Re(xi*).
    """
    factor = 1.0 + sp.mass_ratio
    if transform is None:
        transform = difference_transform(k, profile, potential, sp)

    def F(xi):
        return factor * complex(transform(xi)) - 1.0

    xi = complex(guess)
    for _ in range(max_iter):
        val = F(xi)
        if not np.isfinite(val.real) or not np.isfinite(val.imag):
            raise NoRootError("iteration left the evaluable region")
        if abs(val) < tol:
            return xi
        h = 1e-7 * (1.0 + abs(xi))
        dx = (F(xi + h) - F(xi - h)) / (2.0 * h)
        dy = (F(xi + 1j * h) - F(xi - 1j * h)) / (2.0 * h)
        jac = np.array([[dx.real, dy.real], [dx.imag, dy.imag]])
        rhs = np.array([val.real, val.imag])
        try:
            step = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError:
            raise NoRootError("singular Jacobian; the target function may "
                              "have no root") from None
        if not np.all(np.isfinite(step)):
            raise NoRootError("Newton step diverged")
        xi = xi - (step[0] + 1j * step[1])
        if abs(xi) > 1e6:
            raise NoRootError("iterate escaped to infinity")
    raise NoRootError(f"no convergence in {max_iter} iterations")


def suggest_root_guess(k: int, profile: EquilibriumProfile,
                       potential: InteractionPotential, sp: SpeciesParams,
                       re_range=(0.0, 2.0), im_range=(-6.0, 6.0),
                       n: int = 61) -> complex:
    """Coarse-grid starting point: the xi minimizing the root residual."""
    transform = difference_transform(k, profile, potential, sp)
    factor = 1.0 + sp.mass_ratio
    re = np.linspace(re_range[0], re_range[1], n)
    im = np.linspace(im_range[0], im_range[1], n)
    xi = re[:, None] + 1j * im[None, :]
    vals = np.abs(factor * transform(xi) - 1.0)
    j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    return complex(xi[j])


# -- trajectory comparison ------------------------------------------------------------

def _difference_trace(obj, k):
    if hasattr(obj, "rho_diff"):  # phase-space trajectory
        col = obj.column(k)
        return np.asarray(obj.times, float), np.abs(obj.rho_diff[:, col])
    return np.asarray(obj.times, float), np.abs(obj.difference)


def compare_trajectories(a, b, k: int | None = None,
                         norm: str = "sup") -> float:
    """Distance between the |phi_i - phi_e| traces of two solutions.

    Series are compared on the overlap of their time ranges, with b
    interpolated onto a's samples when the grids differ. norm is "sup" for
    the max pointwise gap or "L2" for the integrated one.
    """
    if norm not in ("sup", "L2"):
        raise ParameterError('norm must be "sup" or "L2"')
    if k is None:
        k = getattr(a, "k", None)
    ta, da = _difference_trace(a, k)
    tb, db = _difference_trace(b, k)
    lo, hi = max(ta[0], tb[0]), min(ta[-1], tb[-1])
    if lo > hi:
        raise RangeError("time ranges do not overlap")
    mask = (ta >= lo - 1e-12) & (ta <= hi + 1e-12)
    t = ta[mask]
    gap = da[mask] - np.interp(t, tb, db)
    if norm == "sup":
        return float(np.max(np.abs(gap)))
    trapz = getattr(np, "trapezoid", None) or np.trapz
    return float(np.sqrt(trapz(gap**2, t)))
