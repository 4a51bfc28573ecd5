"""Velocity-space equilibrium profiles and species parameters.

Velocity transforms throughout the package use

    fbar(eta) = int f(v) exp(-2 pi i eta v) dv

with no prefactor, so a Maxwellian with spread sigma and drift u transforms to
exp(-2 pi^2 sigma^2 eta^2) exp(-2 pi i eta u). The analytic families are all
Gaussian mixtures, which keeps evaluation, derivatives and transforms in
closed form; tabulated profiles interpolate with a cubic spline so that the
derivative is still continuous.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.integrate import simpson

from .errors import ParameterError, DomainError

_SQRT2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class SpeciesParams:
    """Masses and elementary charge; charge is normalized and defaults to 1."""

    m_e: float = 1.0
    m_i: float = 1836.0
    e_charge: float = 1.0

    def __post_init__(self):
        if not (self.m_e > 0 and self.m_i > 0):
            raise ParameterError("masses must be positive")
        if self.m_i < self.m_e:
            raise ParameterError("m_i must be at least m_e")
        if not self.e_charge > 0:
            raise ParameterError("e_charge must be positive")

    @property
    def mass_ratio(self) -> float:
        """m_e / m_i, in (0, 1]."""
        return self.m_e / self.m_i


def _gauss(v, u, sigma):
    return np.exp(-((v - u) ** 2) / (2.0 * sigma**2)) / (_SQRT2PI * sigma)


@dataclass(frozen=True)
class EquilibriumProfile:
    """A non-negative velocity profile with known mass.

    components holds (weight, center, sigma) triples for the analytic
    families; tabulated profiles carry a grid and values instead and are
    evaluated through a cubic spline. Instances are immutable and may be
    shared freely between species (the usual global-equilibrium setup passes
    the same object for electrons and ions).
    """

    kind: str
    mass: float
    components: tuple = ()
    grid: np.ndarray | None = None
    values: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == "tabulated":
            spline = CubicSpline(self.grid, self.values)
            object.__setattr__(self, "_spline", spline)

    # -- pointwise data ----------------------------------------------------

    def evaluate(self, v):
        v = np.asarray(v, dtype=float)
        if self.kind == "tabulated":
            self._check_range(v)
            return self._spline(v)
        out = np.zeros_like(v)
        for w, u, s in self.components:
            out = out + w * _gauss(v, u, s)
        return out if out.ndim else float(out)

    def derivative(self, v, order: int = 1):
        """d^order f / dv^order; order 1 or 2."""
        v = np.asarray(v, dtype=float)
        if self.kind == "tabulated":
            self._check_range(v)
            return self._spline(v, order)
        out = np.zeros_like(v)
        for w, u, s in self.components:
            g = w * _gauss(v, u, s)
            x = (v - u) / s**2
            if order == 1:
                out = out - x * g
            elif order == 2:
                out = out + (x * x - 1.0 / s**2) * g
            else:
                raise ParameterError("order must be 1 or 2")
        return out if out.ndim else float(out)

    def fourier(self, eta):
        """fbar(eta) under the exp(-2 pi i eta v) convention."""
        eta = np.asarray(eta, dtype=float)
        if self.kind == "tabulated":
            return self._fourier_table(eta)
        out = np.zeros(eta.shape, dtype=complex)
        for w, u, s in self.components:
            out = out + w * np.exp(-2.0 * np.pi**2 * s**2 * eta**2) \
                * np.exp(-2j * np.pi * eta * u)
        return out if out.ndim else complex(out)

    def support_radius(self) -> float:
        """Half-width of the region holding essentially all the mass."""
        if self.kind == "tabulated":
            return float(max(abs(self.grid[0]), abs(self.grid[-1])))
        return max(abs(u) + 20.0 * s for _, u, s in self.components)

    # -- internals ----------------------------------------------------------

    def _check_range(self, v):
        lo, hi = self.grid[0], self.grid[-1]
        if np.any(v < lo) or np.any(v > hi):
            raise DomainError(f"v outside tabulated range [{lo}, {hi}]")

    def _fourier_table(self, eta):
        # integrate the spline on a refined uniform grid; adequate for the
        # smooth, well-resolved tables this path is meant for
        n = max(8 * (len(self.grid) - 1) + 1, 2049)
        x = np.linspace(self.grid[0], self.grid[-1], n)
        fx = self._spline(x)
        eta_arr = np.atleast_1d(eta)
        phases = np.exp(-2j * np.pi * eta_arr[:, None] * x[None, :])
        vals = simpson(fx[None, :] * phases, x=x, axis=1)
        return vals if np.ndim(eta) else complex(vals[0])


# -- constructors ------------------------------------------------------------

def make_maxwellian(sigma: float, drift: float = 0.0) -> EquilibriumProfile:
    """Unit-mass Maxwellian with spread sigma and mean velocity drift."""
    if not sigma > 0:
        raise ParameterError("sigma must be positive")
    return EquilibriumProfile(
        kind="maxwellian", mass=1.0,
        components=((1.0, float(drift), float(sigma)),),
        params={"sigma": float(sigma), "drift": float(drift)})


def make_two_stream(separation: float, sigma: float) -> EquilibriumProfile:
    """Symmetric double Maxwellian with bumps at +-separation/2."""
    if separation < 0:
        raise ParameterError("separation must be non-negative")
    if not sigma > 0:
        raise ParameterError("sigma must be positive")
    a = 0.5 * float(separation)
    return EquilibriumProfile(
        kind="two_stream", mass=1.0,
        components=((0.5, a, float(sigma)), (0.5, -a, float(sigma))),
        params={"separation": float(separation), "sigma": float(sigma)})


def make_bump_on_tail(sigma: float = 1.0, drift: float = 0.0,
                      bump_weight: float = 0.1, bump_center: float = 3.0,
                      bump_sigma: float = 0.5) -> EquilibriumProfile:
    """Bulk Maxwellian plus a small drifting bump; total mass stays 1."""
    if not (0 < bump_weight < 1):
        raise ParameterError("bump_weight must lie in (0, 1)")
    if not (sigma > 0 and bump_sigma > 0):
        raise ParameterError("spreads must be positive")
    return EquilibriumProfile(
        kind="bump_on_tail", mass=1.0,
        components=((1.0 - bump_weight, float(drift), float(sigma)),
                    (bump_weight, float(bump_center), float(bump_sigma))),
        params={"sigma": float(sigma), "drift": float(drift),
                "bump_weight": float(bump_weight),
                "bump_center": float(bump_center),
                "bump_sigma": float(bump_sigma)})


def make_tabulated(grid, values) -> EquilibriumProfile:
    """Profile from samples on an increasing grid. Values must be >= 0."""
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.ndim != 1 or grid.size < 4:
        raise ParameterError("grid needs at least 4 points")
    if np.any(np.diff(grid) <= 0):
        raise ParameterError("grid must be strictly increasing")
    if values.shape != grid.shape:
        raise ParameterError("grid and values must have matching shape")
    if np.any(values < 0):
        raise ParameterError("values must be non-negative")
    mass = float(simpson(values, x=grid))
    return EquilibriumProfile(kind="tabulated", mass=mass, grid=grid,
                              values=values,
                              params={"n_points": int(grid.size),
                                      "v_min": float(grid[0]),
                                      "v_max": float(grid[-1])})


# -- operations ---------------------------------------------------------------

def profile_derivative(profile: EquilibriumProfile, v, order: int = 1):
    return profile.derivative(v, order)


def profile_fourier(profile: EquilibriumProfile, eta):
    return profile.fourier(eta)


def check_quasi_neutrality(f_i: EquilibriumProfile, f_e: EquilibriumProfile,
                           tol: float = 1e-10) -> bool:
    """True when the species masses agree within tol."""
    return abs(f_i.mass - f_e.mass) <= tol
