"""Initial disturbances applied to a species on top of its equilibrium.

A perturbation enters the mode equations only through its double transform
h~(k, eta): Fourier in space at integer mode k, then Fourier in velocity at
frequency eta. Free transport turns that function into the forcing signal
a(t) = h~(k, k t), so any perturbation object here must supply
mode_transform(k, eta) vectorized over eta.
"""

from dataclasses import dataclass

import numpy as np

from .equilibria import EquilibriumProfile
from .errors import ModeError


@dataclass(frozen=True)
class CosinePerturbation:
    """h(x, v) = amplitude * cos(2 pi mode x) * g(v).

    The cosine splits evenly into the +mode and -mode lines, so the double
    transform is (amplitude / 2) g~(eta) on those two modes and zero on all
    others. mode = 0 would inject net charge and is rejected.
    """

    amplitude: float
    mode: int
    profile: EquilibriumProfile

    def __post_init__(self):
        if self.mode == 0:
            raise ModeError("mode 0 perturbation breaks charge neutrality")

    def evaluate(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        return (self.amplitude * np.cos(2.0 * np.pi * self.mode * x)
                * self.profile.evaluate(v))

    def mode_transform(self, k: int, eta):
        eta = np.asarray(eta, dtype=float)
        if abs(k) != abs(self.mode):
            return np.zeros(eta.shape, dtype=complex)
        return 0.5 * self.amplitude * np.asarray(self.profile.fourier(eta),
                                                 dtype=complex)


@dataclass(frozen=True)
class ZeroPerturbation:
    """No disturbance; the species starts exactly on its equilibrium."""

    def evaluate(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        return np.zeros(np.broadcast(x, v).shape)

    def mode_transform(self, k: int, eta):
        eta = np.asarray(eta, dtype=float)
        return np.zeros(eta.shape, dtype=complex)
