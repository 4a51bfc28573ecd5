"""Interaction potentials on the unit torus and the field they induce.

Spatial modes are integers (torus of length 1, transform convention
g_hat(k) = int_0^1 g(x) exp(-2 pi i k x) dx). A potential is stored as its
even, positive symbol w_hat on the modes it covers; the induced field mode is

    E_hat(k) = -2 pi i k w_hat(k) e rho_hat(k),    k != 0.
"""

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import ModeError, ParameterError


@dataclass(frozen=True)
class InteractionPotential:
    kind: str
    w_hat: Mapping[int, float]

    def value(self, k: int) -> float:
        """Symbol at mode k; even in k, undefined at k = 0."""
        if k == 0:
            raise ModeError("w_hat is not defined at k = 0 (neutral mode)")
        try:
            return self.w_hat[abs(int(k))]
        except KeyError:
            raise ModeError(f"mode {k} outside potential table") from None

    @property
    def k_max(self) -> int:
        return max(self.w_hat)


def coulomb_potential(k_max: int = 8) -> InteractionPotential:
    """w_hat(k) = 1/k^2 on modes 1..k_max."""
    if k_max < 1:
        raise ParameterError("k_max must be at least 1")
    table = {k: 1.0 / k**2 for k in range(1, k_max + 1)}
    return InteractionPotential("coulomb", MappingProxyType(table))


def screened_potential(alpha: float, k_max: int = 8) -> InteractionPotential:
    """w_hat(k) = 1/(k^2 + alpha^2), screening length 1/alpha."""
    if not alpha > 0:
        raise ParameterError("alpha must be positive")
    if k_max < 1:
        raise ParameterError("k_max must be at least 1")
    table = {k: 1.0 / (k**2 + alpha**2) for k in range(1, k_max + 1)}
    return InteractionPotential("screened", MappingProxyType(table))


def custom_potential(table: Mapping[int, float]) -> InteractionPotential:
    """Potential from an explicit symbol table on positive modes."""
    clean = {}
    for k, w in table.items():
        if k == 0:
            raise ParameterError("custom table must not contain k = 0")
        if w <= 0:
            raise ParameterError("symbol values must be positive")
        clean[abs(int(k))] = float(w)
    if not clean:
        raise ParameterError("custom table is empty")
    return InteractionPotential("custom", MappingProxyType(clean))


def field_mode(rho_hat: complex, k: int, potential: InteractionPotential,
               e_charge: float = 1.0) -> complex:
    """Field mode induced by charge-density mode rho_hat at spatial mode k."""
    return -2j * np.pi * k * potential.value(k) * e_charge * rho_hat


def electric_energy(rho_hats: Mapping[int, complex],
                    potential: InteractionPotential,
                    e_charge: float = 1.0) -> float:
    """(1/2) sum_k |E_hat(k)|^2 over the non-zero modes present in rho_hats.

    Callers wanting the energy of a real field should pass the full
    conjugate-symmetric set of modes.
    """
    total = 0.0
    for k, rho in rho_hats.items():
        if k == 0:
            continue
        total += 0.5 * abs(field_mode(rho, k, potential, e_charge)) ** 2
    return total
