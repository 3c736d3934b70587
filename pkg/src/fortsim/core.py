"""Physical constants, unit conventions, and shared domain types.

Unit conventions used throughout the package:

* frequencies are angular (rad/s) inside all physics code,
* ordinary frequency (Hz, or MHz/kHz/GHz as labeled) at every file/CLI
  interface,
* lengths in meters, energies in joules,
* magnetic fields in gauss at interfaces, field gradients in T/cm.

Keeping a single internal convention avoids stray factors of 2*pi when
moving between quoted values like "2 pi x 1.36 MHz" and "6,834,683 kHz".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as _const

TWO_PI = 2.0 * math.pi

# CODATA values via scipy
BOLTZMANN = _const.k          # J/K
PLANCK = _const.h             # J s
HBAR = _const.hbar            # J s
SPEED_OF_LIGHT = _const.c     # m/s


@dataclass(frozen=True)
class UnitConventions:
    """Record of the unit conventions, mostly for output-file headers."""

    internal_frequency: str = "rad/s"
    interface_frequency: str = "Hz (MHz/kHz/GHz as labeled)"
    length: str = "m"
    magnetic_field: str = "gauss"
    magnetic_gradient: str = "T/cm"


UNITS = UnitConventions()


def hz_to_angular(f_hz: float) -> float:
    """Ordinary frequency (Hz) to angular frequency (rad/s)."""
    return TWO_PI * f_hz


def angular_to_hz(omega: float) -> float:
    """Angular frequency (rad/s) to ordinary frequency (Hz)."""
    return omega / TWO_PI


def energy_to_temperature(u_joule: float) -> float:
    """Energy in joules to the equivalent temperature U/k_B in kelvin."""
    return u_joule / BOLTZMANN


def temperature_to_energy(t_kelvin: float) -> float:
    """Temperature in kelvin to the equivalent energy k_B*T in joules."""
    return t_kelvin * BOLTZMANN


@dataclass(frozen=True)
class AtomSpecies:
    """Ground-manifold constants of the trapped species.

    Defaults are 87Rb: the qubit states are |0> = |F=1, mF=0> and
    |1> = |F=2, mF=0>, split by the ground hyperfine interval.  All
    fields can be overridden so nothing downstream is hard-coded to Rb.
    """

    hyperfine_splitting_hz: float = 6_834_683e3   # 6,834,683 kHz
    d2_wavelength_m: float = 780.24e-9
    d1_wavelength_m: float = 794.98e-9
    d2_linewidth_rad_s: float = TWO_PI * 6.07e6   # natural linewidth Gamma
    f_lower: int = 1
    f_upper: int = 2
    gf_lower: float = -0.5
    gf_upper: float = +0.5
    bohr_magneton_hz_per_g: float = 1.3996e6      # mu_B/h

    def __post_init__(self) -> None:
        for name in ("hyperfine_splitting_hz", "d2_wavelength_m",
                     "d1_wavelength_m", "d2_linewidth_rad_s",
                     "bohr_magneton_hz_per_g"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.f_upper <= self.f_lower:
            raise ValueError("f_upper must exceed f_lower")

    def g_factor(self, f: int) -> float:
        """Lande g_F for one of the two ground hyperfine manifolds."""
        if f == self.f_lower:
            return self.gf_lower
        if f == self.f_upper:
            return self.gf_upper
        raise ValueError(f"unknown ground manifold F={f}")

    @property
    def d2_angular_frequency(self) -> float:
        return TWO_PI * SPEED_OF_LIGHT / self.d2_wavelength_m

    @property
    def d1_angular_frequency(self) -> float:
        return TWO_PI * SPEED_OF_LIGHT / self.d1_wavelength_m


RB87 = AtomSpecies()


@dataclass(frozen=True)
class QubitState:
    """Two-level amplitude pair (c0, c1); must be normalized."""

    c0: complex
    c1: complex

    _NORM_TOL = 1e-9

    def __post_init__(self) -> None:
        if abs(self.norm() - 1.0) > self._NORM_TOL:
            raise ValueError("state is not normalized")

    def norm(self) -> float:
        return abs(self.c0) ** 2 + abs(self.c1) ** 2

    @property
    def p0(self) -> float:
        return abs(self.c0) ** 2

    @property
    def p1(self) -> float:
        return abs(self.c1) ** 2

    @classmethod
    def ket0(cls) -> "QubitState":
        return cls(1.0 + 0.0j, 0.0 + 0.0j)

    @classmethod
    def ket1(cls) -> "QubitState":
        return cls(0.0 + 0.0j, 1.0 + 0.0j)
