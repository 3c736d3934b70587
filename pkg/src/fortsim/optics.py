"""Gaussian beam profiles, trap geometry, and dipole-trap depth.

The trapping and addressing beams are ordinary TEM00 Gaussians.  The
far-detuned trap depth uses the two-line formula for the ground state,

    U = (pi c^2 Gamma / 2 w_D2^3) (2/Delta_D2 + 1/Delta_D1) I,

with detunings Delta = w_laser - w_line from the D2/D1 lines and the
2:1 weights reflecting the line strengths.  Red detuning gives U < 0;
depths are reported as |U|/k_B in kelvin.

Sites lie on a line, so transverse positions are scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    RB87,
    SPEED_OF_LIGHT,
    TWO_PI,
    AtomSpecies,
    energy_to_temperature,
)


@dataclass(frozen=True)
class GaussianBeam:
    """Focused TEM00 beam; focus_position_m is the transverse position
    of the beam axis."""

    power_w: float
    waist_m: float
    wavelength_m: float
    focus_position_m: float = 0.0

    def __post_init__(self) -> None:
        if self.power_w < 0:
            raise ValueError("power_w must be >= 0")
        if self.waist_m <= 0:
            raise ValueError("waist_m must be > 0")
        if self.wavelength_m <= 0:
            raise ValueError("wavelength_m must be > 0")

    @property
    def rayleigh_range_m(self) -> float:
        return math.pi * self.waist_m**2 / self.wavelength_m

    def waist_at(self, z_m):
        """1/e^2 radius at axial distance z from the focus."""
        return self.waist_m * np.sqrt(1.0 + (z_m / self.rayleigh_range_m) ** 2)

    @property
    def peak_intensity(self) -> float:
        """On-axis intensity at the focus, W/m^2."""
        return 2.0 * self.power_w / (math.pi * self.waist_m**2)

    def intensity(self, r_m, z_m=0.0):
        """Intensity at transverse position r and axial offset z, W/m^2."""
        w = self.waist_at(z_m)
        return (2.0 * self.power_w / (math.pi * w**2)) * np.exp(
            -2.0 * (np.asarray(r_m) - self.focus_position_m) ** 2 / w**2
        )


@dataclass(frozen=True)
class TrapSite:
    label: str
    position_m: float


@dataclass(frozen=True)
class TrapArray:
    """Ordered line of trap sites with unique labels."""

    sites: tuple[TrapSite, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sites", tuple(self.sites))
        labels = [s.label for s in self.sites]
        if len(set(labels)) != len(labels):
            raise ValueError("site labels must be unique")
        if not self.sites:
            raise ValueError("array needs at least one site")

    @classmethod
    def pair(cls, separation_m: float,
             labels: tuple[str, str] = ("A", "B")) -> "TrapArray":
        """The standard two-site geometry: labels at 0 and separation."""
        if separation_m <= 0:
            raise ValueError("separation_m must be > 0")
        return cls((TrapSite(labels[0], 0.0), TrapSite(labels[1],
                                                       separation_m)))

    def site(self, label: str) -> TrapSite:
        for s in self.sites:
            if s.label == label:
                return s
        raise ValueError(f"unknown site label {label!r}")

    @property
    def separation_m(self) -> float:
        """Distance between adjacent sites (requires uniform spacing)."""
        if len(self.sites) < 2:
            raise ValueError("separation needs at least two sites")
        gaps = [abs(b.position_m - a.position_m)
                for a, b in zip(self.sites, self.sites[1:])]
        if max(gaps) - min(gaps) > 1e-12 * max(gaps):
            raise ValueError("sites are not uniformly spaced")
        return gaps[0]


def steer_beam(array: TrapArray, target: str, beam: GaussianBeam,
               pointing_offset_m: float = 0.0) -> GaussianBeam:
    """Aim the addressing beam at a site, with an optional static
    pointing error.  Retargeting is idempotent; the deflector's optical
    frequency shift is not modeled."""
    site = array.site(target)
    return replace(beam, focus_position_m=site.position_m + pointing_offset_m)


def crosstalk_ratio(separation_m: float, waist_m: float) -> float:
    """Relative two-photon Rabi frequency a Gaussian beam drives one
    site away: exp(-2 d^2 / w^2).

    Each single-photon Rabi frequency scales with the field amplitude
    exp(-d^2/w^2); the product of the two sidebands squares it.
    """
    if waist_m <= 0:
        raise ValueError("waist_m must be > 0")
    return math.exp(-2.0 * separation_m**2 / waist_m**2)


def trap_depth_kelvin(beam: GaussianBeam,
                      species: AtomSpecies = RB87) -> float:
    """Ground-state trap depth |U|/k_B at the focus of a red-detuned beam.

    Two-line form with both D lines; valid far from resonance
    (|Delta| >> Gamma), which holds for any sensible trap laser.  Blue
    detuning is rejected: it would not trap ground-state atoms.
    """
    if beam.wavelength_m <= species.d1_wavelength_m:
        raise ValueError("beam must be red-detuned of both D lines")
    omega_l = TWO_PI * SPEED_OF_LIGHT / beam.wavelength_m
    delta_d2 = omega_l - species.d2_angular_frequency
    delta_d1 = omega_l - species.d1_angular_frequency
    prefactor = (
        math.pi * SPEED_OF_LIGHT**2 * species.d2_linewidth_rad_s
        / (2.0 * species.d2_angular_frequency**3)
    )
    u = prefactor * (2.0 / delta_d2 + 1.0 / delta_d1) * beam.peak_intensity
    return energy_to_temperature(abs(u))
