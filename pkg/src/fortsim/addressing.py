"""Single-site addressing: crosstalk limits and magnetic alternatives.

The addressing beam is focused on one trap; its Gaussian tail still
drives the neighbor at a reduced rate.  Two complementary numbers
quantify the isolation: the optical theory (optics.crosstalk_ratio) and
the experimental upper bound inferred from seeing no rotation at the
neighbor at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import RB87, AtomSpecies
from .dynamics import RamanDrive
from .optics import GaussianBeam, TrapArray, crosstalk_ratio, steer_beam

GRADIENT_MODELS = ("amplitude", "probability")


@dataclass(frozen=True)
class CrosstalkExperiment:
    """The bound-setting measurement: drive one site as long as the
    experiment allows, look for any rotation at the other."""

    driven_site: str
    monitored_site: str
    max_pulse_duration_s: float = 43e-6
    detection_sensitivity_rad: float = math.pi / 6.0
    drive_rabi: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.detection_sensitivity_rad <= math.pi:
            raise ValueError("detection_sensitivity_rad must be in (0, pi]")
        if self.max_pulse_duration_s <= 0:
            raise ValueError("max_pulse_duration_s must be > 0")

    def bound(self) -> float:
        return crosstalk_bound(self.detection_sensitivity_rad,
                               self.drive_rabi, self.max_pulse_duration_s)


def crosstalk_bound(sensitivity_rad: float, omega_r: float,
                    t_max_s: float) -> float:
    """Upper bound on the relative Rabi frequency at the neighbor site.

    If a rotation of sensitivity_rad would have been detected and none
    was after driving for t_max_s, the neighbor's Rabi frequency is
    below sensitivity / t_max, i.e. a fraction sensitivity /
    (omega_r * t_max) of the addressed site's.
    """
    if sensitivity_rad <= 0 or t_max_s <= 0:
        raise ValueError("sensitivity_rad and t_max_s must be > 0")
    if omega_r == 0:
        raise ValueError("omega_r must be nonzero")
    return sensitivity_rad / (abs(omega_r) * t_max_s)


def site_drive_map(array: TrapArray, beam: GaussianBeam, drive: RamanDrive,
                   target: str, pointing_offset_m: float = 0.0) -> dict:
    """Effective Omega_R at every site when the beam addresses one.

    Each site's drive is the target's Omega_R scaled by the intensity
    the steered beam delivers there relative to its focus.
    """
    steered = steer_beam(array, target, beam, pointing_offset_m)
    omega_r = drive.omega_r
    return {
        site.label: omega_r * crosstalk_ratio(
            site.position_m - steered.focus_position_m, steered.waist_m)
        for site in array.sites
    }


@dataclass(frozen=True)
class ZeemanConfig:
    """A ground hyperfine transition in a bias field."""

    bias_field_g: float = 10.7
    f_from: int = 1
    m_from: int = 0
    f_to: int = 2
    m_to: int = 0

    def __post_init__(self) -> None:
        for f, m in ((self.f_from, self.m_from), (self.f_to, self.m_to)):
            if abs(m) > f:
                raise ValueError(f"|mF|={abs(m)} exceeds F={f}")

    def shift_hz(self, species: AtomSpecies = RB87) -> float:
        return zeeman_shift_hz(self.f_from, self.m_from, self.f_to,
                               self.m_to, self.bias_field_g, species)


def zeeman_shift_hz(f_from: int, m_from: int, f_to: int, m_to: int,
                    b_gauss: float, species: AtomSpecies = RB87) -> float:
    """Linear Zeeman shift of a ground hyperfine transition, in Hz.

    (g_F' m' - g_F m) * (mu_B / h) * B: zero for the clock transition,
    about 1.4 MHz/G per unit of g-factor difference otherwise.  This is
    what a bias field uses to push m != 0 transitions out of resonance.
    Second-order shifts are ignored (tens of Hz at 10 G).
    """
    for f, m in ((f_from, m_from), (f_to, m_to)):
        if abs(m) > f:
            raise ValueError(f"|mF|={abs(m)} exceeds F={f}")
    slope = (species.g_factor(f_to) * m_to
             - species.g_factor(f_from) * m_from)
    return slope * species.bohr_magneton_hz_per_g * b_gauss


def magnetic_gradient_required(target_rabi: float, crosstalk: float,
                               separation_m: float,
                               dfdb_hz_per_t: float = 1.4e10,
                               model: str = "amplitude") -> float:
    """Field gradient (T/cm) needed to address sites magnetically.

    To keep the neighbor's drive below a fraction crosstalk of the
    target's, its field-sensitive transition must be detuned by
    delta_req = (target_rabi/2pi)/crosstalk (amplitude-ratio model; the
    "probability" model reads crosstalk as a transfer probability and
    needs only delta_req/sqrt(crosstalk)).  Dividing by the
    frequency-per-field slope and the site separation gives the
    gradient.
    """
    if crosstalk <= 0 or crosstalk >= 1:
        raise ValueError("crosstalk must be in (0, 1)")
    if separation_m <= 0 or dfdb_hz_per_t <= 0:
        raise ValueError("separation_m and dfdb_hz_per_t must be > 0")
    if model not in GRADIENT_MODELS:
        raise ValueError(f"model must be one of {GRADIENT_MODELS}")
    suppression = crosstalk if model == "amplitude" else math.sqrt(crosstalk)
    delta_req_hz = (abs(target_rabi) / (2.0 * math.pi)) / suppression
    gradient_t_per_m = delta_req_hz / (dfdb_hz_per_t * separation_m)
    return gradient_t_per_m / 100.0


def detuning_suppression(omega_r: float, delta) -> float:
    """Peak population transfer of an off-resonant drive, omega^2 /
    (omega^2 + delta^2); handy for sizing shifts against crosstalk."""
    return float(omega_r**2 / (omega_r**2 + np.asarray(delta, float)**2))
