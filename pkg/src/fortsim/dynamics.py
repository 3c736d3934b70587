"""Qubit dynamics: two-photon drive, pulse sequences, and a three-level check.

The microwave-frequency qubit transition is driven by a pair of optical
sidebands detuned by Delta from the excited manifold.  Eliminating the
excited state gives an effective two-level drive with Rabi frequency

    Omega_R = Omega_1 Omega_2 / (2 Delta)

(signed; Delta < 0 for red detuning) plus a differential light shift
(Omega_1^2 - Omega_2^2) / (4 Delta) that adds to the two-photon detuning.
Everything in this module takes angular frequencies (rad/s); only the
sequence text format speaks Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import (
    PLANCK,
    RB87,
    SPEED_OF_LIGHT,
    TWO_PI,
    AtomSpecies,
    QubitState,
    angular_to_hz,
    hz_to_angular,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


# ---------------------------------------------------------------------------
# effective two-level parameters

def raman_rabi_frequency(omega_1: float, omega_2: float,
                         delta_one_photon: float) -> float:
    """Effective qubit Rabi frequency for sideband Rabi frequencies
    omega_1, omega_2 and single-photon detuning delta_one_photon.

    Signed: red detuning gives a negative value.  Pulse areas use the
    magnitude.
    """
    if delta_one_photon == 0:
        raise ValueError("single-photon detuning must be nonzero")
    return omega_1 * omega_2 / (2.0 * delta_one_photon)


def differential_light_shift(omega_1: float, omega_2: float,
                             delta_one_photon: float) -> float:
    """Shift of the two-photon resonance from unequal sideband powers."""
    if delta_one_photon == 0:
        raise ValueError("single-photon detuning must be nonzero")
    return (omega_1**2 - omega_2**2) / (4.0 * delta_one_photon)


def effective_two_level(omega_1, omega_2, delta_one_photon,
                        delta_two_photon=0.0):
    """(Omega_R, delta_eff) after eliminating the excited state."""
    omega_r = raman_rabi_frequency(omega_1, omega_2, delta_one_photon)
    delta_eff = delta_two_photon + differential_light_shift(
        omega_1, omega_2, delta_one_photon)
    return omega_r, delta_eff


def sideband_rabi_frequencies(omega_r: float,
                              delta_one_photon: float) -> tuple[float, float]:
    """Equal sideband Rabi frequencies that realize a target |Omega_R|."""
    omega = math.sqrt(2.0 * abs(delta_one_photon) * abs(omega_r))
    return omega, omega


def single_photon_rabi_estimate(power_w: float, waist_m: float,
                                species: AtomSpecies = RB87) -> float:
    """Order-of-magnitude single-photon Rabi frequency from beam power.

    Uses Omega = Gamma sqrt(I / 2 I_sat) with the two-level saturation
    intensity of the D2 line; real sidebands involve dipole matrix
    elements and polarization factors this ignores, so treat the result
    as a scale estimate only.  Calibrated values should come from
    measured Rabi oscillations instead.
    """
    intensity = 2.0 * power_w / (math.pi * waist_m**2)
    i_sat = (math.pi * PLANCK * SPEED_OF_LIGHT * species.d2_linewidth_rad_s
             / (3.0 * species.d2_wavelength_m**3))
    return species.d2_linewidth_rad_s * math.sqrt(
        intensity / (2.0 * i_sat))


def pi_time(omega_r: float) -> float:
    """Duration of a pi pulse at (resonant) Rabi frequency omega_r."""
    return math.pi / abs(omega_r)


def pi_half_time(omega_r: float) -> float:
    return 0.5 * math.pi / abs(omega_r)


def figure_of_merit(t2_s: float, omega_r: float) -> float:
    """Number of pi/2 rotations that fit in one coherence time."""
    if t2_s <= 0:
        raise ValueError("t2_s must be > 0")
    return t2_s / pi_half_time(omega_r)


@dataclass(frozen=True)
class RamanDrive:
    """The two-photon drive: sideband Rabi frequencies, single-photon
    detuning Delta, and two-photon detuning delta, all rad/s.

    The effective model is only valid when |Delta| dwarfs the excited
    state linewidth; construction enforces |Delta| >= 100 Gamma.  The
    total sideband power is informational (the paper-style calibration
    fixes omega_1, omega_2 from measured oscillations, not from power).
    """

    omega_1: float
    omega_2: float
    delta_one_photon: float
    delta_two_photon: float = 0.0
    sideband_power_w: float | None = None
    include_light_shift: bool = False
    linewidth_rad_s: float = RB87.d2_linewidth_rad_s

    def __post_init__(self) -> None:
        if self.omega_1 < 0 or self.omega_2 < 0:
            raise ValueError("sideband Rabi frequencies must be >= 0")
        if abs(self.delta_one_photon) < 100.0 * self.linewidth_rad_s:
            raise ValueError(
                "single-photon detuning too small: need |Delta| >= 100 "
                "linewidths for the effective two-level model")

    @classmethod
    def from_effective(cls, omega_r: float, delta_one_photon: float,
                       delta_two_photon: float = 0.0,
                       **kwargs) -> "RamanDrive":
        """Build equal sidebands that realize a target |Omega_R|.

        The sign of omega_r then follows the sign of delta_one_photon.
        """
        o1, o2 = sideband_rabi_frequencies(omega_r, delta_one_photon)
        return cls(o1, o2, delta_one_photon, delta_two_photon, **kwargs)

    @property
    def omega_r(self) -> float:
        """Effective two-photon Rabi frequency Omega_1 Omega_2 / 2 Delta."""
        return raman_rabi_frequency(self.omega_1, self.omega_2,
                                    self.delta_one_photon)

    @property
    def light_shift(self) -> float:
        return differential_light_shift(self.omega_1, self.omega_2,
                                        self.delta_one_photon)

    @property
    def effective_detuning(self) -> float:
        if self.include_light_shift:
            return self.delta_two_photon + self.light_shift
        return self.delta_two_photon


def two_photon_rabi(drive: RamanDrive) -> float:
    return drive.omega_r


# ---------------------------------------------------------------------------
# SU(2) propagators

def drive_propagator(omega: float, delta: float, phase: float,
                     t_s: float) -> np.ndarray:
    """Propagator for constant drive: H = (delta/2) sz + (omega/2)
    (cos(phase) sx + sin(phase) sy), acting on (c0, c1)."""
    omega_eff = math.hypot(omega, delta)
    if omega_eff == 0.0:
        return IDENTITY.copy()
    theta = omega_eff * t_s
    nx = omega * math.cos(phase) / omega_eff
    ny = omega * math.sin(phase) / omega_eff
    nz = delta / omega_eff
    axis = nx * SIGMA_X + ny * SIGMA_Y + nz * SIGMA_Z
    return math.cos(0.5 * theta) * IDENTITY - 1j * math.sin(0.5 * theta) * axis


def free_propagator(delta: float, t_s: float) -> np.ndarray:
    """Propagator for drive off: H = (delta/2) sz."""
    half = 0.5 * delta * t_s
    return np.array([[np.exp(-1j * half), 0.0], [0.0, np.exp(1j * half)]],
                    dtype=complex)


def drive_hamiltonian(omega: float, delta: float, phase: float) -> np.ndarray:
    return 0.5 * delta * SIGMA_Z + 0.5 * omega * (
        math.cos(phase) * SIGMA_X + math.sin(phase) * SIGMA_Y)


def propagate(state: QubitState, omega_r: float, delta: float, phase: float,
              t_s: float) -> QubitState:
    """Exact SU(2) rotation of a state under constant drive."""
    if t_s < 0:
        raise ValueError("t_s must be >= 0")
    vec = drive_propagator(omega_r, delta, phase, t_s) @ np.array(
        [state.c0, state.c1])
    return QubitState(complex(vec[0]), complex(vec[1]))


def rabi_population(omega: float, delta, t_s):
    """Excited-state population after driving |0> for time t.

    (omega^2 / omega_eff^2) sin^2(omega_eff t / 2); vectorized over t_s
    and delta.
    """
    delta = np.asarray(delta, dtype=float)
    t_s = np.asarray(t_s, dtype=float)
    omega_eff_sq = omega**2 + delta**2
    with np.errstate(invalid="ignore", divide="ignore"):
        p = np.where(
            omega_eff_sq > 0.0,
            omega**2 / np.where(omega_eff_sq > 0, omega_eff_sq, 1.0)
            * np.sin(0.5 * np.sqrt(omega_eff_sq) * t_s) ** 2,
            0.0,
        )
    if p.ndim == 0:
        return float(p)
    return p


def ramsey_probability(delta, gap_s, t2_s=math.inf):
    """|1> population after pi/2 - gap - pi/2 with hard pulses.

    0.5 * (1 + exp(-gap/T2) * cos(delta * gap)): full transfer on
    resonance, fringes in delta with contrast exp(-gap/T2).
    """
    delta = np.asarray(delta, dtype=float)
    gap_s = np.asarray(gap_s, dtype=float)
    envelope = np.exp(-gap_s / t2_s) if math.isfinite(t2_s) else 1.0
    p = 0.5 * (1.0 + envelope * np.cos(delta * gap_s))
    if p.ndim == 0:
        return float(p)
    return p


def ramsey_effective_gap(gap_s: float, omega_r: float) -> float:
    """Free-precession time that makes the hard-pulse fringe match a
    finite-pulse sequence: the qubit keeps precessing during the pi/2
    pulses, adding 4 tau / pi of effective gap for pulse duration tau."""
    return gap_s + 4.0 * pi_half_time(omega_r) / math.pi


# ---------------------------------------------------------------------------
# pulse sequences

@dataclass(frozen=True)
class DrivePulse:
    """Constant drive segment.  omega_r may be signed."""

    omega_r: float
    duration_s: float
    delta: float = 0.0
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.duration_s < 0:
            raise ValueError("duration_s must be >= 0")

    def propagator(self) -> np.ndarray:
        return drive_propagator(self.omega_r, self.delta, self.phase,
                                self.duration_s)


@dataclass(frozen=True)
class FreeEvolution:
    """Drive off for duration_s at two-photon detuning delta."""

    duration_s: float
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.duration_s < 0:
            raise ValueError("duration_s must be >= 0")

    def propagator(self) -> np.ndarray:
        return free_propagator(self.delta, self.duration_s)


Segment = Union[DrivePulse, FreeEvolution]


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def total_duration_s(self) -> float:
        return sum(seg.duration_s for seg in self.segments)

    def propagator(self) -> np.ndarray:
        u = IDENTITY.copy()
        for seg in self.segments:
            u = seg.propagator() @ u
        return u

    def apply(self, state: QubitState) -> QubitState:
        vec = self.propagator() @ np.array([state.c0, state.c1])
        return QubitState(complex(vec[0]), complex(vec[1]))

    def final_population(self, state: QubitState | None = None) -> float:
        if state is None:
            state = QubitState.ket0()
        return self.apply(state).p1

    # -- text round trip ----------------------------------------------------
    # One segment per line, Hz at the interface:
    #   DRIVE omega_r_hz=<f> delta_hz=<f> phase_rad=<f> t_s=<f>
    #   FREE delta_hz=<f> t_s=<f>

    def to_text(self) -> str:
        lines = []
        for seg in self.segments:
            if isinstance(seg, DrivePulse):
                lines.append(
                    "DRIVE omega_r_hz=%.17g delta_hz=%.17g "
                    "phase_rad=%.17g t_s=%.17g"
                    % (angular_to_hz(seg.omega_r), angular_to_hz(seg.delta),
                       seg.phase, seg.duration_s))
            else:
                lines.append(
                    "FREE delta_hz=%.17g t_s=%.17g"
                    % (angular_to_hz(seg.delta), seg.duration_s))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PulseSequence":
        segments: list[Segment] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            kind, pairs = fields[0], fields[1:]
            values = {}
            for pair in pairs:
                if "=" not in pair:
                    raise ValueError(
                        f"line {lineno}: expected key=value, got {pair!r}")
                key, _, val = pair.partition("=")
                try:
                    values[key] = float(val)
                except ValueError:
                    raise ValueError(
                        f"line {lineno}: bad number for {key}: {val!r}"
                    ) from None
            if kind == "DRIVE":
                expected = {"omega_r_hz", "delta_hz", "phase_rad", "t_s"}
                if set(values) != expected:
                    raise ValueError(
                        f"line {lineno}: DRIVE needs {sorted(expected)}")
                segments.append(DrivePulse(
                    omega_r=hz_to_angular(values["omega_r_hz"]),
                    duration_s=values["t_s"],
                    delta=hz_to_angular(values["delta_hz"]),
                    phase=values["phase_rad"]))
            elif kind == "FREE":
                expected = {"delta_hz", "t_s"}
                if set(values) != expected:
                    raise ValueError(
                        f"line {lineno}: FREE needs {sorted(expected)}")
                segments.append(FreeEvolution(
                    duration_s=values["t_s"],
                    delta=hz_to_angular(values["delta_hz"])))
            else:
                raise ValueError(f"line {lineno}: unknown segment {kind!r}")
        return cls(tuple(segments))


def run_sequence(state: QubitState, seq: PulseSequence) -> QubitState:
    """Left-to-right composition of the sequence's propagators."""
    return seq.apply(state)


def sequence_population(seq: PulseSequence, t2_s: float = math.inf,
                        state: QubitState | None = None) -> float:
    """|1> population after a sequence, with dephasing during the gaps.

    Evolves the density matrix; free-evolution segments damp the
    coherence by exp(-duration/t2) while drive segments stay unitary
    (pulses are ns, t2 is hundreds of us, so dephasing within a pulse is
    negligible).  With t2 = inf this reduces exactly to the pure-state
    result.
    """
    if state is None:
        state = QubitState.ket0()
    vec = np.array([state.c0, state.c1])
    rho = np.outer(vec, vec.conj())
    for seg in seq.segments:
        u = seg.propagator()
        rho = u @ rho @ u.conj().T
        if isinstance(seg, FreeEvolution) and math.isfinite(t2_s):
            damp = math.exp(-seg.duration_s / t2_s)
            rho[0, 1] *= damp
            rho[1, 0] *= damp
    return float(rho[1, 1].real)


def rabi_sequence(omega_r: float, t_s: float, delta: float = 0.0,
                  phase: float = 0.0) -> PulseSequence:
    return PulseSequence((DrivePulse(omega_r, t_s, delta, phase),))


def ramsey_sequence(omega_r: float, gap_s: float,
                    delta: float = 0.0) -> PulseSequence:
    """pi/2 - free gap - pi/2, pulses at the driven detuning too."""
    tau = pi_half_time(omega_r)
    return PulseSequence((
        DrivePulse(omega_r, tau, delta),
        FreeEvolution(gap_s, delta),
        DrivePulse(omega_r, tau, delta),
    ))


def drive_pulse(drive: RamanDrive, duration_s: float,
                phase: float = 0.0) -> DrivePulse:
    """Segment realizing a RamanDrive at the effective two-level layer."""
    return DrivePulse(drive.omega_r, duration_s, drive.effective_detuning,
                      phase)


# ---------------------------------------------------------------------------
# three-level reference model

def lambda_hamiltonian(omega_1: float, omega_2: float,
                       delta_one_photon: float,
                       delta_two_photon: float = 0.0) -> np.ndarray:
    """Raman Hamiltonian on (|0>, |1>, |e>) in the rotating frame.

    Basis order (ground, ground, excited); the excited level sits at
    -Delta so red detuning (Delta < 0) puts it far above the drive.
    """
    o1, o2 = 0.5 * omega_1, 0.5 * omega_2
    return np.array([
        [0.0, 0.0, o1],
        [0.0, -delta_two_photon, o2],
        [o1, o2, -delta_one_photon],
    ], dtype=complex)


def propagate_constant(hamiltonian: np.ndarray, psi0: np.ndarray, t_s: float,
                       tol: float = 1e-8, max_doublings: int = 40):
    """Integrate i dpsi/dt = H psi for constant H.

    Classic fourth-order step M(h) = sum_{k<=4} (-i H h)^k / k!, applied
    n times via a logarithmic matrix power; n doubles until the result
    moves by less than tol.  Works for any dimension, used here both for
    the three-level model and as an independent check on the closed-form
    two-level propagators.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if t_s == 0:
        return psi0.copy()
    scale = float(np.max(np.abs(hamiltonian)))
    # keep ||H h|| small from the start so the Taylor step never blows up
    n = max(1, int(math.ceil(2.0 * scale * t_s)))

    def advance(steps: int) -> np.ndarray:
        h = t_s / steps
        a = -1j * hamiltonian * h
        m = np.eye(len(psi0), dtype=complex)
        term = np.eye(len(psi0), dtype=complex)
        for k in range(1, 5):
            term = term @ a / k
            m = m + term
        return np.linalg.matrix_power(m, steps) @ psi0

    psi = advance(n)
    for _ in range(max_doublings):
        n *= 2
        refined = advance(n)
        if np.max(np.abs(refined - psi)) < tol:
            return refined
        psi = refined
    raise RuntimeError("integration did not converge")


def lambda_propagate(initial, drive: RamanDrive, t_s: float,
                     tol: float = 1e-8) -> np.ndarray:
    """Integrate the full three-level model under a RamanDrive.

    The validation oracle for the effective two-level picture: after
    adiabatic elimination its ground-manifold populations should match
    the SU(2) result to order (Omega/Delta)^2.
    """
    h = lambda_hamiltonian(drive.omega_1, drive.omega_2,
                           drive.delta_one_photon, drive.delta_two_photon)
    return propagate_constant(h, initial, t_s, tol=tol)


def lambda_populations(omega_1: float, omega_2: float,
                       delta_one_photon: float, t_s: float,
                       delta_two_photon: float = 0.0,
                       tol: float = 1e-8) -> np.ndarray:
    """(P0, P1, Pe) after driving |0> in the full three-level model."""
    h = lambda_hamiltonian(omega_1, omega_2, delta_one_photon,
                           delta_two_photon)
    psi = propagate_constant(h, np.array([1.0, 0.0, 0.0]), t_s, tol=tol)
    return np.abs(psi) ** 2
