"""Drive dynamics against independent references.

The two-level closed forms are checked against direct numerical
integration of the same Hamiltonian, and the two-level reduction is
checked against integrating the full three-level system with no
elimination applied.
"""

import math

import numpy as np
import pytest

from fortsim.core import RB87, TWO_PI, QubitState
from fortsim.dynamics import (
    DrivePulse,
    FreeEvolution,
    PulseSequence,
    RamanDrive,
    differential_light_shift,
    drive_hamiltonian,
    drive_propagator,
    drive_pulse,
    figure_of_merit,
    free_propagator,
    lambda_populations,
    pi_half_time,
    pi_time,
    propagate,
    propagate_constant,
    rabi_population,
    rabi_sequence,
    raman_rabi_frequency,
    ramsey_effective_gap,
    ramsey_probability,
    ramsey_sequence,
    run_sequence,
    sequence_population,
    sideband_rabi_frequencies,
    two_photon_rabi,
)

OMEGA_R = TWO_PI * 1.36e6
DELTA_1 = -TWO_PI * 41e9


# ---------------------------------------------------------------------------
# two-photon algebra

def test_raman_rabi_frequency_sign_and_value():
    omega = TWO_PI * 1e9
    assert raman_rabi_frequency(omega, omega, DELTA_1) == pytest.approx(
        omega**2 / (2 * DELTA_1), rel=1e-12)
    assert raman_rabi_frequency(omega, omega, DELTA_1) < 0


def test_sideband_frequencies_invert_raman_product():
    o1, o2 = sideband_rabi_frequencies(OMEGA_R, DELTA_1)
    assert o1 == pytest.approx(o2)
    assert raman_rabi_frequency(o1, o2, DELTA_1) == pytest.approx(
        -abs(OMEGA_R), rel=1e-12)


def test_equal_sidebands_cancel_light_shift():
    o1, o2 = sideband_rabi_frequencies(OMEGA_R, DELTA_1)
    assert differential_light_shift(o1, o2, DELTA_1) == 0.0


def test_light_shift_sign():
    # stronger leg 1 shifts the resonance by (O1^2 - O2^2) / 4 Delta
    shift = differential_light_shift(TWO_PI * 2e9, TWO_PI * 1e9, DELTA_1)
    assert shift == pytest.approx(
        ((TWO_PI * 2e9) ** 2 - (TWO_PI * 1e9) ** 2) / (4 * DELTA_1),
        rel=1e-12)


def test_pi_times():
    assert pi_half_time(OMEGA_R) == pytest.approx(math.pi / (2 * OMEGA_R))
    assert pi_time(OMEGA_R) == pytest.approx(2 * pi_half_time(OMEGA_R))
    assert pi_half_time(-OMEGA_R) == pi_half_time(OMEGA_R)


def test_figure_of_merit():
    assert figure_of_merit(870e-6, OMEGA_R) == pytest.approx(
        870e-6 / pi_half_time(OMEGA_R), rel=1e-12)
    with pytest.raises(ValueError):
        figure_of_merit(0.0, OMEGA_R)


def test_raman_drive_validates_detuning():
    # the two-level reduction needs the intermediate detuning to
    # dominate the linewidth by a wide margin
    with pytest.raises(ValueError):
        RamanDrive(TWO_PI * 1e6, TWO_PI * 1e6,
                   delta_one_photon=50 * RB87.d2_linewidth_rad_s)
    RamanDrive(TWO_PI * 1e6, TWO_PI * 1e6,
               delta_one_photon=200 * RB87.d2_linewidth_rad_s)


def test_raman_drive_from_effective_round_trips():
    drive = RamanDrive.from_effective(OMEGA_R, DELTA_1)
    assert abs(drive.omega_r) == pytest.approx(OMEGA_R, rel=1e-12)
    assert two_photon_rabi(drive) == drive.omega_r
    assert drive.omega_r < 0  # red detuning flips the sign


def test_raman_drive_light_shift_adds_to_detuning():
    drive = RamanDrive(TWO_PI * 2e9, TWO_PI * 1e9, DELTA_1,
                       delta_two_photon=TWO_PI * 1e3,
                       include_light_shift=True)
    assert drive.effective_detuning == pytest.approx(
        TWO_PI * 1e3 + drive.light_shift, rel=1e-12)
    bare = RamanDrive(TWO_PI * 2e9, TWO_PI * 1e9, DELTA_1,
                      delta_two_photon=TWO_PI * 1e3)
    assert bare.effective_detuning == pytest.approx(TWO_PI * 1e3)


# ---------------------------------------------------------------------------
# SU(2) propagators

def _random_state(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return QubitState(v[0], v[1])


def test_propagator_unitarity():
    rng = np.random.default_rng(1)
    for _ in range(200):
        omega, delta, phase = rng.uniform(-1, 1, 3) * TWO_PI * 5e6
        t = rng.uniform(0, 5e-6)
        u = drive_propagator(omega, delta, phase, t)
        assert np.max(np.abs(u @ u.conj().T - np.eye(2))) < 1e-12
        f = free_propagator(delta, t)
        assert np.max(np.abs(f @ f.conj().T - np.eye(2))) < 1e-12


def test_propagator_composition():
    # U(t1 + t2) = U(t2) U(t1) for a constant drive
    u1 = drive_propagator(OMEGA_R, TWO_PI * 2e5, 0.3, 0.4e-6)
    u2 = drive_propagator(OMEGA_R, TWO_PI * 2e5, 0.3, 0.7e-6)
    u12 = drive_propagator(OMEGA_R, TWO_PI * 2e5, 0.3, 1.1e-6)
    assert np.max(np.abs(u2 @ u1 - u12)) < 1e-12


def test_resonant_rabi_closed_form():
    t = np.linspace(0, 3e-6, 50)
    p = rabi_population(OMEGA_R, 0.0, t)
    assert p == pytest.approx(np.sin(OMEGA_R * t / 2) ** 2, abs=1e-12)


def test_detuned_rabi_closed_form():
    delta = TWO_PI * 0.9e6
    gen = math.hypot(OMEGA_R, delta)
    t = np.linspace(0, 3e-6, 50)
    expect = (OMEGA_R**2 / gen**2) * np.sin(gen * t / 2) ** 2
    assert rabi_population(OMEGA_R, delta, t) == pytest.approx(
        expect, abs=1e-12)


def test_propagate_matches_closed_form():
    state = QubitState.ket0()
    for t in (0.11e-6, 0.5e-6, 1.7e-6):
        out = propagate(state, OMEGA_R, TWO_PI * 0.4e6, 0.0, t)
        assert out.p1 == pytest.approx(
            float(rabi_population(OMEGA_R, TWO_PI * 0.4e6, t)), abs=1e-12)


def test_propagate_matches_numerical_integration():
    # integrate i dpsi/dt = H psi directly and compare, criterion-level
    # tolerance 1e-8
    delta, phase = TWO_PI * 0.37e6, 0.8
    h = drive_hamiltonian(OMEGA_R, delta, phase)
    t = 1.3e-6
    psi = propagate_constant(h, np.array([1.0, 0.0], dtype=complex), t,
                             tol=1e-12)
    out = propagate(QubitState.ket0(), OMEGA_R, delta, phase, t)
    overlap = abs(np.vdot(psi, np.array([out.c0, out.c1])))
    assert overlap == pytest.approx(1.0, abs=1e-8)
    assert abs(psi[1]) ** 2 == pytest.approx(out.p1, abs=1e-8)


def test_phase_shifts_rotation_axis():
    # a pi/2 about x then a pi/2 about y differs from two about x
    tau = pi_half_time(OMEGA_R)
    s1 = propagate(propagate(QubitState.ket0(), OMEGA_R, 0, 0, tau),
                   OMEGA_R, 0, math.pi / 2, tau)
    s2 = propagate(propagate(QubitState.ket0(), OMEGA_R, 0, 0, tau),
                   OMEGA_R, 0, 0, tau)
    assert s2.p1 == pytest.approx(1.0, abs=1e-12)
    assert s1.p1 == pytest.approx(0.5, abs=1e-12)


# ---------------------------------------------------------------------------
# Ramsey

def test_ramsey_closed_form_reference_points():
    t2 = 870e-6
    assert ramsey_probability(0.0, 100e-6) == pytest.approx(1.0)
    # delta T = pi lands on the dark fringe
    assert ramsey_probability(math.pi / 100e-6, 100e-6) == pytest.approx(
        0.0, abs=1e-12)
    # one full fringe at T = T2 has contrast 1/e
    p = ramsey_probability(TWO_PI / t2, t2, t2)
    assert p == pytest.approx(0.5 * (1 + math.exp(-1)), rel=1e-9)
    assert p == pytest.approx(0.684, abs=5e-4)


def test_hard_pulse_ramsey_equals_closed_form_exactly():
    # with zero-duration idealized pulses the composition reproduces
    # 0.5 (1 + cos(delta T)) with no approximation
    tau = pi_half_time(OMEGA_R)
    gap = 250e-6
    for delta in TWO_PI * np.linspace(-20e3, 20e3, 21):
        # hard pulse: drive detuning ignored during the (instant) pulse
        u_pulse = drive_propagator(OMEGA_R, 0.0, 0.0, tau)
        u_free = free_propagator(delta, gap)
        psi = u_pulse @ u_free @ u_pulse @ np.array([1, 0], dtype=complex)
        p1 = abs(psi[1]) ** 2
        assert p1 == pytest.approx(
            0.5 * (1 + math.cos(delta * gap)), abs=1e-12)


def test_finite_pulse_ramsey_matches_shifted_closed_form():
    # square pi/2 pulses of length tau behave like ideal pulses with the
    # gap lengthened by 4 tau / pi
    tau = pi_half_time(OMEGA_R)
    gap = 100e-6
    t_eff = ramsey_effective_gap(gap, OMEGA_R)
    assert t_eff == pytest.approx(gap + 4 * tau / math.pi, rel=1e-12)
    for delta in TWO_PI * np.linspace(-5e3, 5e3, 11):
        seq = ramsey_sequence(OMEGA_R, gap, delta)
        p = run_sequence(QubitState.ket0(), seq).p1
        assert p == pytest.approx(
            0.5 * (1 + math.cos(delta * t_eff)), abs=1e-3)


def test_sequence_population_damps_free_segments_only():
    tau = pi_half_time(OMEGA_R)
    gap, t2 = 300e-6, 870e-6
    seq = ramsey_sequence(OMEGA_R, gap, 0.0)
    p = sequence_population(seq, t2_s=t2)
    assert p == pytest.approx(0.5 * (1 + math.exp(-gap / t2)), abs=1e-6)
    # no free evolution, no damping
    drive_only = rabi_sequence(OMEGA_R, tau)
    assert sequence_population(drive_only, t2_s=t2) == pytest.approx(
        sequence_population(drive_only), abs=1e-12)


def test_sequence_text_round_trip():
    seq = PulseSequence((
        DrivePulse(OMEGA_R, 0.25e-6, delta=TWO_PI * 1e3, phase=0.5),
        FreeEvolution(100e-6, delta=TWO_PI * 1e3),
        DrivePulse(OMEGA_R, 0.25e-6),
    ))
    text = seq.to_text()
    back = PulseSequence.from_text(text)
    assert back == seq
    assert back.to_text() == text
    assert "DRIVE" in text and "FREE" in text


def test_sequence_text_rejects_malformed():
    with pytest.raises(ValueError):
        PulseSequence.from_text("DRIVE omega_r_hz=1 bogus=2\n")
    with pytest.raises(ValueError):
        PulseSequence.from_text("WAIT t_s=1\n")


def test_drive_pulse_carries_effective_detuning():
    drive = RamanDrive(TWO_PI * 2e9, TWO_PI * 1e9, DELTA_1,
                       include_light_shift=True)
    pulse = drive_pulse(drive, 1e-6)
    assert pulse.omega_r == drive.omega_r
    assert pulse.delta == drive.effective_detuning


# ---------------------------------------------------------------------------
# three-level reference

def test_lambda_oracle_validates_effective_rabi():
    # drive the full three-level system with no elimination; the ground
    # populations must oscillate at Omega1 Omega2 / 2 Delta
    omega = TWO_PI * 1e9
    delta1 = -TWO_PI * 41e9
    omega_r = abs(raman_rabi_frequency(omega, omega, delta1))
    shift = differential_light_shift(omega, omega, delta1)
    assert shift == 0.0
    t_pi = pi_time(omega_r)
    pops = lambda_populations(omega, omega, delta1, t_pi)
    # transfer at the effective pi time, small (Omega/Delta)^2 leakage
    leak = (omega / delta1) ** 2
    assert pops[1] == pytest.approx(1.0, abs=4 * leak)
    assert pops[2] < 1.5 * leak


def test_lambda_oracle_excited_population_bounded():
    omega = TWO_PI * 1e9
    for frac in (0.25, 0.5, 0.75):
        omega_r = abs(raman_rabi_frequency(omega, omega, DELTA_1))
        pops = lambda_populations(omega, omega, DELTA_1,
                                  frac * pi_time(omega_r))
        assert pops[2] < 1.5 * (omega / DELTA_1) ** 2


def test_lambda_oracle_half_transfer():
    omega = TWO_PI * 1e9
    omega_r = abs(raman_rabi_frequency(omega, omega, DELTA_1))
    pops = lambda_populations(omega, omega, DELTA_1, pi_half_time(omega_r))
    assert pops[1] == pytest.approx(0.5, abs=2e-3)


def test_lambda_oracle_asymmetric_legs_light_shift():
    # unequal legs shift the two-photon resonance; driving at the
    # compensating detuning (effective detuning zero) restores full
    # transfer
    o1, o2 = TWO_PI * 1.4e9, TWO_PI * 0.7e9
    omega_r = abs(raman_rabi_frequency(o1, o2, DELTA_1))
    shift = differential_light_shift(o1, o2, DELTA_1)
    assert shift != 0.0
    on_res = lambda_populations(o1, o2, DELTA_1, pi_time(omega_r),
                                delta_two_photon=-shift)
    off_res = lambda_populations(o1, o2, DELTA_1, pi_time(omega_r),
                                 delta_two_photon=0.0)
    leak = max((o1 / DELTA_1) ** 2, (o2 / DELTA_1) ** 2)
    assert on_res[1] == pytest.approx(1.0, abs=6 * leak)
    assert on_res[1] > off_res[1]


def test_lambda_oracle_matches_two_level_time_series():
    omega = TWO_PI * 1e9
    omega_r = abs(raman_rabi_frequency(omega, omega, DELTA_1))
    leak = (omega / DELTA_1) ** 2
    for frac in (0.2, 0.6, 1.4):
        t = frac * pi_time(omega_r)
        three = lambda_populations(omega, omega, DELTA_1, t)
        two = float(rabi_population(omega_r, 0.0, t))
        assert three[1] == pytest.approx(two, abs=10 * leak)


def test_propagate_constant_norm_preserved():
    h = lambda_populations  # noqa: F841  (documentation of intent)
    from fortsim.dynamics import lambda_hamiltonian
    ham = lambda_hamiltonian(TWO_PI * 1e9, TWO_PI * 1e9, DELTA_1, 0.0)
    psi = propagate_constant(ham, np.array([1, 0, 0], dtype=complex),
                             0.7e-6)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-8)
