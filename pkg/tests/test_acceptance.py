"""Acceptance gate: the headline numbers and behaviors this package
exists to reproduce, one test per criterion.

Noisy criteria run the full detection chain (12 shots/point, 10
atoms/site, 2100 counts/s x 10 ms readout) under fixed seeds.
"""

import math
import re

import numpy as np
import pytest

from fortsim.addressing import crosstalk_bound, magnetic_gradient_required
from fortsim.core import RB87, TWO_PI, QubitState
from fortsim.dynamics import (
    RamanDrive,
    drive_hamiltonian,
    drive_propagator,
    figure_of_merit,
    free_propagator,
    lambda_populations,
    pi_half_time,
    pi_time,
    propagate,
    propagate_constant,
    rabi_population,
    raman_rabi_frequency,
)
from fortsim.experiments import (
    ScanConfig,
    fringe_grid,
    run_contrast_decay,
    run_rabi_scan,
)
from fortsim.fitting import fit_rabi, fringe_model, fit_fringe
from fortsim.optics import GaussianBeam, TrapArray, crosstalk_ratio, \
    trap_depth_kelvin
from fortsim.stochastics import DetectionModel, RngStream, simulate_counts, \
    estimate_atoms
from fortsim.cli import main, report_headline, load_params

OMEGA_R = TWO_PI * 1.36e6


def default_scan(kind, grid, seed, noisy=True):
    return ScanConfig(
        kind=kind, grid=grid,
        drive=RamanDrive.from_effective(OMEGA_R, -TWO_PI * 41e9),
        array=TrapArray.pair(8e-6),
        beam=GaussianBeam(45e-6, 4.1e-6, RB87.d2_wavelength_m),
        shots=12, n_atoms=10, detection=DetectionModel(),
        seed=seed, noisy=noisy)


def test_criterion_01_pi_half_time():
    # pi/(2 Omega_R) at 2pi x 1.36 MHz is 183.8 ns, printed in the
    # headline summary; the rounded published value 183 ns agrees to 1%
    text = report_headline(load_params())
    match = re.search(r"pi/2 time: ([0-9.]+) ns", text)
    assert match, text
    printed = float(match.group(1))
    assert printed == pytest.approx(183.8, abs=0.05)
    exact = pi_half_time(OMEGA_R) * 1e9
    assert exact == pytest.approx(183.82, abs=0.01)
    assert abs(exact - 183.0) / 183.0 < 0.01


def test_criterion_02_theoretical_crosstalk():
    # Gaussian-beam overlap at 8 um separation, 4.1 um waist
    assert crosstalk_ratio(8e-6, 4.1e-6) == pytest.approx(4.9e-4,
                                                          rel=0.02)


def test_criterion_03_experimental_crosstalk_bound():
    # pi/6 detectable rotation over the longest 43 us pulse
    assert crosstalk_bound(math.pi / 6, OMEGA_R, 43e-6) == pytest.approx(
        1.4e-3, rel=0.05)


def test_criterion_04_rabi_scan_frequency_recovery():
    grid = tuple(np.linspace(0, 1.5e-6, 40))
    # noiseless: exact model, fit must return the frequency to 1e-6
    clean = run_rabi_scan(default_scan("rabi", grid, seed=0, noisy=False))
    fit = fit_rabi(np.array(grid), np.array(clean.fraction))
    assert fit.converged
    assert fit["omega"] == pytest.approx(OMEGA_R, rel=1e-6)
    # 12-shot noise at fixed seed: within 2%
    noisy = run_rabi_scan(default_scan("rabi", grid, seed=0))
    nfit = fit_rabi(np.array(grid), np.array(noisy.fraction),
                    np.array(noisy.stderr))
    assert nfit.converged
    assert nfit["omega"] == pytest.approx(OMEGA_R, rel=0.02)


GAPS = (100e-6, 300e-6, 1e-3, 3e-3)


def test_criterion_05_contrast_decay_t2_recovery():
    grid = fringe_grid(100e-6, 2.5, 81)
    # noiseless: T2 = 870 us to 1e-6 relative
    clean = run_contrast_decay(
        default_scan("ramsey", grid, seed=0, noisy=False), GAPS)
    assert clean.fit.converged
    assert clean.fit["t2"] == pytest.approx(870e-6, rel=1e-6)
    # 12-shot noise: within 10% for at least 90 of 100 seeds
    hits = 0
    for seed in range(100):
        result = run_contrast_decay(
            default_scan("ramsey", grid, seed=seed), GAPS)
        if result.fit.converged and abs(
                result.fit["t2"] - 870e-6) / 870e-6 < 0.10:
            hits += 1
    assert hits >= 90, f"only {hits}/100 seeds within 10%"


def test_criterion_06_figure_of_merit():
    fom = figure_of_merit(870e-6, OMEGA_R)
    assert 4700 <= fom <= 4800
    # the published 4750 comes from the rounded 183 ns
    assert 870e-6 / 183e-9 == pytest.approx(4754, abs=1)


def test_criterion_07_trap_depth():
    depth_mk = trap_depth_kelvin(
        GaussianBeam(80e-3, 2.7e-6, 1010e-9)) * 1e3
    assert 0.5 <= depth_mk <= 2.0


def test_criterion_08_magnetic_gradient_comparison():
    grad = magnetic_gradient_required(TWO_PI * 1e6, 1e-3, 8e-6, 1.4e10)
    assert grad > 10.0
    assert grad == pytest.approx(89.3, rel=0.01)


def test_criterion_09_detection_counts_and_atom_estimate():
    counts = simulate_counts(1, DetectionModel(), RngStream(17),
                             size=100_000)
    assert counts.mean() == pytest.approx(21.0, rel=0.01)
    assert estimate_atoms(210.0) == pytest.approx(10.0, abs=1e-12)


def test_criterion_10_property_suite(tmp_path):
    rng = np.random.default_rng(3)
    # unitarity of every propagator to 1e-12
    for _ in range(100):
        omega, delta, phase = rng.uniform(-1, 1, 3) * TWO_PI * 5e6
        u = drive_propagator(omega, delta, phase, rng.uniform(0, 5e-6))
        assert np.max(np.abs(u @ u.conj().T - np.eye(2))) < 1e-12
    # closed form vs direct numerical integration to 1e-8
    h = drive_hamiltonian(OMEGA_R, TWO_PI * 0.4e6, 0.7)
    psi = propagate_constant(h, np.array([1, 0], dtype=complex), 1.1e-6,
                             tol=1e-12)
    out = propagate(QubitState.ket0(), OMEGA_R, TWO_PI * 0.4e6, 0.7,
                    1.1e-6)
    assert abs(abs(psi[1]) ** 2 - out.p1) < 1e-8
    # full three-level integration vs the reduced two-level model,
    # agreement within the (Omega/Delta)^2 elimination error
    strong, detuning = TWO_PI * 1e9, -TWO_PI * 41e9
    omega_eff = abs(raman_rabi_frequency(strong, strong, detuning))
    t = pi_time(omega_eff)
    pops = lambda_populations(strong, strong, detuning, t)
    leak = (strong / detuning) ** 2
    assert abs(pops[1] - float(rabi_population(omega_eff, 0, t))) < \
        10 * leak
    # hard-pulse Ramsey composition equals the closed form exactly
    tau = pi_half_time(OMEGA_R)
    for delta in TWO_PI * np.array([-7e3, 1e3, 13e3]):
        u_pulse = drive_propagator(OMEGA_R, 0.0, 0.0, tau)
        psi = u_pulse @ free_propagator(delta, 250e-6) @ u_pulse @ \
            np.array([1, 0], dtype=complex)
        assert abs(psi[1]) ** 2 == pytest.approx(
            0.5 * (1 + math.cos(delta * 250e-6)), abs=1e-12)
    # fit round-trip on exact fringe data to 1e-6
    x = fringe_grid(100e-6, 2.5, 41)
    truth = [0.5, 0.45, 100e-6, 0.2]
    fit = fit_fringe(np.array(x), fringe_model(truth, np.array(x)))
    for name, want in zip(("offset", "contrast_amp", "omega", "phase"),
                          truth):
        assert fit[name] == pytest.approx(want, rel=1e-6)
    # byte-identical rerun of a full pipeline under a fixed seed
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["rabi", "--seed", "33", "--out", str(a)]) == 0
    assert main(["rabi", "--seed", "33", "--out", str(b)]) == 0
    assert (a / "rabi.csv").read_bytes() == (b / "rabi.csv").read_bytes()
    assert (a / "rabi_fit.txt").read_bytes() == \
        (b / "rabi_fit.txt").read_bytes()
