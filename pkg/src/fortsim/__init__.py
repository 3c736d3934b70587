"""Simulation and analysis of site-addressed hyperfine qubits in
optical tweezers: two-photon drives, addressing crosstalk, detection
noise, and the fitting used to pull numbers back out."""

from .core import (
    RB87,
    AtomSpecies,
    QubitState,
    angular_to_hz,
    hz_to_angular,
)
from .dynamics import (
    PulseSequence,
    RamanDrive,
    differential_light_shift,
    figure_of_merit,
    pi_half_time,
    pi_time,
    rabi_population,
    raman_rabi_frequency,
    ramsey_probability,
    run_sequence,
)
from .optics import (
    GaussianBeam,
    TrapArray,
    crosstalk_ratio,
    steer_beam,
    trap_depth_kelvin,
)
from .addressing import (
    CrosstalkExperiment,
    ZeemanConfig,
    crosstalk_bound,
    magnetic_gradient_required,
    site_drive_map,
    zeeman_shift_hz,
)
from .stochastics import (
    DetectionModel,
    NoiseModel,
    RngStream,
    measure_fraction,
    simulate_counts,
)
from .fitting import (
    FitResult,
    fit_exponential_decay,
    fit_fringe,
    fit_rabi,
    periodogram_frequency,
)
from .experiments import (
    ContrastDecayResult,
    ScanConfig,
    ScanDataset,
    fringe_contrast,
    fringe_grid,
    run_contrast_decay,
    run_crosstalk_scan,
    run_rabi_scan,
    run_ramsey_scan,
)

__all__ = [
    "RB87",
    "AtomSpecies",
    "QubitState",
    "angular_to_hz",
    "hz_to_angular",
    "PulseSequence",
    "RamanDrive",
    "differential_light_shift",
    "figure_of_merit",
    "pi_half_time",
    "pi_time",
    "rabi_population",
    "raman_rabi_frequency",
    "ramsey_probability",
    "run_sequence",
    "GaussianBeam",
    "TrapArray",
    "crosstalk_ratio",
    "steer_beam",
    "trap_depth_kelvin",
    "CrosstalkExperiment",
    "ZeemanConfig",
    "crosstalk_bound",
    "magnetic_gradient_required",
    "site_drive_map",
    "zeeman_shift_hz",
    "DetectionModel",
    "NoiseModel",
    "RngStream",
    "measure_fraction",
    "simulate_counts",
    "FitResult",
    "fit_exponential_decay",
    "fit_fringe",
    "fit_rabi",
    "periodogram_frequency",
    "ContrastDecayResult",
    "ScanConfig",
    "ScanDataset",
    "fringe_contrast",
    "fringe_grid",
    "run_contrast_decay",
    "run_crosstalk_scan",
    "run_rabi_scan",
    "run_ramsey_scan",
]

__version__ = "0.1.0"
