"""Scan runners: the four measurements, from drive settings to datasets.

Each runner evaluates the closed-form transfer probability from the
dynamics module on a grid, then either records it directly (noiseless
mode) or pushes it through the detection chain in stochastics.  Noise
comes from a per-run RngStream tree keyed by the seed: child 0 holds the
dataset-level calibration draw, child i+1 the i-th grid point, so
results do not depend on evaluation order and reruns are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from datetime import datetime, timezone

import numpy as np

from .addressing import crosstalk_bound, site_drive_map
from .core import TWO_PI, angular_to_hz
from .dynamics import (
    RamanDrive,
    figure_of_merit,  # noqa: F401  (headline quantity lives with the runners)
    rabi_population,
    ramsey_probability,
)
from .fitting import FitResult, fit_exponential_decay, fit_fringe
from .optics import GaussianBeam, TrapArray
from .stochastics import (
    DetectionModel,
    NoiseModel,
    RngStream,
    measure_fraction_per_shot,
    normalization_factor,
    predicted_fraction_stderr,
    sample_quasi_static_detuning,
    survival_probability,
)

SCAN_KINDS = ("rabi", "crosstalk", "ramsey")

# contrast estimates are clamped into (this, 1] before the decay fit
MIN_CONTRAST = 1e-6


@dataclass(frozen=True)
class ScanConfig:
    """Everything one scan needs.  Grid values are SI (seconds for
    durations, rad/s for detunings); the grid is stored sorted, so
    results cannot depend on the order the caller listed points in."""

    kind: str
    grid: tuple
    drive: RamanDrive
    array: TrapArray
    beam: GaussianBeam
    target: str = "A"
    shots: int = 12
    n_atoms: int = 10
    detection: DetectionModel = DetectionModel()
    noise: NoiseModel = NoiseModel()
    seed: int = 0
    noisy: bool = True
    poisson_loading: bool = True
    state_prep_residual: float = 0.0
    pointing_offset_m: float = 0.0
    detection_sensitivity_rad: float = math.pi / 6.0
    apply_probe_loss: bool = False

    def __post_init__(self) -> None:
        if self.kind not in SCAN_KINDS:
            raise ValueError(f"kind must be one of {SCAN_KINDS}")
        grid = tuple(sorted(float(x) for x in self.grid))
        if not grid:
            raise ValueError("grid must be nonempty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid values must be distinct")
        object.__setattr__(self, "grid", grid)
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")
        if not 0.0 <= self.state_prep_residual < 1.0:
            raise ValueError("state_prep_residual must be in [0, 1)")
        self.array.site(self.target)    # raises on unknown label


@dataclass(frozen=True)
class ScanDataset:
    """One scan's output: file-unit x values with measured fractions.

    created_at is bookkeeping only and never serialized, so identical
    configurations produce identical output files.
    """

    kind: str
    x: tuple
    x_unit: str
    fraction: tuple
    stderr: tuple
    metadata: tuple     # ordered (key, value-string) pairs
    created_at: str = ""

    def __post_init__(self) -> None:
        if not (len(self.x) == len(self.fraction) == len(self.stderr)):
            raise ValueError("column lengths differ")

    def metadata_dict(self) -> dict:
        return dict(self.metadata)


def format_value(value) -> str:
    """Canonical text form for metadata values (deterministic, exact
    round trip for floats)."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))  # plain repr even for numpy scalars
    if isinstance(value, (tuple, list)):
        return ",".join(format_value(v) for v in value)
    return str(value)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _config_metadata(cfg: ScanConfig) -> list:
    """The resolved-scan echo that heads every output file."""
    drive = cfg.drive
    meta = [
        ("kind", cfg.kind),
        ("seed", cfg.seed),
        ("noise", "on" if cfg.noisy else "off"),
        ("shots", cfg.shots),
        ("n_atoms", cfg.n_atoms),
        ("poisson_loading", cfg.poisson_loading),
        ("omega_r_mhz", abs(angular_to_hz(drive.omega_r)) / 1e6),
        ("delta_one_photon_ghz", angular_to_hz(drive.delta_one_photon) / 1e9),
        ("delta_two_photon_khz", angular_to_hz(drive.delta_two_photon) / 1e3),
        ("include_light_shift", drive.include_light_shift),
        ("t2_us", cfg.noise.t2_s * 1e6),
        ("dephasing_mode", cfg.noise.dephasing_mode),
        ("atom_temperature_uk", cfg.noise.atom_temperature_k * 1e6),
        ("trap_lifetime_ms", cfg.noise.trap_lifetime_s * 1e3),
        ("photoelectron_rate_hz", cfg.detection.photoelectron_rate_hz),
        ("probe_time_ms", cfg.detection.exposure_s * 1e3),
        ("background_rate_hz", cfg.detection.background_rate_hz),
        ("normalization_drift", cfg.detection.normalization_systematic),
        ("separation_um", cfg.array.separation_m * 1e6
         if len(cfg.array.sites) > 1 else 0.0),
        ("raman_waist_um", cfg.beam.waist_m * 1e6),
        ("target", cfg.target),
        ("pointing_offset_um", cfg.pointing_offset_m * 1e6),
        ("state_prep_residual", cfg.state_prep_residual),
        ("apply_probe_loss", cfg.apply_probe_loss),
        ("grid_points", len(cfg.grid)),
    ]
    return [(k, format_value(v)) for k, v in meta]


def _probe_survival(cfg: ScanConfig) -> float:
    if not cfg.apply_probe_loss:
        return 1.0
    return survival_probability(cfg.detection.exposure_s,
                                cfg.noise.trap_lifetime_s)


def _prepare(cfg: ScanConfig, p):
    """Fold the state-preparation residual into a transfer probability.

    Atoms never pumped out of the upper manifold stay bright in the
    readout, adding a constant offset rather than participating in the
    drive.
    """
    r = cfg.state_prep_residual
    return (1.0 - r) * np.asarray(p, dtype=float) + r


def _measure_grid(cfg: ScanConfig, p_grid, root: RngStream,
                  systematic: float):
    """Run the detection chain at every grid point (noisy mode)."""
    survival = _probe_survival(cfg)
    fractions, stderrs = [], []
    for i, p in enumerate(p_grid):
        stream = root.child(i + 1)
        frac, err = measure_fraction_per_shot(
            np.full(cfg.shots, p), cfg.n_atoms, cfg.detection,
            stream.child(1), poisson_loading=cfg.poisson_loading,
            survival=survival, systematic_factor=systematic)
        fractions.append(frac)
        stderrs.append(err)
    return fractions, stderrs


def _noiseless_grid(cfg: ScanConfig, p_grid):
    """Record the model values directly, with the standard error the
    shot statistics would have produced (so error bars mean the same
    thing in both modes)."""
    fractions = [float(p) for p in p_grid]
    stderrs = [predicted_fraction_stderr(min(max(p, 0.0), 1.0), cfg.n_atoms,
                                         cfg.shots, cfg.detection)
               for p in p_grid]
    return fractions, stderrs


def _addressed_rabi(cfg: ScanConfig, site: str) -> float:
    """Effective Omega_R at a site for the steered beam (signed)."""
    return site_drive_map(cfg.array, cfg.beam, cfg.drive, cfg.target,
                          cfg.pointing_offset_m)[site]


def run_rabi_scan(cfg: ScanConfig) -> ScanDataset:
    """Transfer fraction vs pulse duration at the addressed site."""
    if cfg.kind != "rabi":
        raise ValueError("config kind must be 'rabi'")
    omega = _addressed_rabi(cfg, cfg.target)
    delta = cfg.drive.effective_detuning
    p_grid = _prepare(cfg, [rabi_population(omega, delta, t)
                            for t in cfg.grid])
    if cfg.noisy:
        root = RngStream(cfg.seed)
        systematic = normalization_factor(
            root.child(0), cfg.detection.normalization_systematic)
        fractions, stderrs = _measure_grid(cfg, p_grid, root, systematic)
    else:
        fractions, stderrs = _noiseless_grid(cfg, p_grid)
    return ScanDataset(
        kind="rabi",
        x=tuple(t * 1e6 for t in cfg.grid), x_unit="us",
        fraction=tuple(fractions), stderr=tuple(stderrs),
        metadata=tuple(_config_metadata(cfg)),
        created_at=_now())


def run_crosstalk_scan(cfg: ScanConfig, monitored: str):
    """Transfer fraction at a neighbor while driving the target site.

    Returns (dataset, bound): the scan at the monitored site plus the
    experimental upper bound on relative Rabi frequency implied by the
    longest pulse in the grid.
    """
    if cfg.kind != "crosstalk":
        raise ValueError("config kind must be 'crosstalk'")
    cfg.array.site(monitored)
    omega = _addressed_rabi(cfg, monitored)
    delta = cfg.drive.effective_detuning
    p_grid = _prepare(cfg, [rabi_population(omega, delta, t)
                            for t in cfg.grid])
    if cfg.noisy:
        root = RngStream(cfg.seed)
        systematic = normalization_factor(
            root.child(0), cfg.detection.normalization_systematic)
        fractions, stderrs = _measure_grid(cfg, p_grid, root, systematic)
    else:
        fractions, stderrs = _noiseless_grid(cfg, p_grid)
    bound = crosstalk_bound(cfg.detection_sensitivity_rad,
                            cfg.drive.omega_r, cfg.grid[-1])
    meta = _config_metadata(cfg) + [
        ("monitored", monitored),
        ("crosstalk_bound", format_value(float(bound))),
    ]
    dataset = ScanDataset(
        kind="crosstalk",
        x=tuple(t * 1e6 for t in cfg.grid), x_unit="us",
        fraction=tuple(fractions), stderr=tuple(stderrs),
        metadata=tuple(meta),
        created_at=_now())
    return dataset, bound


def _ramsey_populations(cfg: ScanConfig, gap_s: float):
    """Noiseless fringe values for the active dephasing mode."""
    noise = cfg.noise
    if noise.dephasing_mode == "exponential":
        t2 = noise.t2_s
    else:
        # the quasi-static ensemble average has the same closed form
        t2 = 1.0 / noise.quasi_static_halfwidth
    return [ramsey_probability(d, gap_s, t2) for d in cfg.grid]


def _run_ramsey(cfg: ScanConfig, gap_s: float, root: RngStream,
                systematic: float) -> ScanDataset:
    if gap_s < 0:
        raise ValueError("gap_s must be >= 0")
    if cfg.noisy and cfg.noise.dephasing_mode == "quasi_static":
        fractions, stderrs = [], []
        survival = _probe_survival(cfg)
        for i, delta in enumerate(cfg.grid):
            stream = root.child(i + 1)
            offsets = sample_quasi_static_detuning(
                cfg.noise, stream.child(0), size=cfg.shots)
            p_shots = _prepare(cfg, ramsey_probability(
                delta + offsets, gap_s, math.inf))
            frac, err = measure_fraction_per_shot(
                p_shots, cfg.n_atoms, cfg.detection, stream.child(1),
                poisson_loading=cfg.poisson_loading, survival=survival,
                systematic_factor=systematic)
            fractions.append(frac)
            stderrs.append(err)
    else:
        p_grid = _prepare(cfg, _ramsey_populations(cfg, gap_s))
        if cfg.noisy:
            fractions, stderrs = _measure_grid(cfg, p_grid, root, systematic)
        else:
            fractions, stderrs = _noiseless_grid(cfg, p_grid)
    meta = _config_metadata(cfg) + [("ramsey_gap_us", format_value(gap_s * 1e6))]
    return ScanDataset(
        kind="ramsey",
        x=tuple(angular_to_hz(d) / 1e3 for d in cfg.grid), x_unit="khz",
        fraction=tuple(fractions), stderr=tuple(stderrs),
        metadata=tuple(meta),
        created_at=_now())


def run_ramsey_scan(cfg: ScanConfig, gap_s: float) -> ScanDataset:
    """Transfer fraction vs two-photon detuning for a fixed Ramsey gap."""
    if cfg.kind != "ramsey":
        raise ValueError("config kind must be 'ramsey'")
    root = RngStream(cfg.seed)
    systematic = 1.0
    if cfg.noisy:
        systematic = normalization_factor(
            root.child(0), cfg.detection.normalization_systematic)
    return _run_ramsey(cfg, gap_s, root, systematic)


def fringe_contrast(fit: FitResult):
    """Fringe contrast (peak-to-trough over mean-free range) and its
    standard error, clamped into (0, 1] for the decay fit."""
    contrast = 2.0 * fit.params["contrast_amp"]
    stderr = 2.0 * fit.stderr.get("contrast_amp", math.nan)
    return min(max(contrast, MIN_CONTRAST), 1.0), stderr


@dataclass(frozen=True)
class ContrastDecayResult:
    gaps_s: tuple
    contrasts: tuple
    contrast_stderrs: tuple
    fit: FitResult
    fringe_fits: tuple
    datasets: tuple
    summary: ScanDataset


def fringe_grid(gap_s: float, span_cycles: float = 2.5,
                points: int = 41) -> tuple:
    """Detuning grid (rad/s) covering +-span_cycles fringes at a gap.

    The fringe period is 1/gap in ordinary frequency, so scaling the
    window with 1/gap keeps the same number of oscillations (and the
    same fit conditioning) at every gap.
    """
    if gap_s <= 0:
        raise ValueError("gap_s must be > 0")
    span_hz = span_cycles / gap_s
    return tuple(TWO_PI * f for f in np.linspace(-span_hz, span_hz, points))


def run_contrast_decay(cfg: ScanConfig, gaps_s,
                       span_cycles: float = 2.5) -> ContrastDecayResult:
    """Fringe scans at several gaps, contrast extraction, and the
    exponential fit of contrast vs gap.

    Each gap gets its own detuning grid (same point count as cfg.grid,
    window scaled to span_cycles fringes).  One normalization
    calibration covers the whole experiment (it is performed once), so
    the systematic scales every fringe alike and lands in c0 rather
    than in the decay constant.
    """
    if cfg.kind != "ramsey":
        raise ValueError("config kind must be 'ramsey'")
    gaps = tuple(sorted(float(g) for g in gaps_s))
    if len(gaps) < 3:
        raise ValueError("need at least 3 gap values")
    if any(b <= a for a, b in zip(gaps, gaps[1:])) or gaps[0] <= 0:
        raise ValueError("gaps must be positive and distinct")
    root = RngStream(cfg.seed)
    systematic = 1.0
    if cfg.noisy:
        systematic = normalization_factor(
            root.child(0), cfg.detection.normalization_systematic)
    datasets, fits, contrasts, contrast_errs = [], [], [], []
    for j, gap in enumerate(gaps):
        gap_cfg = replace(cfg, grid=fringe_grid(gap, span_cycles,
                                                len(cfg.grid)))
        ds = _run_ramsey(gap_cfg, gap, root.child(j + 1), systematic)
        # the fringe frequency is the gap itself; seeding there keeps
        # low-contrast scans from locking onto a noise frequency
        fit = fit_fringe(np.array(gap_cfg.grid), np.array(ds.fraction),
                         np.array(ds.stderr), omega_seed=gap)
        c, c_err = fringe_contrast(fit)
        datasets.append(ds)
        fits.append(fit)
        contrasts.append(c)
        contrast_errs.append(c_err)
    yerr = np.array(contrast_errs)
    use_weights = bool(np.all(np.isfinite(yerr)) and np.all(yerr > 0))
    decay_fit = fit_exponential_decay(
        np.array(gaps), np.array(contrasts),
        yerr if use_weights else None)
    meta = [("kind", "contrast-decay") if k == "kind" else (k, v)
            for k, v in _config_metadata(cfg)]
    meta.append(
        ("decay_gaps_us", ",".join(format_value(g * 1e6) for g in gaps)))
    summary = ScanDataset(
        kind="contrast-decay",
        x=tuple(g * 1e3 for g in gaps), x_unit="ms",
        fraction=tuple(contrasts), stderr=tuple(contrast_errs),
        metadata=tuple(meta),
        created_at=_now())
    return ContrastDecayResult(
        gaps_s=gaps, contrasts=tuple(contrasts),
        contrast_stderrs=tuple(contrast_errs), fit=decay_fit,
        fringe_fits=tuple(fits), datasets=tuple(datasets), summary=summary)
