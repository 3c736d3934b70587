"""Command-line entry point: config handling, runners, file output.

Exit codes: 0 success, 2 configuration error (the message names the
offending key), 3 fit non-convergence (the dataset is still written).

Config files are flat ``key = value`` text with ``#`` comments; every
key carries its unit in its name and defaults to the published
operating point.  All output files start with ``#``-prefixed metadata
echoing the resolved configuration and seed, so a run can be reproduced
from any of its outputs.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .addressing import magnetic_gradient_required
from .core import AtomSpecies, angular_to_hz, hz_to_angular
from .dynamics import RamanDrive, pi_half_time
from .experiments import (
    ScanConfig,
    ScanDataset,
    figure_of_merit,
    format_value,
    fringe_grid,
    run_contrast_decay,
    run_crosstalk_scan,
    run_rabi_scan,
    run_ramsey_scan,
)
from .fitting import FitResult, fit_fringe, fit_rabi
from .optics import GaussianBeam, TrapArray, crosstalk_ratio, trap_depth_kelvin
from .stochastics import DetectionModel, NoiseModel

EXPERIMENTS = (
    "rabi", "crosstalk", "ramsey", "contrast-decay", "trap", "gradient",
    "headline", "reproduce-fig2", "reproduce-fig3", "reproduce-fig4",
)


class ConfigError(Exception):
    """Invalid configuration; always names the offending key."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


def _gt0(v):
    return v > 0


def _ge0(v):
    return v >= 0


def _unit(v):
    return 0.0 <= v < 1.0


# key -> (type tag, default, validator, constraint text)
PARAMS = {
    # drive
    "omega_r_mhz": ("float", 1.36, _gt0, "must be > 0"),
    "delta_one_photon_ghz": ("float", -41.0, lambda v: v != 0,
                             "must be nonzero"),
    "delta_two_photon_khz": ("float", 0.0, None, ""),
    "include_light_shift": ("bool", False, None, ""),
    "drive_power_uw": ("float", 45.0, _ge0, "must be >= 0"),
    # coherence and noise
    "t2_us": ("float", 870.0, _gt0, "must be > 0"),
    "dephasing_mode": ("choice", "exponential",
                       ("exponential", "quasi_static"), ""),
    "atom_temperature_uk": ("float", 70.0, _gt0, "must be > 0"),
    "trap_lifetime_ms": ("float", 780.0, _gt0, "must be > 0"),
    "normalization_drift": ("float", 0.10, _unit, "must be in [0, 1)"),
    "poisson_loading": ("bool", True, None, ""),
    "state_prep_residual": ("float", 0.0, _unit, "must be in [0, 1)"),
    "apply_probe_loss": ("bool", False, None, ""),
    # geometry and optics
    "separation_um": ("float", 8.0, _gt0, "must be > 0"),
    "raman_waist_um": ("float", 4.1, _gt0, "must be > 0"),
    "trap_power_mw": ("float", 80.0, _ge0, "must be >= 0"),
    "trap_waist_um": ("float", 2.7, _gt0, "must be > 0"),
    "trap_wavelength_nm": ("float", 1010.0, _gt0, "must be > 0"),
    "pointing_offset_um": ("float", 0.0, None, ""),
    # detection
    "photoelectron_rate_hz": ("float", 2100.0, _gt0, "must be > 0"),
    "probe_time_ms": ("float", 10.0, _gt0, "must be > 0"),
    "background_rate_hz": ("float", 0.0, _ge0, "must be >= 0"),
    "n_atoms": ("int", 10, lambda v: v >= 1, "must be >= 1"),
    "shots": ("int", 12, lambda v: v >= 1, "must be >= 1"),
    # addressing
    "bias_field_g": ("float", 10.7, _ge0, "must be >= 0"),
    "max_pulse_us": ("float", 43.0, _gt0, "must be > 0"),
    "sensitivity_rad": ("float", math.pi / 6.0,
                        lambda v: 0 < v <= math.pi, "must be in (0, pi]"),
    "gradient_target_rabi_mhz": ("float", 1.0, _gt0, "must be > 0"),
    "gradient_crosstalk": ("float", 1e-3, lambda v: 0 < v < 1,
                           "must be in (0, 1)"),
    "gradient_dfdb_hz_per_t": ("float", 1.4e10, _gt0, "must be > 0"),
    "gradient_model": ("choice", "amplitude",
                       ("amplitude", "probability"), ""),
    # scan grids
    "rabi_t_max_us": ("float", 1.5, _gt0, "must be > 0"),
    "rabi_points": ("int", 40, lambda v: v >= 8, "must be >= 8"),
    "ramsey_gap_us": ("float", 100.0, _gt0, "must be > 0"),
    "ramsey_points": ("int", 81, lambda v: v >= 8, "must be >= 8"),
    "ramsey_span_cycles": ("float", 2.5, _gt0, "must be > 0"),
    "decay_gaps_us": ("floats", (100.0, 300.0, 1000.0, 3000.0),
                      lambda v: len(v) >= 3 and min(v) > 0
                      and len(set(v)) == len(v),
                      "needs >= 3 distinct positive values"),
    # timeline bookkeeping (recorded in output headers, not simulated)
    "pump_time_ms": ("float", 8.0, _ge0, "must be >= 0"),
    "mot_wait_ms": ("float", 100.0, _ge0, "must be >= 0"),
    "probe_stark_shift_mhz": ("float", 40.0, None, ""),
    # species overrides
    "hyperfine_splitting_khz": ("float", 6_834_683.0, _gt0, "must be > 0"),
    "d2_wavelength_nm": ("float", 780.24, _gt0, "must be > 0"),
    "d1_wavelength_nm": ("float", 794.98, _gt0, "must be > 0"),
    "d2_linewidth_mhz": ("float", 6.07, _gt0, "must be > 0"),
    "gf_lower": ("float", -0.5, None, ""),
    "gf_upper": ("float", 0.5, None, ""),
    "bohr_magneton_mhz_per_g": ("float", 1.3996, _gt0, "must be > 0"),
}

_TRUE = {"true", "on", "yes", "1"}
_FALSE = {"false", "off", "no", "0"}


def _parse_value(key: str, text: str):
    tag, _default, check, constraint = PARAMS[key]
    text = text.strip()
    try:
        if tag == "float":
            value = float(text)
        elif tag == "int":
            value = int(text)
        elif tag == "bool":
            lowered = text.lower()
            if lowered in _TRUE:
                value = True
            elif lowered in _FALSE:
                value = False
            else:
                raise ValueError
        elif tag == "choice":
            value = text.lower().replace("-", "_")
            if value not in check:
                raise ConfigError(key,
                                  f"must be one of {', '.join(check)}")
            return value
        elif tag == "floats":
            value = tuple(float(part) for part in text.split(",")
                          if part.strip())
        else:  # pragma: no cover
            raise AssertionError(tag)
    except ConfigError:
        raise
    except ValueError:
        raise ConfigError(key, f"cannot parse {text!r} as {tag}") from None
    if check is not None and tag != "choice" and not check(value):
        raise ConfigError(key, constraint)
    return value


def parse_config_text(text: str) -> dict:
    """Raw key -> value-string pairs from flat config text.

    One pair per line, ``#`` starts a comment, later duplicates win.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(stripped.split()[0],
                              f"line {lineno} is not 'key = value'")
        key, _, value = stripped.partition("=")
        raw[key.strip()] = value.strip()
    return raw


def load_params(config_path=None, overrides=()) -> dict:
    """Defaults, then the config file, then --set overrides; validated."""
    raw = {}
    if config_path is not None:
        try:
            raw.update(parse_config_text(Path(config_path).read_text()))
        except OSError as exc:
            raise ConfigError("config", f"cannot read {config_path}: {exc}")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(item, "--set expects key=value")
        key, _, value = item.partition("=")
        raw[key.strip()] = value.strip()
    params = {key: spec[1] for key, spec in PARAMS.items()}
    for key, text in raw.items():
        if key not in PARAMS:
            raise ConfigError(key, "unknown configuration key")
        params[key] = _parse_value(key, text)
    return params


# ---------------------------------------------------------------------------
# materialization

def build_species(p: dict) -> AtomSpecies:
    return AtomSpecies(
        hyperfine_splitting_hz=p["hyperfine_splitting_khz"] * 1e3,
        d2_wavelength_m=p["d2_wavelength_nm"] * 1e-9,
        d1_wavelength_m=p["d1_wavelength_nm"] * 1e-9,
        d2_linewidth_rad_s=hz_to_angular(p["d2_linewidth_mhz"] * 1e6),
        gf_lower=p["gf_lower"],
        gf_upper=p["gf_upper"],
        bohr_magneton_hz_per_g=p["bohr_magneton_mhz_per_g"] * 1e6,
    )


def build_drive(p: dict, species: AtomSpecies) -> RamanDrive:
    try:
        return RamanDrive.from_effective(
            omega_r=hz_to_angular(p["omega_r_mhz"] * 1e6),
            delta_one_photon=hz_to_angular(p["delta_one_photon_ghz"] * 1e9),
            delta_two_photon=hz_to_angular(p["delta_two_photon_khz"] * 1e3),
            sideband_power_w=p["drive_power_uw"] * 1e-6,
            include_light_shift=p["include_light_shift"],
            linewidth_rad_s=species.d2_linewidth_rad_s,
        )
    except ValueError as exc:
        raise ConfigError("delta_one_photon_ghz", str(exc)) from None


def build_scan_config(p: dict, kind: str, seed: int, noisy: bool,
                      grid=None) -> ScanConfig:
    species = build_species(p)
    drive = build_drive(p, species)
    if grid is None:
        if kind == "rabi":
            grid = tuple(np.linspace(0.0, p["rabi_t_max_us"] * 1e-6,
                                     p["rabi_points"]))
        elif kind == "crosstalk":
            grid = tuple(np.linspace(0.0, p["max_pulse_us"] * 1e-6,
                                     p["rabi_points"]))
        elif kind == "ramsey":
            grid = fringe_grid(p["ramsey_gap_us"] * 1e-6,
                               p["ramsey_span_cycles"], p["ramsey_points"])
        else:
            raise ConfigError("experiment", f"no scan named {kind!r}")
    return ScanConfig(
        kind=kind,
        grid=grid,
        drive=drive,
        array=TrapArray.pair(p["separation_um"] * 1e-6),
        beam=GaussianBeam(p["drive_power_uw"] * 1e-6,
                          p["raman_waist_um"] * 1e-6,
                          species.d2_wavelength_m),
        target="A",
        shots=p["shots"],
        n_atoms=p["n_atoms"],
        detection=DetectionModel(
            photoelectron_rate_hz=p["photoelectron_rate_hz"],
            exposure_s=p["probe_time_ms"] * 1e-3,
            background_rate_hz=p["background_rate_hz"],
            normalization_systematic=p["normalization_drift"]),
        noise=NoiseModel(
            t2_s=p["t2_us"] * 1e-6,
            dephasing_mode=p["dephasing_mode"],
            trap_lifetime_s=p["trap_lifetime_ms"] * 1e-3,
            atom_temperature_k=p["atom_temperature_uk"] * 1e-6),
        seed=seed,
        noisy=noisy,
        poisson_loading=p["poisson_loading"],
        state_prep_residual=p["state_prep_residual"],
        pointing_offset_m=p["pointing_offset_um"] * 1e-6,
        detection_sensitivity_rad=p["sensitivity_rad"],
        apply_probe_loss=p["apply_probe_loss"],
    )


# ---------------------------------------------------------------------------
# serialization

def fit_report_items(fit: FitResult) -> list:
    """FitResult flattened to ordered key-value text pairs.

    Raw parameters are SI (matching the model evaluated on SI x); the
    derived entries repeat the headline numbers in interface units.
    """
    items = [
        ("model", fit.model),
        ("converged", format_value(fit.converged)),
        ("iterations", str(fit.iterations)),
        ("residual_ssr", format_value(float(fit.residual_norm))),
        ("seed_low_confidence", format_value(fit.seed_low_confidence)),
    ]
    for name, value in fit.params.items():
        items.append((name, format_value(float(value))))
        err = fit.stderr.get(name)
        if err is not None:
            items.append((f"{name}_stderr", format_value(float(err))))
    if fit.model == "rabi":
        omega = fit.params["omega"]
        items.append(("frequency_mhz",
                      format_value(angular_to_hz(omega) / 1e6)))
        items.append(("frequency_mhz_stderr", format_value(
            angular_to_hz(fit.stderr.get("omega", math.nan)) / 1e6)))
        items.append(("pi_half_time_ns",
                      format_value(pi_half_time(omega) * 1e9)))
    elif fit.model == "fringe":
        items.append(("contrast",
                      format_value(2.0 * fit.params["contrast_amp"])))
        items.append(("effective_gap_us",
                      format_value(fit.params["omega"] * 1e6)))
        if fit.params["omega"] != 0:
            items.append(("fringe_period_khz", format_value(
                1.0 / fit.params["omega"] / 1e3)))
    elif fit.model == "decay":
        items.append(("t2_us", format_value(fit.params["t2"] * 1e6)))
        items.append(("t2_us_stderr", format_value(
            fit.stderr.get("t2", math.nan) * 1e6)))
    return items


def format_fit_report(fit: FitResult) -> str:
    return "".join(f"{k} = {v}\n" for k, v in fit_report_items(fit))


def parse_fit_report(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def format_dataset_csv(dataset: ScanDataset, fit: FitResult | None = None,
                       extra_params: dict | None = None) -> str:
    """CSV text: '#' metadata header, column header, then the points.

    The metadata echoes the scan's own settings, the remaining resolved
    config keys, and (when present) the fit, so the file alone
    documents how to reproduce itself.
    """
    lines = [f"# {k} = {v}" for k, v in dataset.metadata]
    if extra_params:
        present = {k for k, _ in dataset.metadata}
        for key in PARAMS:
            if key in extra_params and key not in present:
                lines.append(f"# {key} = {format_value(extra_params[key])}")
    if fit is not None:
        lines.extend(f"# fit_{k} = {v}" for k, v in fit_report_items(fit))
    lines.append(f"x,{dataset.x_unit},fraction,stderr")
    for x, frac, err in zip(dataset.x, dataset.fraction, dataset.stderr):
        lines.append(",".join([
            format_value(float(x)), dataset.x_unit,
            format_value(float(frac)), format_value(float(err))]))
    return "\n".join(lines) + "\n"


def parse_dataset_csv(text: str):
    """Inverse of format_dataset_csv.

    Returns (metadata dict, x array, x_unit, fraction array, stderr
    array); raises ValueError if the metadata header or columns are
    missing.
    """
    metadata = {}
    x, fraction, stderr = [], [], []
    unit = None
    saw_header = False
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            metadata[key.strip()] = value.strip()
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise ValueError(f"expected 4 columns, got {line!r}")
        if not saw_header:
            if fields[0] != "x" or fields[2:] != ["fraction", "stderr"]:
                raise ValueError(f"bad column header {line!r}")
            unit = fields[1]
            saw_header = True
            continue
        x.append(float(fields[0]))
        fraction.append(float(fields[2]))
        stderr.append(float(fields[3]))
    if not metadata:
        raise ValueError("missing metadata header")
    if not saw_header:
        raise ValueError("missing column header")
    return (metadata, np.array(x), unit, np.array(fraction),
            np.array(stderr))


def x_to_si(x, unit: str):
    """File-unit x values back to the internal convention."""
    x = np.asarray(x, dtype=float)
    if unit == "us":
        return x * 1e-6
    if unit == "ms":
        return x * 1e-3
    if unit == "khz":
        return hz_to_angular(x * 1e3)
    raise ValueError(f"unknown x unit {unit!r}")


# ---------------------------------------------------------------------------
# commands

def report_headline(p: dict) -> str:
    """The derived headline quantities with their inputs."""
    species = build_species(p)
    drive = build_drive(p, species)
    omega_r = abs(drive.omega_r)
    t2_s = p["t2_us"] * 1e-6
    d = p["separation_um"] * 1e-6
    w = p["raman_waist_um"] * 1e-6
    theory = crosstalk_ratio(d, w)
    bound = p["sensitivity_rad"] / (omega_r * p["max_pulse_us"] * 1e-6)
    beam = GaussianBeam(p["trap_power_mw"] * 1e-3, p["trap_waist_um"] * 1e-6,
                        p["trap_wavelength_nm"] * 1e-9)
    try:
        depth_mk = trap_depth_kelvin(beam, species) * 1e3
    except ValueError as exc:
        raise ConfigError("trap_wavelength_nm", str(exc)) from None
    gradient = magnetic_gradient_required(
        hz_to_angular(p["gradient_target_rabi_mhz"] * 1e6),
        p["gradient_crosstalk"], d, p["gradient_dfdb_hz_per_t"],
        p["gradient_model"])
    lines = [
        "pi/2 time: %.4g ns  [pi / (2 x 2pi x %.4g MHz)]"
        % (pi_half_time(omega_r) * 1e9, p["omega_r_mhz"]),
        "crosstalk theory: %.4g  [exp(-2 d^2/w^2), d = %.4g um, "
        "w = %.4g um]" % (theory, p["separation_um"], p["raman_waist_um"]),
        "crosstalk bound: %.4g  [%.4g rad sensitivity / (Omega_R x %.4g us)]"
        % (bound, p["sensitivity_rad"], p["max_pulse_us"]),
        "T2: %.4g us  [configured]" % p["t2_us"],
        "figure of merit: %.1f  [T2 / (pi/2 time)]"
        % figure_of_merit(t2_s, omega_r),
        "trap depth: %.4g mK  [%.4g mW, waist %.4g um, %.4g nm]"
        % (depth_mk, p["trap_power_mw"], p["trap_waist_um"],
           p["trap_wavelength_nm"]),
        "magnetic gradient required: %.4g T/cm  [%.4g MHz / %.4g at "
        "%.4g um, %.3g Hz/T, %s model]"
        % (gradient, p["gradient_target_rabi_mhz"], p["gradient_crosstalk"],
           p["separation_um"], p["gradient_dfdb_hz_per_t"],
           p["gradient_model"]),
    ]
    return "\n".join(lines) + "\n"


def _write(path: Path, text: str) -> None:
    with open(path, "w", newline="\n") as handle:
        handle.write(text)


def _report_text(items, p: dict) -> str:
    lines = [f"# {key} = {format_value(p[key])}" for key in PARAMS]
    lines.extend(f"{k} = {v}" for k, v in items)
    return "\n".join(lines) + "\n"


def _run_trap(p: dict, out: Path) -> int:
    species = build_species(p)
    beam = GaussianBeam(p["trap_power_mw"] * 1e-3, p["trap_waist_um"] * 1e-6,
                        p["trap_wavelength_nm"] * 1e-9)
    try:
        depth_k = trap_depth_kelvin(beam, species)
    except ValueError as exc:
        raise ConfigError("trap_wavelength_nm", str(exc)) from None
    items = [
        ("trap_depth_mk", format_value(depth_k * 1e3)),
        ("peak_intensity_w_per_m2", format_value(beam.peak_intensity)),
        ("rayleigh_range_um", format_value(beam.rayleigh_range_m * 1e6)),
    ]
    _write(out / "trap_report.txt", _report_text(items, p))
    return 0


def _run_gradient(p: dict, out: Path) -> int:
    gradient = magnetic_gradient_required(
        hz_to_angular(p["gradient_target_rabi_mhz"] * 1e6),
        p["gradient_crosstalk"], p["separation_um"] * 1e-6,
        p["gradient_dfdb_hz_per_t"], p["gradient_model"])
    items = [("gradient_t_per_cm", format_value(gradient)),
             ("gradient_model", p["gradient_model"])]
    _write(out / "gradient_report.txt", _report_text(items, p))
    return 0


def _fit_or_none(fit_call, *args, **kwargs):
    try:
        return fit_call(*args, **kwargs), None
    except ValueError as exc:
        return None, str(exc)


def _run_rabi(p: dict, seed: int, noisy: bool, out: Path,
              stem: str) -> int:
    cfg = build_scan_config(p, "rabi", seed, noisy)
    dataset = run_rabi_scan(cfg)
    fit, fit_error = _fit_or_none(
        fit_rabi, np.array(cfg.grid), np.array(dataset.fraction),
        np.array(dataset.stderr))
    _write(out / f"{stem}.csv", format_dataset_csv(dataset, fit, p))
    if fit is None:
        _write(out / f"{stem}_fit.txt",
               f"model = rabi\nconverged = false\nerror = {fit_error}\n")
        return 3
    _write(out / f"{stem}_fit.txt", format_fit_report(fit))
    return 0 if fit.converged else 3


def _run_crosstalk(p: dict, seed: int, noisy: bool, out: Path,
                   stem: str) -> int:
    cfg = build_scan_config(p, "crosstalk", seed, noisy)
    monitored = cfg.array.sites[1].label
    dataset, bound = run_crosstalk_scan(cfg, monitored)
    _write(out / f"{stem}.csv", format_dataset_csv(dataset, None, p))
    items = [
        ("crosstalk_bound", format_value(float(bound))),
        ("crosstalk_theory", format_value(crosstalk_ratio(
            p["separation_um"] * 1e-6, p["raman_waist_um"] * 1e-6))),
    ]
    _write(out / f"{stem}_report.txt", _report_text(items, p))
    return 0


def _run_ramsey_cmd(p: dict, seed: int, noisy: bool, out: Path,
                    stem: str) -> int:
    cfg = build_scan_config(p, "ramsey", seed, noisy)
    gap_s = p["ramsey_gap_us"] * 1e-6
    dataset = run_ramsey_scan(cfg, gap_s)
    fit, fit_error = _fit_or_none(
        fit_fringe, np.array(cfg.grid), np.array(dataset.fraction),
        np.array(dataset.stderr))
    _write(out / f"{stem}.csv", format_dataset_csv(dataset, fit, p))
    if fit is None:
        _write(out / f"{stem}_fit.txt",
               f"model = fringe\nconverged = false\nerror = {fit_error}\n")
        return 3
    _write(out / f"{stem}_fit.txt", format_fit_report(fit))
    return 0 if fit.converged else 3


def _run_decay(p: dict, seed: int, noisy: bool, out: Path,
               stem: str) -> int:
    cfg = build_scan_config(p, "ramsey", seed, noisy)
    gaps_s = tuple(g * 1e-6 for g in p["decay_gaps_us"])
    result = run_contrast_decay(cfg, gaps_s, p["ramsey_span_cycles"])
    status = 0
    for ds, fit, gap in zip(result.datasets, result.fringe_fits,
                            result.gaps_s):
        label = "%g" % (gap * 1e6)
        _write(out / f"{stem}_fringe_{label}us.csv",
               format_dataset_csv(ds, fit, p))
        if not fit.converged:
            status = 3
    _write(out / f"{stem}.csv",
           format_dataset_csv(result.summary, result.fit, p))
    _write(out / f"{stem}_fit.txt", format_fit_report(result.fit))
    if not result.fit.converged:
        status = 3
    return status


def run(kind: str, p: dict, seed: int, noisy: bool, out: Path) -> int:
    """Dispatch one experiment; returns the process exit code."""
    out.mkdir(parents=True, exist_ok=True)
    if kind == "headline":
        sys.stdout.write(report_headline(p))
        return 0
    if kind == "trap":
        return _run_trap(p, out)
    if kind == "gradient":
        return _run_gradient(p, out)
    if kind in ("rabi", "reproduce-fig2"):
        stem = "rabi" if kind == "rabi" else "fig2a"
        status = _run_rabi(p, seed, noisy, out, stem)
        if kind == "reproduce-fig2":
            status = max(status, _run_crosstalk(p, seed, noisy, out,
                                                "fig2b"))
        return status
    if kind == "crosstalk":
        return _run_crosstalk(p, seed, noisy, out, "crosstalk")
    if kind in ("ramsey", "reproduce-fig3"):
        stem = "ramsey" if kind == "ramsey" else "fig3"
        return _run_ramsey_cmd(p, seed, noisy, out, stem)
    if kind in ("contrast-decay", "reproduce-fig4"):
        stem = "contrast_decay" if kind == "contrast-decay" else "fig4"
        return _run_decay(p, seed, noisy, out, stem)
    raise ConfigError("experiment", f"unknown experiment {kind!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fortsim",
        description="Simulate and analyze site-addressed hyperfine-qubit "
                    "experiments; writes CSV datasets and fit reports.")
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", metavar="PATH",
                        help="flat key = value config file")
    parser.add_argument("--seed", type=int, default=0,
                        help="RNG seed recorded in all outputs")
    parser.add_argument("--noise", choices=("on", "off"), default="on")
    parser.add_argument("--out", metavar="DIR", default=".")
    parser.add_argument("--set", dest="overrides", action="append",
                        default=[], metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
    args = parser.parse_args(argv)
    if args.seed < 0 or args.seed >= 2**64:
        print("config error: seed: must fit in an unsigned 64-bit integer",
              file=sys.stderr)
        return 2
    try:
        params = load_params(args.config, args.overrides)
        return run(args.experiment, params, args.seed, args.noise == "on",
                   Path(args.out))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
