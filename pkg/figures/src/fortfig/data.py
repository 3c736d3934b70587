"""Readers for the simulator's file formats.

This package talks to the simulator only through its documented files:
CSV datasets ('#' metadata lines, an x,<x-unit>,fraction,stderr header,
unit token repeated per row) and flat key = value fit reports.  Nothing
here imports the simulator.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Dataset:
    metadata: dict
    x: np.ndarray
    x_unit: str
    fraction: np.ndarray
    stderr: np.ndarray

    @property
    def kind(self) -> str:
        return self.metadata.get("kind", "")


def read_dataset(path) -> Dataset:
    """Parse one CSV dataset; refuses files without the metadata header
    or with malformed columns."""
    metadata = {}
    x, fraction, stderr = [], [], []
    unit = None
    saw_header = False
    with open(path) as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                metadata[key.strip()] = value.strip()
                continue
            fields = line.split(",")
            if len(fields) != 4:
                raise ValueError(
                    f"{path}: expected 4 columns, got {line!r}")
            if not saw_header:
                if fields[0] != "x" or fields[2] != "fraction" \
                        or fields[3] != "stderr":
                    raise ValueError(f"{path}: bad column header {line!r}")
                unit = fields[1]
                saw_header = True
                continue
            x.append(float(fields[0]))
            fraction.append(float(fields[2]))
            stderr.append(float(fields[3]))
    if not metadata:
        raise ValueError(f"{path}: missing metadata header")
    if not saw_header:
        raise ValueError(f"{path}: missing column header")
    if not x:
        raise ValueError(f"{path}: no data points")
    return Dataset(metadata, np.array(x), unit, np.array(fraction),
                   np.array(stderr))


def read_fit_report(path) -> dict:
    """Flat key = value fit report as a string dict."""
    out = {}
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}: not 'key = value': {line!r}")
            out[key.strip()] = value.strip()
    if "model" not in out:
        raise ValueError(f"{path}: fit report lacks a model entry")
    return out


# fitted models, reconstructed from report parameters.  Raw report
# parameters are SI, file x columns are in the unit named in the header.

def _x_si(x, unit):
    x = np.asarray(x, dtype=float)
    if unit == "us":
        return x * 1e-6
    if unit == "ms":
        return x * 1e-3
    if unit == "khz":
        return 2.0 * np.pi * x * 1e3
    raise ValueError(f"unknown x unit {unit!r}")


def evaluate_fit(report: dict, x, x_unit: str) -> np.ndarray:
    """The fitted curve at file-unit x positions."""
    model = report["model"]
    xs = _x_si(x, x_unit)
    if model == "rabi":
        a, w = float(report["amplitude"]), float(report["omega"])
        return a * np.sin(w * xs / 2.0) ** 2
    if model == "fringe":
        off = float(report["offset"])
        c = float(report["contrast_amp"])
        w = float(report["omega"])
        ph = float(report["phase"])
        return off + c * np.cos(w * xs + ph)
    if model == "decay":
        c0, t2 = float(report["c0"]), float(report["t2"])
        return c0 * np.exp(-xs / t2)
    raise ValueError(f"unknown fit model {model!r}")
