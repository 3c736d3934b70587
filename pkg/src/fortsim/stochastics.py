"""Noise models and reproducible random streams.

All randomness flows through RngStream, a thin wrapper over numpy's
Philox generator keyed by (seed, path).  Streams are identified by where
they sit in a tree, not by draw order, so adding a noise source or
reordering a scan grid never perturbs unrelated draws, and a rerun with
the same seed reproduces every dataset byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEPHASING_MODES = ("exponential", "quasi_static")


@dataclass(frozen=True)
class RngStream:
    """Deterministic random stream keyed by a seed and a tree path."""

    seed: int
    path: tuple[int, ...] = ()
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        object.__setattr__(
            self, "_gen", np.random.Generator(np.random.Philox(ss)))

    def child(self, index: int) -> "RngStream":
        """Independent stream one level down; the same (seed, path,
        index) always yields the same draws."""
        return RngStream(self.seed, self.path + (index,))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen


@dataclass(frozen=True)
class DetectionModel:
    """Fluorescence detection: Poisson photoelectrons per atom plus an
    overall calibration uncertainty of the normalization reference."""

    photoelectron_rate_hz: float = 2100.0
    exposure_s: float = 10e-3
    background_rate_hz: float = 0.0
    normalization_systematic: float = 0.10

    def __post_init__(self) -> None:
        if self.photoelectron_rate_hz < 0 or self.background_rate_hz < 0:
            raise ValueError("rates must be >= 0")
        if self.exposure_s <= 0:
            raise ValueError("exposure_s must be > 0")
        if not 0.0 <= self.normalization_systematic < 1.0:
            raise ValueError("normalization_systematic must be in [0, 1)")

    @property
    def counts_per_atom(self) -> float:
        return self.photoelectron_rate_hz * self.exposure_s

    @property
    def background_counts(self) -> float:
        return self.background_rate_hz * self.exposure_s


@dataclass(frozen=True)
class NoiseModel:
    """Dephasing and trap-loss parameters.

    Exactly one dephasing mode is active: "exponential" applies the
    e^{-T/t2} envelope in closed form; "quasi_static" draws a per-shot
    detuning offset from a Lorentzian whose half-width is calibrated so
    the default temperature reproduces 1/t2.
    """

    t2_s: float = 870e-6
    dephasing_mode: str = "exponential"
    trap_lifetime_s: float = 0.780
    atom_temperature_k: float = 70e-6
    reference_temperature_k: float = 70e-6

    def __post_init__(self) -> None:
        if self.t2_s <= 0:
            raise ValueError("t2_s must be > 0")
        if self.dephasing_mode not in DEPHASING_MODES:
            raise ValueError(
                f"dephasing_mode must be one of {DEPHASING_MODES}")
        if self.trap_lifetime_s <= 0:
            raise ValueError("trap_lifetime_s must be > 0")
        if self.atom_temperature_k <= 0 or self.reference_temperature_k <= 0:
            raise ValueError("temperatures must be > 0")

    @property
    def quasi_static_halfwidth(self) -> float:
        """Lorentzian half-width (rad/s) of the per-shot detuning."""
        return (self.atom_temperature_k
                / self.reference_temperature_k) / self.t2_s

    def survival(self, t_s: float) -> float:
        return survival_probability(t_s, self.trap_lifetime_s)


# ---------------------------------------------------------------------------
# detection statistics

def simulate_counts(n_atoms: int, model: DetectionModel, stream: RngStream,
                    size=None):
    """Poisson photoelectron counts for n_atoms fluorescing together."""
    if n_atoms < 0:
        raise ValueError("n_atoms must be >= 0")
    mean = n_atoms * model.counts_per_atom + model.background_counts
    if mean == 0:
        return 0 if size is None else np.zeros(size, dtype=np.int64)
    return stream.generator.poisson(mean, size=size)


def estimate_atoms(counts, model: DetectionModel | None = None):
    """Atom-number estimate from a fluorescence count (not rounded)."""
    if model is None:
        model = DetectionModel()
    est = (np.asarray(counts, dtype=float)
           - model.background_counts) / model.counts_per_atom
    return np.maximum(est, 0.0)


def measure_fraction_per_shot(p_per_shot, n_atoms: int,
                              model: DetectionModel, stream: RngStream,
                              poisson_loading: bool = False,
                              survival: float = 1.0,
                              systematic_factor: float = 1.0):
    """One simulated data point from per-shot transfer probabilities.

    Each shot loads n_atoms (or Poisson with that mean), transfers each
    surviving atom with that shot's probability, and reads out the
    transferred number through the Poisson count model.  The fraction is
    the signal counts over the calibration reference for the loaded atom
    number; the reference carries systematic_factor, one multiplicative
    calibration error shared by the whole dataset.  Returns (fraction,
    stderr) with the empirical standard error over shots; fractions can
    leave [0, 1] by noise.  Shots that load zero atoms carry no
    information and are dropped.
    """
    gen = stream.generator
    fractions = []
    for p in np.asarray(p_per_shot, dtype=float):
        if not 0.0 <= p <= 1.0:
            raise ValueError("transfer probability must be in [0, 1]")
        n = int(gen.poisson(n_atoms)) if poisson_loading else n_atoms
        if n == 0:
            continue
        k = int(gen.binomial(n, p * survival))
        counts = int(simulate_counts(k, model, stream))
        reference = n * model.counts_per_atom * systematic_factor
        fractions.append((counts - model.background_counts) / reference)
    if not fractions:
        return math.nan, math.nan
    arr = np.array(fractions)
    fraction = float(arr.mean())
    if len(arr) > 1:
        stderr = float(arr.std(ddof=1) / math.sqrt(len(arr)))
    else:
        stderr = 0.0
    if stderr <= 0.0:
        # all shots identical (e.g. zero signal everywhere): the sample
        # estimate degenerates, so substitute the shot-noise prediction
        stderr = predicted_fraction_stderr(
            min(max(fraction, 0.0), 1.0), n_atoms, len(arr), model)
    return fraction, stderr


def measure_fraction(p_true: float, n_shots: int, n_atoms: int,
                     model: DetectionModel, stream: RngStream,
                     poisson_loading: bool = False, survival: float = 1.0,
                     systematic_factor: float = 1.0):
    """measure_fraction_per_shot with one common transfer probability."""
    if n_shots < 1 or n_atoms < 1:
        raise ValueError("n_shots and n_atoms must be >= 1")
    return measure_fraction_per_shot(
        np.full(n_shots, float(p_true)), n_atoms, model, stream,
        poisson_loading=poisson_loading, survival=survival,
        systematic_factor=systematic_factor)


def predicted_fraction_stderr(p: float, n_atoms: int, n_shots: int,
                              model: DetectionModel | None = None) -> float:
    """Standard error the shot statistics would produce at true value p.

    Binomial spread over the atoms plus Poisson readout noise, averaged
    over shots; floored at the single-atom quantization scale so it
    never vanishes at p = 0 or 1.
    """
    if model is None:
        model = DetectionModel()
    var = max(p * (1.0 - p), 0.25 / n_atoms) + p / model.counts_per_atom
    return math.sqrt(var / (n_atoms * n_shots))


def normalization_factor(stream: RngStream,
                         systematic: float = 0.10) -> float:
    """One calibration factor for a whole dataset, uniform in
    [1 - systematic, 1 + systematic]; drawn once because the reference
    measurement is done once per experiment."""
    if not 0.0 <= systematic < 1.0:
        raise ValueError("systematic must be in [0, 1)")
    if systematic == 0.0:
        return 1.0
    return float(stream.generator.uniform(1.0 - systematic,
                                          1.0 + systematic))


# ---------------------------------------------------------------------------
# slow processes

def survival_probability(t_s: float, lifetime_s: float) -> float:
    """Probability an atom is still trapped after holding for t_s."""
    if t_s < 0:
        raise ValueError("t_s must be >= 0")
    if lifetime_s <= 0:
        raise ValueError("lifetime_s must be > 0")
    return math.exp(-t_s / lifetime_s)


def sample_quasi_static_detuning(model: NoiseModel, stream: RngStream,
                                 size=None):
    """Lorentzian-distributed shot-to-shot detuning offsets (rad/s).

    Averaging cos(delta T) over a Lorentzian of half-width g gives
    exactly exp(-g T): a heavy-tailed static spread reproduces an
    exponential coherence decay without any time-dependent noise.
    """
    return model.quasi_static_halfwidth * stream.generator.standard_cauchy(
        size)
