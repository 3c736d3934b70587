"""Least-squares fits for the three scan shapes we measure.

Shared machinery is a damped Gauss-Newton loop on plain arrays (x, y,
optional stderr); model-specific wrappers handle seeding.  Frequency
seeds come from a periodogram so the oscillatory fits do not depend on
a lucky starting guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_ITERATIONS = 200
MAX_HALVINGS = 30
REL_PARAM_TOL = 1e-10
GRAD_TOL = 1e-12


@dataclass
class FitResult:
    params: dict
    stderr: dict
    converged: bool
    iterations: int
    residual_norm: float
    seed_low_confidence: bool = False
    model: str = ""

    def __getitem__(self, name: str) -> float:
        return self.params[name]


def _numeric_jacobian(fun, p, x):
    base = fun(p, x)
    jac = np.empty((len(base), len(p)))
    for j in range(len(p)):
        step = 1e-7 * max(abs(p[j]), 1e-30)
        shifted = p.copy()
        shifted[j] += step
        jac[:, j] = (fun(shifted, x) - base) / step
    return jac


def gauss_newton(fun, p0, x, y, yerr=None, jac=None,
                 max_iterations: int = MAX_ITERATIONS):
    """Minimize sum of squared (weighted) residuals of y - fun(p, x).

    Steps are damped by halving (up to MAX_HALVINGS) whenever the full
    Gauss-Newton step increases the residual.  Returns (p, cov,
    converged, iterations, ssr).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if yerr is not None:
        yerr = np.asarray(yerr, dtype=float)
        if np.any(yerr <= 0):
            raise ValueError("stderr values must be > 0")
        weights = 1.0 / yerr
    else:
        weights = None
    p = np.asarray(p0, dtype=float).copy()

    def residuals(params):
        r = y - fun(params, x)
        return r * weights if weights is not None else r

    r = residuals(p)
    ssr = float(r @ r)
    converged = False
    iteration = 0
    for iteration in range(1, max_iterations + 1):
        j = jac(p, x) if jac is not None else _numeric_jacobian(fun, p, x)
        if weights is not None:
            j = j * weights[:, None]
        grad = j.T @ r
        if np.linalg.norm(grad) < GRAD_TOL:
            converged = True
            break
        try:
            step = np.linalg.solve(j.T @ j, grad)
        except np.linalg.LinAlgError:
            break
        # halve until the step actually helps
        scale = 1.0
        for _ in range(MAX_HALVINGS):
            trial = p + scale * step
            r_trial = residuals(trial)
            ssr_trial = float(r_trial @ r_trial)
            if ssr_trial <= ssr:
                break
            scale *= 0.5
        else:
            break
        rel_change = np.max(np.abs(scale * step)
                            / np.maximum(np.abs(p), 1e-30))
        p = trial
        r = r_trial
        ssr = ssr_trial
        if rel_change < REL_PARAM_TOL:
            converged = True
            break

    j = jac(p, x) if jac is not None else _numeric_jacobian(fun, p, x)
    if weights is not None:
        j = j * weights[:, None]
    try:
        cov = np.linalg.inv(j.T @ j)
        if weights is None and len(y) > len(p):
            cov = cov * ssr / (len(y) - len(p))
    except np.linalg.LinAlgError:
        cov = np.full((len(p), len(p)), np.nan)
    return p, cov, converged, iteration, ssr


def periodogram_frequency(x, y):
    """Dominant angular frequency of y(x) on a uniform grid.

    Returns (omega, low_confidence).  The zero-frequency bin is
    excluded; ties resolve to the lowest frequency.  low_confidence is
    set when the peak barely stands out of the spectrum, in which case
    the caller should not trust a fit seeded from it too blindly.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 4:
        raise ValueError("need at least 4 points for a frequency seed")
    dx = float(np.mean(np.diff(x)))
    power = np.abs(np.fft.rfft(y - y.mean())) ** 2
    power[0] = 0.0
    k = int(np.argmax(power))        # argmax takes the first = lowest bin
    freqs = np.fft.rfftfreq(len(y), d=dx)
    mean_power = power[1:].mean()
    low_confidence = bool(mean_power <= 0
                          or power[k] < 4.0 * mean_power
                          or k == 0)
    if k == 0:
        # flat data; fall back to one cycle over the span
        return 2.0 * math.pi / (x[-1] - x[0]), True
    return 2.0 * math.pi * float(freqs[k]), low_confidence


# ---------------------------------------------------------------------------
# models

def rabi_model(p, t):
    amplitude, omega = p
    return amplitude * np.sin(0.5 * omega * t) ** 2


def _rabi_jacobian(p, t):
    amplitude, omega = p
    s = np.sin(0.5 * omega * t)
    c = np.cos(0.5 * omega * t)
    return np.column_stack([s**2, amplitude * s * c * t])


def fringe_model(p, x):
    offset, contrast_amp, omega, phase = p
    return offset + contrast_amp * np.cos(omega * x + phase)


def _fringe_jacobian(p, x):
    _, contrast_amp, omega, phase = p
    arg = omega * x + phase
    s = np.sin(arg)
    return np.column_stack([
        np.ones_like(x), np.cos(arg), -contrast_amp * s * x,
        -contrast_amp * s,
    ])


def decay_model(p, t):
    c0, t2 = p
    return c0 * np.exp(-t / t2)


def _decay_jacobian(p, t):
    c0, t2 = p
    e = np.exp(-t / t2)
    return np.column_stack([e, c0 * e * t / t2**2])


# ---------------------------------------------------------------------------
# wrappers

def _check_oscillation_data(x, y):
    if len(x) < 8:
        raise ValueError("need at least 8 points to fit an oscillation")
    if np.ptp(y) == 0.0:
        raise ValueError("degenerate data: y is constant")


def fit_rabi(t, y, yerr=None) -> FitResult:
    """Fit amplitude * sin^2(omega t / 2); returns omega in rad/s."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_oscillation_data(t, y)
    # sin^2 oscillates at omega, so the periodogram reads it directly
    omega_seed, low_conf = periodogram_frequency(t, y)
    amp_seed = float(np.max(y)) if np.max(y) > 0 else 1.0
    p, cov, ok, n_iter, ssr = gauss_newton(
        rabi_model, [amp_seed, omega_seed], t, y, yerr, jac=_rabi_jacobian)
    p[1] = abs(p[1])    # sign of omega is not observable
    names = ("amplitude", "omega")
    return FitResult(
        params=dict(zip(names, map(float, p))),
        stderr=dict(zip(names, np.sqrt(np.abs(np.diag(cov))))),
        converged=ok, iterations=n_iter, residual_norm=ssr,
        seed_low_confidence=low_conf, model="rabi")


def fit_fringe(x, y, yerr=None, omega_seed=None) -> FitResult:
    """Fit offset + C cos(omega x + phase).

    The quadrature amplitudes at the periodogram frequency give the
    contrast and phase seeds, so only omega needs refining from a
    coarse start.  When the fringe frequency is known in advance (a
    Ramsey scan knows its gap) pass it as omega_seed; at low
    signal-to-noise the periodogram can lock onto a noise peak and
    send the fit to a spurious minimum.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_oscillation_data(x, y)
    if omega_seed is not None:
        omega_seed, low_conf = float(omega_seed), False
    else:
        omega_seed, low_conf = periodogram_frequency(x, y)
    centered = y - y.mean()
    a = 2.0 * float(np.mean(centered * np.cos(omega_seed * x)))
    b = -2.0 * float(np.mean(centered * np.sin(omega_seed * x)))
    c_seed = math.hypot(a, b)
    if c_seed == 0.0:
        c_seed = float(y.max() - y.min()) / 2.0 or 1.0
        phase_seed = 0.0
    else:
        phase_seed = math.atan2(b, a)
    p0 = [float(y.mean()), c_seed, omega_seed, phase_seed]
    p, cov, ok, n_iter, ssr = gauss_newton(
        fringe_model, p0, x, y, yerr, jac=_fringe_jacobian)
    # canonical form: positive contrast, phase wrapped to (-pi, pi]
    if p[1] < 0:
        p[1] = -p[1]
        p[3] += math.pi
    p[3] = math.remainder(p[3], 2.0 * math.pi)
    names = ("offset", "contrast_amp", "omega", "phase")
    return FitResult(
        params=dict(zip(names, map(float, p))),
        stderr=dict(zip(names, np.sqrt(np.abs(np.diag(cov))))),
        converged=ok, iterations=n_iter, residual_norm=ssr,
        seed_low_confidence=low_conf, model="fringe")


def fit_exponential_decay(t, y, yerr=None) -> FitResult:
    """Fit c0 * exp(-t / t2) to contrast-vs-time data in (0, 1]."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(t) < 3:
        raise ValueError("need at least 3 points to fit a decay")
    if np.any(y <= 0) or np.any(y > 1.0 + 1e-12):
        raise ValueError("contrast values must be in (0, 1]")
    # linear regression on log(y) seeds both parameters; in log space
    # the right weights are y/sigma, which also keeps one noise-swamped
    # tail point from poisoning the seed slope
    weights = None if yerr is None else y / np.asarray(yerr, dtype=float)
    slope, intercept = np.polyfit(t, np.log(y), 1, w=weights)
    span = t.max() - t.min() + 1e-30
    if slope >= 0:
        t2_seed = 10.0 * span
    else:
        t2_seed = min(max(-1.0 / slope, span / 100.0), 100.0 * span)
    p0 = [min(math.exp(intercept), 1.0), t2_seed]
    p, cov, ok, n_iter, ssr = gauss_newton(
        decay_model, p0, t, y, yerr, jac=_decay_jacobian)
    names = ("c0", "t2")
    return FitResult(
        params=dict(zip(names, map(float, p))),
        stderr=dict(zip(names, np.sqrt(np.abs(np.diag(cov))))),
        converged=ok, iterations=n_iter, residual_norm=ssr, model="decay")
