"""Publication-style batch renderer for simulator output files.

Reads CSV datasets and fit reports, draws data points with standard
error bars and the fitted curve sampled at 10x the data density, and
writes one PNG per invocation.  Styling is pinned so identical inputs
give pixel-identical files.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .data import Dataset, evaluate_fit, read_dataset, read_fit_report

FIGS = ("fig2", "fig3", "fig4")

# one fixed style; pixel-identical reruns depend on it
STYLE = {
    "figure.dpi": 100.0,
    "savefig.dpi": 150.0,
    "font.family": "DejaVu Sans",
    "font.size": 9.0,
    "axes.linewidth": 0.8,
    "axes.grid": False,
    "lines.linewidth": 1.2,
    "errorbar.capsize": 2.0,
    "legend.frameon": False,
    "figure.autolayout": False,
}

DATA_COLOR = "#1f4e79"
FIT_COLOR = "#c44e52"

# fit model that may be overlaid on each dataset kind
_KIND_FOR_MODEL = {"rabi": "rabi", "fringe": "ramsey",
                   "decay": "contrast-decay"}

_X_LABELS = {
    "rabi": "pulse duration",
    "crosstalk": "pulse duration",
    "ramsey": "two-photon detuning",
    "contrast-decay": "Ramsey gap",
}


@dataclass(frozen=True)
class FigureSpec:
    fig: str
    csv_paths: tuple
    out_path: str
    fit_path: str | None = None
    overlay: bool = True

    def __post_init__(self):
        if self.fig not in FIGS:
            raise ValueError(f"fig must be one of {', '.join(FIGS)}")
        if not self.csv_paths:
            raise ValueError("at least one input CSV is required")
        if self.overlay and self.fit_path is None:
            raise ValueError("overlay requested but no fit report given")


def _axis_labels(ds: Dataset):
    xname = _X_LABELS.get(ds.kind, "x")
    yname = ("fringe contrast" if ds.kind == "contrast-decay"
             else "transfer fraction")
    return f"{xname} ({ds.x_unit})", yname


def _draw_panel(ax, ds: Dataset, report=None, dense: int = 10):
    ax.errorbar(ds.x, ds.fraction, yerr=ds.stderr, fmt="o",
                color=DATA_COLOR, markersize=3.5, elinewidth=0.8,
                zorder=2)
    if report is not None:
        xd = np.linspace(ds.x.min(), ds.x.max(), dense * len(ds.x))
        ax.plot(xd, evaluate_fit(report, xd, ds.x_unit), "-",
                color=FIT_COLOR, zorder=3)
    xlabel, ylabel = _axis_labels(ds)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)


def _load(spec: FigureSpec):
    datasets = [read_dataset(p) for p in spec.csv_paths]
    report = None
    if spec.overlay:
        report = read_fit_report(spec.fit_path)
    main_kind = {"fig2": "rabi", "fig3": "ramsey",
                 "fig4": "contrast-decay"}[spec.fig]
    if not any(ds.kind == main_kind for ds in datasets):
        raise ValueError(
            f"{spec.fig} needs a dataset of kind {main_kind!r}; got "
            f"{[ds.kind for ds in datasets]}")
    if report is not None:
        want = _KIND_FOR_MODEL.get(report["model"])
        if want is None or not any(ds.kind == want for ds in datasets):
            raise ValueError(
                f"fit model {report['model']!r} matches no input dataset")
    return datasets, report


def _overlay_for(ds: Dataset, report):
    if report is None:
        return None
    if _KIND_FOR_MODEL.get(report["model"]) == ds.kind:
        return report
    return None


def _render_fig2(datasets, report):
    # Rabi oscillations on the driven site; neighbor-site transfer as a
    # second panel when its scan is supplied
    if len(datasets) > 1:
        fig, axes = plt.subplots(1, len(datasets),
                                 figsize=(3.4 * len(datasets), 2.6))
    else:
        fig, ax = plt.subplots(figsize=(3.4, 2.6))
        axes = [ax]
    for ax, ds, tag in zip(axes, datasets, "abcdef"):
        _draw_panel(ax, ds, _overlay_for(ds, report))
        ax.text(0.02, 0.98, f"({tag})", transform=ax.transAxes,
                va="top", ha="left")
        if ds.kind == "crosstalk":
            ax.set_ylim(-0.05, 1.05)
    return fig


def _render_fig3(datasets, report):
    fig, ax = plt.subplots(figsize=(3.4, 2.6))
    _draw_panel(ax, datasets[0], _overlay_for(datasets[0], report))
    gap = datasets[0].metadata.get("ramsey_gap_us")
    if gap:
        ax.set_title(f"Ramsey gap {gap} us", fontsize=9)
    return fig


def _render_fig4(datasets, report):
    summary = next(ds for ds in datasets if ds.kind == "contrast-decay")
    fringes = [ds for ds in datasets if ds.kind == "ramsey"]
    if fringes:
        fig = plt.figure(figsize=(3.4, 3.6))
        grid = fig.add_gridspec(2, len(fringes), height_ratios=(1, 1.8),
                                hspace=0.55, wspace=0.45)
        for i, ds in enumerate(fringes):
            ax = fig.add_subplot(grid[0, i])
            ax.errorbar(ds.x, ds.fraction, yerr=ds.stderr, fmt="o",
                        color=DATA_COLOR, markersize=1.5, elinewidth=0.5)
            gap = ds.metadata.get("ramsey_gap_us", "")
            ax.set_title(f"{gap} us", fontsize=7)
            ax.tick_params(labelsize=6)
        ax = fig.add_subplot(grid[1, :])
    else:
        fig, ax = plt.subplots(figsize=(3.4, 2.6))
    _draw_panel(ax, summary, _overlay_for(summary, report))
    ax.set_ylim(0, 1.05)
    return fig


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the written path.

    Raises before creating the file if any input is unusable.
    """
    datasets, report = _load(spec)
    out = Path(spec.out_path)
    with plt.rc_context(STYLE):
        if spec.fig == "fig2":
            fig = _render_fig2(datasets, report)
        elif spec.fig == "fig3":
            fig = _render_fig3(datasets, report)
        else:
            fig = _render_fig4(datasets, report)
        try:
            fig.savefig(out, format="png", bbox_inches="tight",
                        metadata={"Software": "fortfig"})
        finally:
            plt.close(fig)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render figures from simulator CSV datasets and "
                    "fit reports.")
    parser.add_argument("--fig", required=True, choices=FIGS)
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        metavar="CSV")
    parser.add_argument("--fit", metavar="REPORT")
    parser.add_argument("--out", required=True, metavar="PNG")
    parser.add_argument("--no-overlay", action="store_true",
                        help="data points only, no fitted curve")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(fig=args.fig, csv_paths=tuple(args.inputs),
                          out_path=args.out, fit_path=args.fit,
                          overlay=not args.no_overlay)
        render(spec)
    except (ValueError, OSError) as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
