"""Render curve sets to figure files next to their CSV output."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .config import CcdfCurve, Method
from .experiments import Axis

_AXIS_LABELS = {
    Axis.SINR_THRESHOLD_DB: "SINR threshold (dB)",
    Axis.RATE_BPS: "rate threshold (bps)",
    Axis.INNER_RADIUS_M: "exclusion radius D (m)",
    Axis.DENSITY_RATIO: "small-cell to macro density ratio",
}


def plot_curves(curves: Sequence[CcdfCurve], axis: Axis, out_path: Path,
                ylabel: str = "CCDF", title: str | None = None) -> Path:
    """One figure: analytic curves as lines, Monte Carlo as CI error bars.

    Curves sharing a label share a color so the two methods can be read as
    one comparison.
    """
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    cycle = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    colors: dict[str, str] = {}
    for curve in curves:
        color = colors.setdefault(curve.label, cycle[len(colors) % len(cycle)])
        if curve.method is Method.ANALYTIC:
            ax.plot(curve.thresholds, curve.values, "-", color=color,
                    label=f"{curve.label} ({curve.method.value})")
        else:
            yerr = None
            if curve.ci_low is not None:
                yerr = (curve.values - curve.ci_low, curve.ci_high - curve.values)
            ax.errorbar(curve.thresholds, curve.values, yerr=yerr, fmt="o",
                        markersize=3.5, capsize=2, linestyle="none", color=color,
                        label=f"{curve.label} ({curve.method.value})")
    if axis is Axis.RATE_BPS:
        ax.set_xscale("log")
    ax.set_xlabel(_AXIS_LABELS[axis])
    ax.set_ylabel(ylabel)
    ax.set_ylim(-0.02, 1.02)
    ax.grid(alpha=0.3)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=200)
    plt.close(fig)
    return out_path
