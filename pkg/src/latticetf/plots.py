"""Headless figure rendering (SVG via the Agg backend)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .core import PhaseSpaceField  # noqa: E402
from .errors import InputError  # noqa: E402
from .uncertainty import InequalityReport  # noqa: E402

__all__ = ["save_magnitude_heatmap", "save_slack_histograms"]


def save_magnitude_heatmap(field: PhaseSpaceField, path: str,
                           title: str = "|V| on the phase-space box"):
    """Magnitude heatmap of a one-dimensional transform.

    Rows are lattice shifts m, columns torus frequencies w shifted to
    [-1/2, 1/2) for display.
    """
    if field.dimension != 1:
        raise InputError(
            f"heatmaps are rendered for dimension 1 only, "
            f"got dimension {field.dimension}")
    magnitude = np.abs(field.values)
    magnitude = np.fft.fftshift(magnitude, axes=1)
    half = field.box.half_width
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    image = ax.imshow(
        magnitude, aspect="auto", origin="lower",
        extent=(-0.5, 0.5, -half - 0.5, half + 0.5),
        cmap="viridis")
    ax.set_xlabel("w")
    ax.set_ylabel("m")
    ax.set_title(title)
    fig.colorbar(image, ax=ax, label="|V(m, w)|")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def save_slack_histograms(reports: list[InequalityReport], path: str):
    """One histogram of slacks per check name, zero marked."""
    names = []
    for report in reports:
        if report.name not in names:
            names.append(report.name)
    if not names:
        raise InputError("no reports to plot")
    cols = min(3, len(names))
    rows = math.ceil(len(names) / cols)
    fig, axes = plt.subplots(rows, cols,
                             figsize=(4.0 * cols, 2.8 * rows),
                             squeeze=False)
    for pos, name in enumerate(names):
        ax = axes[pos // cols][pos % cols]
        slacks = [r.slack for r in reports
                  if r.name == name and r.status != "not-applicable"]
        if slacks:
            ax.hist(slacks, bins=min(30, max(5, len(slacks) // 3)),
                    color="#4878a8")
        ax.axvline(0.0, color="#b03030", linewidth=1.0)
        ax.set_title(name, fontsize=9)
        ax.tick_params(labelsize=7)
    for pos in range(len(names), rows * cols):
        axes[pos // cols][pos % cols].set_axis_off()
    fig.suptitle("inequality slack by check (vertical line: zero)")
    fig.tight_layout(rect=(0, 0, 1, 0.96))
    fig.savefig(path, format="svg")
    plt.close(fig)
