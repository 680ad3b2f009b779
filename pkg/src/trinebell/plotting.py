"""Figure rendering for scan grids and sampled estimates.

Figures are written straight to files (Agg backend); nothing is shown
interactively.  The CLI opts in via ``--plot`` so the default report path
stays data-only.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import ScanResult
from .montecarlo import EstimateReport


def render_scan_heatmap(result: ScanResult, path) -> None:
    """Heatmap of bell sums over the (theta_b, theta_c) grid, minimum marked."""
    b_deg = np.degrees(result.theta_b_axis)
    c_deg = np.degrees(result.theta_c_axis)
    fig, ax = plt.subplots(figsize=(7.0, 5.6))
    mesh = ax.pcolormesh(c_deg, b_deg, result.bell_sums, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="bell sum")
    _, tb, tc = result.argmin
    ax.plot(
        math.degrees(tc),
        math.degrees(tb),
        marker="x",
        color="red",
        markersize=10,
        markeredgewidth=2.0,
    )
    ax.set_xlabel("theta_c [deg]")
    ax.set_ylabel("theta_b [deg]")
    ax.set_title(f"bell sum over basis angles (min {result.min_sum:.6f})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_estimates(report: EstimateReport, path) -> None:
    """Per-pair agreement estimates with 99% intervals, plus the bound line."""
    pairs = report.pairs
    labels = [f"{p.setting_1}{p.setting_2}" for p in pairs]
    x = np.arange(len(pairs))
    values = np.array([p.p_same for p in pairs])
    # Wilson intervals need not contain the raw estimate at the 0/1 edges
    lo = np.maximum(values - np.array([p.interval[0] for p in pairs]), 0.0)
    hi = np.maximum(np.array([p.interval[1] for p in pairs]) - values, 0.0)

    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    ax.errorbar(x, values, yerr=[lo, hi], fmt="o", capsize=3, label="p_same (99% CI)")
    ax.set_xticks(x)
    ax.set_xticklabels(labels)
    ax.set_xlabel("setting pair")
    ax.set_ylabel("agreement probability")
    ax.set_ylim(-0.05, 1.05)

    if report.bell_sum is not None:
        ci = report.bell_sum_interval
        ax2 = ax.twinx()
        ax2.errorbar(
            [len(pairs) - 0.5],
            [report.bell_sum],
            yerr=[[report.bell_sum - ci[0]], [ci[1] - report.bell_sum]],
            fmt="s",
            color="darkred",
            capsize=3,
            label="bell sum (99% CI)",
        )
        ax2.axhline(1.0, color="gray", linestyle="--", linewidth=1.0)
        ax2.set_ylabel("bell sum (bound at 1)")
        ax2.set_ylim(-0.15, 3.15)
        ax2.legend(loc="upper right")
    ax.legend(loc="upper left")
    ax.set_title(f"sampled estimates (n={report.config.n_samples}, seed={report.config.seed})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
