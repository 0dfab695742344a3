"""
SVG figures of a checkpoint series
"""

import logging
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from harness.estimators import RatioKind, ratio_values
from model.series import TimeSeries
from theory.solver import Regime, TheoryResult

logger = logging.getLogger(__name__)

# fixed ids so identical inputs give identical files
matplotlib.rcParams["svg.hashsalt"] = "spatial-attachment"
matplotlib.rcParams["figure.figsize"] = (6.0, 4.0)


def plot_ratio(series: TimeSeries, theory: Optional[TheoryResult] = None):
    """M_k(n)/n against n for every tracked rank, with the limits x_k*."""
    fig, ax = plt.subplots()
    for k in range(1, series.track_k + 1):
        n, ratio = ratio_values(series, RatioKind.M_K_OVER_N, k)
        ax.plot(n, ratio, linewidth=1.0, label=f"M_{k}(n)/n")
    ax.set_xscale("log")
    if theory is not None:
        for k, x in enumerate(theory.x_star[: series.track_k], start=1):
            ax.axhline(x, linestyle="--", linewidth=0.8, color="grey")
            ax.text(0.01, x, f"x_{k}* = {x:.4f}", transform=ax.get_yaxis_transform(), fontsize=8, va="bottom")
    ax.set_xlabel("n")
    ax.set_ylabel("M_k(n) / n")
    ax.legend(loc="best", fontsize=8)
    return fig


def plot_loglog(series: TimeSeries, theory: Optional[TheoryResult] = None):
    """log-log M_1 against n, with a reference line of the predicted slope."""
    fig, ax = plt.subplots()
    n = series.n_values().astype(float)
    m1 = series.rank(1).astype(float)
    mask = (n > 0) & (m1 > 0)
    ax.loglog(n[mask], m1[mask], linewidth=1.0, label="M_1(n)")
    if theory is not None and mask.any():
        slope = theory.exponent if theory.regime is Regime.SUBCRITICAL else 1.0
        anchor_n, anchor_m = n[mask][-1], m1[mask][-1]
        grid = np.geomspace(n[mask][0], anchor_n, 50)
        ax.loglog(grid, anchor_m * (grid / anchor_n) ** slope, "--", linewidth=0.8, color="grey",
                  label=f"slope {slope:.3g}")
    ax.set_xlabel("n")
    ax.set_ylabel("M_1(n)")
    ax.legend(loc="best", fontsize=8)
    return fig


def save_svg(
    series: TimeSeries,
    out: Union[str, Path],
    kind: str = "ratio",
    theory: Optional[TheoryResult] = None,
) -> Path:
    """Render ``kind`` ('ratio' or 'loglog') to an SVG file."""
    if kind == "ratio":
        fig = plot_ratio(series, theory)
    elif kind == "loglog":
        fig = plot_loglog(series, theory)
    else:
        raise ValueError(f"plot kind must be 'ratio' or 'loglog', got {kind!r}")
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(out, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.info("Wrote %s plot to %s", kind, out)
    return out
