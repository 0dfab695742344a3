"""
Estimators for the growth of the maximal in-degree
"""

import logging
import math
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.stats import linregress

from model.series import TimeSeries

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 10


class InsufficientDataError(ValueError):
    """Too few usable checkpoints for an estimate."""


class ExponentEstimate(BaseModel):
    slope: float = Field(description="Least-squares slope of log M against log n")
    stderr: float = Field(description="Standard error of the slope")
    points: int = Field(description="Checkpoints used in the fit")
    n_lo: int
    n_hi: int


class RatioKind(str, Enum):
    M_K_OVER_N = "M_k_over_n"
    M1_LOGN_OVER_N = "M1_logn_over_n"


class RatioReport(BaseModel):
    kind: RatioKind
    rank: int
    target: float
    final_ratio: float
    deviation: float = Field(description="|final ratio - target|")
    trend_slope: float = Field(description="Slope of the ratio against ln n over the last half")
    trend_stderr: float
    points: int


def default_window(n_max: int, decades: float = 2.0) -> Tuple[int, int]:
    """The last ``decades`` decades of n, where the start-up transient has faded."""
    return max(1, int(n_max / 10**decades)), n_max


def fit_power_law(
    n: Sequence[float],
    values: Sequence[float],
    window: Optional[Tuple[float, float]] = None,
) -> ExponentEstimate:
    """
    Fit values ~ C * n^slope by least squares on log-log scale.

    Args:
        n: checkpoint step counts
        values: the tracked quantity at each checkpoint
        window: inclusive [n_lo, n_hi]; defaults to the last two decades

    Returns:
        ExponentEstimate with slope and standard error.

    Raises:
        InsufficientDataError: fewer than 10 checkpoints with n > 0 and value > 0
    """
    n = np.asarray(n, dtype=float)
    values = np.asarray(values, dtype=float)
    if n.size == 0:
        raise InsufficientDataError("empty series")
    if window is None:
        window = default_window(int(n.max()))
    n_lo, n_hi = window
    mask = (n >= n_lo) & (n <= n_hi) & (n > 0) & (values > 0)
    points = int(mask.sum())
    if points < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"need {MIN_FIT_POINTS} checkpoints with positive values in [{n_lo}, {n_hi}], got {points}"
        )
    fit = linregress(np.log(n[mask]), np.log(values[mask]))
    return ExponentEstimate(
        slope=float(fit.slope),
        stderr=float(fit.stderr),
        points=points,
        n_lo=int(n_lo),
        n_hi=int(n_hi),
    )


def estimate_exponent(
    series: TimeSeries,
    window: Optional[Tuple[float, float]] = None,
    rank: int = 1,
) -> ExponentEstimate:
    """Growth exponent of M_rank(n) over ``window``."""
    return fit_power_law(series.n_values(), series.rank(rank), window)


def ratio_values(series: TimeSeries, kind: RatioKind, rank: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """(n, ratio) over checkpoints with n >= 1."""
    n = series.n_values().astype(float)
    values = series.rank(rank).astype(float)
    mask = n >= 1
    n, values = n[mask], values[mask]
    if kind is RatioKind.M_K_OVER_N:
        return n, values / n
    return n, values * np.log(n) / n


def check_ratio(
    series: TimeSeries,
    target: float,
    which: RatioKind = RatioKind.M_K_OVER_N,
    rank: int = 1,
) -> RatioReport:
    """
    Compare the final normalized in-degree with its predicted limit.

    The trend statistic is the slope of the ratio against ln n over the last
    half of the checkpoints; it is 0 for a settled series.
    """
    which = RatioKind(which)
    if len(series) == 0:
        raise InsufficientDataError("empty series")
    n, ratio = ratio_values(series, which, rank)
    if ratio.size == 0:
        raise InsufficientDataError("no checkpoint with n >= 1")
    final = float(ratio[-1])
    tail = slice(ratio.size // 2, None)
    trend_slope, trend_stderr = 0.0, 0.0
    if ratio[tail].size >= 3 and np.ptp(np.log(n[tail])) > 0:
        fit = linregress(np.log(n[tail]), ratio[tail])
        trend_slope, trend_stderr = float(fit.slope), float(fit.stderr)
    report = RatioReport(
        kind=which,
        rank=rank,
        target=target,
        final_ratio=final,
        deviation=abs(final - target),
        trend_slope=trend_slope if math.isfinite(trend_slope) else 0.0,
        trend_stderr=trend_stderr if math.isfinite(trend_stderr) else 0.0,
        points=int(ratio.size),
    )
    logger.debug("Ratio %s rank %d: final %.6f target %.6f", which.value, rank, final, target)
    return report
