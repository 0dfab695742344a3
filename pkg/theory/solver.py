"""
Fixed-point solver and regime classifier

The limits x_1*, x_2*, ... of M_k(n)/n are found one rank at a time: with
x_1*..x_{k-1}* fixed, f_k is concave in x_k with f_k(0) = 0, so it has a
positive root exactly when its slope at 0, a - 1 + d*alpha*Q_k, is positive.
The root is bracketed in (0, 1/(1-a) + 1] and found by bisection. K is the
last rank that has one.
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import List

from pydantic import BaseModel, Field, model_validator
from scipy.optimize import bisect

from .functions import QEvaluation, f_k, f_slope_at_zero, h_fn

logger = logging.getLogger(__name__)

ROOT_XTOL = 1e-12
CRITICAL_TOLERANCE = 1e-12
DELICATE_TOLERANCE = 1e-9
# slopes at 0 below this are treated as "no positive root"
SLOPE_TOLERANCE = 1e-12
DEFAULT_K_MAX = 16


class FixedPointError(RuntimeError):
    """Bisection failed on a bracket that should have contained a root."""


class Regime(str, Enum):
    SUBCRITICAL = "Subcritical"
    CRITICAL = "Critical"
    SUPERCRITICAL = "Supercritical"


class TheoryResult(BaseModel):
    """Limit predictions for one parameter set."""

    regime: Regime = Field(description="Which limit law governs M_1(n)")
    exponent: float = Field(description="a + d*alpha")
    critical_constant: float = Field(description="2/(d*alpha)^2, the critical limit of M_1(n) ln n / n")
    x_star: List[float] = Field(default_factory=list, description="Limits of M_k(n)/n for k = 1..K")
    K: int = Field(ge=0, description="Number of ranks with a positive limit")
    r_m: int = Field(ge=1, description="Smallest m drawn with positive probability")

    @model_validator(mode="after")
    def _check_roots(self) -> "TheoryResult":
        if len(self.x_star) != self.K:
            raise ValueError(f"K={self.K} but {len(self.x_star)} limits given")
        if any(x <= 0 for x in self.x_star):
            raise ValueError("limits must be strictly positive")
        if any(later > earlier for earlier, later in zip(self.x_star, self.x_star[1:])):
            raise ValueError("limits must be non-increasing in rank")
        return self


def r_m(m_dist) -> int:
    """Smallest r with Pr(m = r) > 0."""
    for r, weight in enumerate(m_dist, start=1):
        if weight > 0.0:
            return r
    raise ValueError("m_dist has no positive entry")


def exponent_offset(params) -> float:
    """a + d*alpha - 1, computed exactly from the decimal inputs."""
    exact = Fraction(repr(params.a)) + params.d * Fraction(repr(params.alpha)) - 1
    return float(exact)


def _regime(params) -> Regime:
    offset = exponent_offset(params)
    if offset == 0.0 or abs(params.a + params.d * params.alpha - 1.0) <= CRITICAL_TOLERANCE:
        return Regime.CRITICAL
    if abs(offset) < DELICATE_TOLERANCE:
        logger.warning(
            "a + d*alpha = %r is within %g of 1; regime classification is numerically delicate",
            params.a + params.d * params.alpha, DELICATE_TOLERANCE,
        )
    return Regime.SUPERCRITICAL if offset > 0 else Regime.SUBCRITICAL


def _lower_bracket(k: int, prefix: QEvaluation, params) -> float:
    """A point where f_k > 0; halves from 1e-6 since f_k(x) ~ slope*x near 0."""
    lo = 1e-6
    for _ in range(200):
        if f_k(lo, prefix, k, params) > 0.0:
            return lo
        lo /= 2.0
    raise FixedPointError(f"no positive value of f_{k} found near 0 despite a positive slope")


def solve_roots(params, k_max: int = DEFAULT_K_MAX) -> List[float]:
    """Sequential positive roots x_1*, ..., x_K* (empty when f_1 has none)."""
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")
    roots: List[float] = []
    prefix = QEvaluation()
    upper = 1.0 / (1.0 - params.a) + 1.0
    for k in range(1, k_max + 1):
        slope = f_slope_at_zero(prefix, k, params)
        if slope <= SLOPE_TOLERANCE:
            logger.debug("f_%d has slope %.3g at 0: no positive root, K=%d", k, slope, k - 1)
            break
        lo = _lower_bracket(k, prefix, params)
        root, info = bisect(
            f_k, lo, upper, args=(prefix, k, params),
            xtol=ROOT_XTOL, maxiter=400, full_output=True, disp=False,
        )
        if not info.converged:
            raise FixedPointError(f"bisection for x_{k}* did not converge: {info.flag}")
        roots.append(float(root))
        prefix = prefix.extend(h_fn(root, params.alpha, params.d))
    return roots


def solve_fixed_point(params, k_max: int = DEFAULT_K_MAX) -> TheoryResult:
    """Solve F_K = 0 rank by rank and report the limits with the regime."""
    roots = solve_roots(params, k_max)
    result = TheoryResult(
        regime=_regime(params),
        exponent=params.a + params.d * params.alpha,
        critical_constant=2.0 / (params.d * params.alpha) ** 2,
        x_star=roots,
        K=len(roots),
        r_m=r_m(params.m_dist),
    )
    logger.info("Fixed point: regime=%s K=%d x_star=%s", result.regime.value, result.K, roots)
    return result


def classify_regime(params, k_max: int = DEFAULT_K_MAX) -> TheoryResult:
    """
    Regime of a parameter set and the constants of its limit law.

    Subcritical: M_1(n) grows like n^(a + d*alpha).
    Critical: M_1(n) ln n / n tends to 2/(d*alpha)^2.
    Supercritical: M_k(n)/n tends to x_k* for k <= K.
    """
    regime = _regime(params)
    roots = solve_roots(params, k_max) if regime is Regime.SUPERCRITICAL else []
    return TheoryResult(
        regime=regime,
        exponent=params.a + params.d * params.alpha,
        critical_constant=2.0 / (params.d * params.alpha) ** 2,
        x_star=roots,
        K=len(roots),
        r_m=r_m(params.m_dist),
    )
