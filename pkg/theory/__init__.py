"""
Theory package - limit functions, the fixed-point system and the regime
classifier for the maximal in-degrees
"""

from .functions import (
    QEvaluation,
    drift,
    drift_finite,
    f_k,
    f_slope_at_zero,
    f_system,
    g_k,
    h_fn,
    q_expected,
    q_poly,
)
from .solver import (
    FixedPointError,
    Regime,
    TheoryResult,
    classify_regime,
    r_m,
    solve_fixed_point,
    solve_roots,
)

__all__ = [
    'QEvaluation',
    'drift',
    'drift_finite',
    'f_k',
    'f_slope_at_zero',
    'f_system',
    'g_k',
    'h_fn',
    'q_expected',
    'q_poly',
    'FixedPointError',
    'Regime',
    'TheoryResult',
    'classify_regime',
    'r_m',
    'solve_fixed_point',
    'solve_roots',
]
