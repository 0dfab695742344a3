"""
Closed-form objects of the limit theory.

h(x) = 1 - (1 - alpha*x)^d is the chance that a vertex of normalized
in-degree x shows up in at least one of the d samples. Q_{i,r} is the chance
that at most r-1 of the i-1 higher-ranked vertices show up, i.e. a
Poisson-binomial lower tail; Q_i averages it over the law of m. The rank-i
in-degree then drifts by g_i = a*x_i + h(x_i)*Q_i per step.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np


def h_fn(x: float, alpha: float, d: int) -> float:
    """Union inclusion probability h(x), with the base clamped at 0 past x = 1/alpha."""
    if x < 0:
        raise ValueError(f"h is defined for x >= 0, got {x}")
    return 1.0 - max(0.0, 1.0 - alpha * x) ** d


def _check_probabilities(values: Sequence[float]) -> None:
    for p in values:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probabilities must lie in [0, 1], got {p}")


def q_poly(i: int, r: int, h_values: Sequence[float]) -> float:
    """
    Q_{i,r}: Pr(at most r-1 of the first i-1 Bernoulli(h_values) succeed).

    Args:
        i: rank (1-based)
        r: number of edge-step targets
        h_values: inclusion probabilities of ranks 1..i-1 (extra entries ignored)

    Returns:
        The lower-tail probability; 1 when i <= r.
    """
    if i < 1 or r < 1:
        raise ValueError(f"rank and m must be at least 1 (got i={i}, r={r})")
    if len(h_values) < i - 1:
        raise ValueError(f"Q_{i},{r} needs {i - 1} inclusion probabilities, got {len(h_values)}")
    probs = list(h_values[: i - 1])
    _check_probabilities(probs)
    if i <= r:
        return 1.0
    # pmf of the success count truncated to 0..r-1
    pmf = np.zeros(r)
    pmf[0] = 1.0
    for p in probs:
        shifted = pmf[:-1] * p
        pmf *= 1.0 - p
        pmf[1:] += shifted
    return float(pmf.sum())


def q_expected(i: int, m_dist: Sequence[float], h_values: Sequence[float]) -> float:
    """Q_i = E Q_{i,m}, averaging over Pr(m = r) = m_dist[r-1]."""
    return sum(
        weight * q_poly(i, r, h_values)
        for r, weight in enumerate(m_dist, start=1)
        if weight > 0.0
    )


@dataclass(frozen=True)
class QEvaluation:
    """Inclusion probabilities h(x_1*), h(x_2*), ... shared by sequential solves."""

    h_values: Tuple[float, ...] = ()

    def __post_init__(self):
        _check_probabilities(self.h_values)

    def extend(self, value: float) -> "QEvaluation":
        return QEvaluation(self.h_values + (value,))


def f_k(x_k: float, h_prefix: QEvaluation, k: int, params) -> float:
    """f_k = (a-1)*x_k + h(x_k)*Q_k, with the higher ranks fixed through ``h_prefix``."""
    if x_k < 0:
        raise ValueError(f"x_k must be non-negative, got {x_k}")
    q = q_expected(k, params.m_dist, h_prefix.h_values)
    return (params.a - 1.0) * x_k + h_fn(x_k, params.alpha, params.d) * q


def f_slope_at_zero(h_prefix: QEvaluation, k: int, params) -> float:
    """d f_k / d x_k at 0, i.e. a - 1 + d*alpha*Q_k."""
    q = q_expected(k, params.m_dist, h_prefix.h_values)
    return params.a - 1.0 + params.d * params.alpha * q


def _check_normalized(z: Sequence[float]) -> None:
    if any(v < 0 for v in z):
        raise ValueError(f"normalized degrees must be non-negative, got {list(z)}")
    if any(later > earlier for earlier, later in zip(z, z[1:])):
        raise ValueError(f"normalized degrees must be non-increasing, got {list(z)}")


def g_k(z: Sequence[float], params) -> float:
    """g_k(z_1..z_k) = a*z_k + h(z_k)*Q_k(z_1..z_{k-1}) for k = len(z)."""
    k = len(z)
    if k < 1:
        raise ValueError("g_k needs at least one coordinate")
    h_values = [h_fn(v, params.alpha, params.d) for v in z[:-1]]
    q = q_expected(k, params.m_dist, h_values)
    return params.a * z[-1] + h_fn(z[-1], params.alpha, params.d) * q


def drift(k: int, z: Sequence[float], params) -> float:
    """
    Predicted mean one-step increment of M_k(n) at normalized degrees z.

    Valid when the tracked ranks are distinct; corrections are O(1/n).
    """
    if len(z) < k:
        raise ValueError(f"drift of rank {k} needs {k} coordinates, got {len(z)}")
    z = list(z[:k])
    _check_normalized(z)
    return g_k(z, params)


def f_system(x: Sequence[float], params) -> List[float]:
    """F_K(x) = (f_1(x_1), ..., f_K(x_1..x_K))."""
    return [g_k(x[:i], params) - x[i - 1] for i in range(1, len(x) + 1)]


def drift_finite(
    k: int,
    top_degrees: Sequence[int],
    n_prime: int,
    vertex_count: int,
    params,
) -> float:
    """
    Expected increment of the rank-k vertex's in-degree over one step.

    Uses the finite-n probabilities of the process (the +b and +beta offsets,
    clamping at 1 and the chance that the vertex is itself the edge source),
    for a state whose top k+1 in-degrees are distinct. Left out are the
    O(1/n) effects of a higher rank being the source and of uniform fills.

    Args:
        k: rank (1-based)
        top_degrees: M_1, ..., M_k of the snapshot
        n_prime: denominator n + n0
        vertex_count: committed vertices of the snapshot
        params: model parameters

    Returns:
        Probability that the rank-k vertex gains an edge in the vertex step
        plus the probability it gains one in the edge step.
    """
    if len(top_degrees) < k:
        raise ValueError(f"need {k} top degrees, got {len(top_degrees)}")
    degrees = list(top_degrees[:k])
    a, b, alpha, beta, d = params.a, params.b, params.alpha, params.beta, params.d
    vertex_part = min(1.0, (a * degrees[-1] + b) / n_prime)
    union = [1.0 - (1.0 - min(1.0, (alpha * g + beta) / n_prime)) ** d for g in degrees]
    q = q_expected(k, params.m_dist, union[:-1])
    not_source = 1.0 - 1.0 / (vertex_count + 1)
    return vertex_part + not_source * union[-1] * q
