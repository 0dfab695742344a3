"""
Literal two-stage edge step, used as a reference for the fast path.

Each of the d samples is drawn vertex by vertex; from every sample its m_n
highest in-degree members go to a secondary sample, which is topped up
uniformly when a sample is short. The final targets are the m_n distinct
highest in-degree members of the secondary sample. O(n*d) per call.
"""

from typing import TYPE_CHECKING, List, Sequence

import numpy as np

from .inclusion import uniform_fill
from .rng import RngStream

if TYPE_CHECKING:
    from model.graph import GraphState


def _top_by_degree(
    candidates: Sequence[int],
    degrees: np.ndarray,
    count: int,
    rng: RngStream,
) -> List[int]:
    """``count`` highest-degree candidates; ties in random order."""
    if len(candidates) == 0:
        return []
    shuffled = rng.generator.permutation(np.asarray(candidates, dtype=np.int64))
    order = np.argsort(-degrees[shuffled], kind="stable")
    return [int(v) for v in shuffled[order[:count]]]


def two_stage_oracle(state: "GraphState", u_n: int, m_n: int, rng: RngStream) -> List[int]:
    """
    Edge-step targets by the verbatim two-stage procedure.

    Args:
        state: snapshot G_n with v_{n+1} staged
        u_n: edge source (never a candidate)
        m_n: number of edges to draw
        rng: random stream

    Returns:
        m_n distinct vertex ids.
    """
    params = state.params
    population = len(state.positions)
    degrees = np.asarray(state.in_degrees, dtype=np.int64)
    p = np.minimum(1.0, (params.alpha * degrees + params.beta) / state.n_prime)
    p[u_n] = 0.0

    secondary: List[int] = []
    for _ in range(params.d):
        included = np.flatnonzero(rng.uniform_array(population) < p)
        chosen = _top_by_degree(included, degrees, m_n, rng)
        if len(chosen) < m_n:
            chosen += uniform_fill(population, [u_n, *chosen], m_n - len(chosen), rng)
        secondary.extend(chosen)

    distinct = list(dict.fromkeys(secondary))
    targets = _top_by_degree(distinct, degrees, m_n, rng)
    if len(targets) < m_n:
        targets += uniform_fill(population, [u_n, *targets], m_n - len(targets), rng)
    return targets
