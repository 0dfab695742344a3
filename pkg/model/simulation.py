"""
Simulation - the growth loop of the spatial preferential attachment graph

Each step adds a located vertex v_{n+1} and draws edges in two sub-steps,
both computed against the snapshot G_n:

- vertex step: v_{n+1} links to every vertex whose ball contains X_{n+1};
- edge step: a uniform source u_n links to the m_n highest in-degree
  vertices found in d preferential samples, topped up uniformly when the
  samples hold fewer than m_n distinct vertices.

All edges of a step are committed together at its end.
"""

import logging
from typing import Iterable, List, Optional, Sequence

import numpy as np

from samplers.inclusion import class_union_sample, uniform_fill
from samplers.rng import RngStream, derive_stream

from .graph import EdgeStepResult, GraphState, StepReport, TimeSeriesRow
from .observers import wants_steps
from .params import ModelParams
from .series import TimeSeries

logger = logging.getLogger(__name__)


def init(params: ModelParams, rng: RngStream) -> GraphState:
    """Initial graph G_0: n0 isolated vertices at i.i.d. uniform positions."""
    state = GraphState(params)
    for _ in range(params.n0):
        state.add_vertex(rng.random())
    return state


def vertex_step(state: GraphState, x_new: float) -> List[int]:
    """Ids of the vertices whose ball B_n(v) contains ``x_new``; no mutation."""
    return state.index.query_balls(x_new, state.n_prime)


def draw_m(params: ModelParams, rng: RngStream) -> int:
    """Draw m_n from the law of m; a degenerate law consumes no randomness."""
    support = [r for r, p in enumerate(params.m_dist, start=1) if p > 0.0]
    if len(support) == 1:
        return support[0]
    cdf = np.cumsum(params.m_dist)
    r = int(np.searchsorted(cdf, rng.random(), side="right")) + 1
    return min(r, support[-1])


def inclusion_probability(params: ModelParams, n_prime: int):
    """Per-sample inclusion probability as a function of in-degree (clamped at 1)."""
    alpha, beta = params.alpha, params.beta

    def p_of_degree(degrees: np.ndarray) -> np.ndarray:
        return np.minimum(1.0, (alpha * degrees + beta) / n_prime)

    return p_of_degree


def edge_step(state: GraphState, new_vertex_id: int, rng: RngStream) -> EdgeStepResult:
    """
    Choose u_n and its m_n targets.

    Args:
        state: snapshot G_n with v_{n+1} staged (in-degree 0, not yet registered)
        new_vertex_id: id of the staged vertex
        rng: random stream

    Returns:
        EdgeStepResult (unpacks as ``u_n, targets, m_n``); targets are
        distinct, never u_n, highest snapshot in-degree first.
    """
    params = state.params
    m = draw_m(params, rng)
    population = len(state.positions)
    source = rng.integers(population)
    targets = class_union_sample(
        state.registry,
        (source,),
        (new_vertex_id,),
        inclusion_probability(params, state.n_prime),
        params.d,
        rng,
        limit=m,
    )
    fill_count = m - len(targets)
    if fill_count:
        targets.extend(uniform_fill(population, [source, *targets], fill_count, rng))
    return EdgeStepResult(source=source, targets=targets, m=m, fill_count=fill_count)


def step(state: GraphState, rng: RngStream) -> StepReport:
    """Grow G_n into G_{n+1} and return what happened."""
    x_new = rng.random()
    vertex_targets = vertex_step(state, x_new)
    new_vertex_id = state.stage_vertex(x_new)
    outcome = edge_step(state, new_vertex_id, rng)
    report = StepReport(
        step=state.n + 1,
        new_vertex=new_vertex_id,
        position=x_new,
        vertex_step_targets=vertex_targets,
        edge_source=outcome.source,
        m=outcome.m,
        edge_step_targets=outcome.targets,
        fill_count=outcome.fill_count,
    )
    state.commit(report)
    return report


def checkpoint_row(state: GraphState, track_k: int) -> TimeSeriesRow:
    return TimeSeriesRow(n=state.n, E=state.total_in_edges, ranks=state.top_degrees(track_k))


class Simulation:
    """One run of the process with its observers."""

    def __init__(
        self,
        params: ModelParams,
        rng: Optional[RngStream] = None,
        observers: Sequence = (),
    ):
        self.params = params
        self.rng = rng if rng is not None else derive_stream(params.seed, 0)
        self.observers = list(observers)
        self._step_observers = [o for o in self.observers if wants_steps(o)]
        self.state = init(params, self.rng)
        self.series = TimeSeries(params.track_k)

    def _checkpoint(self) -> None:
        row = checkpoint_row(self.state, self.params.track_k)
        self.series.append(row)
        for observer in self.observers:
            observer.on_checkpoint(row)

    def step(self) -> StepReport:
        report = step(self.state, self.rng)
        for observer in self._step_observers:
            observer.on_step(self.state, report)
        return report

    def run(self) -> TimeSeries:
        params = self.params
        logger.info(
            "Starting run: a=%s b=%s alpha=%s beta=%s d=%d m_dist=%s n0=%d steps=%d stream=%d",
            params.a, params.b, params.alpha, params.beta, params.d,
            params.m_dist, params.n0, params.steps, self.rng.stream_id,
        )
        for observer in self.observers:
            observer.on_start(self.state)
        self._checkpoint()
        stride = params.checkpoint_stride
        for _ in range(params.steps):
            self.step()
            if self.state.n % stride == 0 or self.state.n == params.steps:
                self._checkpoint()
        for observer in self.observers:
            observer.on_finish(self.series)
        last = self.series.last
        logger.info("Run finished: n=%d E=%d M_1=%d", last.n, last.E, last.ranks[0])
        return self.series


def run(
    params: ModelParams,
    observers: Iterable = (),
    rng: Optional[RngStream] = None,
) -> TimeSeries:
    """Execute ``params.steps`` steps and return every checkpoint row."""
    return Simulation(params, rng=rng, observers=list(observers)).run()
