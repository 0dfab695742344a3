"""
Drift diagnostic - empirical one-step increments of the top in-degrees

While the top k+1 in-degrees are distinct, the rank-k vertex is unique and
its expected gain over one step is known in closed form. The recorder follows
that vertex through each step, buckets its gains geometrically in n and sums
the per-step predictions alongside; ``drift_check`` turns every bucket into a
z-score.
"""

import logging
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from model.graph import GraphState, StepReport
from model.observers import SimulationObserver
from model.params import ModelParams
from theory.functions import drift, drift_finite

logger = logging.getLogger(__name__)

DEFAULT_N_MIN = 10_000
DEFAULT_GROWTH = 1.5
DEFAULT_MIN_COUNT = 30


@dataclass
class DriftBucket:
    """Increments of one rank over steps n in [n_lo, n_hi)."""

    rank: int
    n_lo: int
    n_hi: int
    count: int = 0
    increment_sum: float = 0.0
    increment_sq_sum: float = 0.0
    predicted_sum: float = 0.0
    start_ratios: Tuple[float, ...] = ()

    def add(self, increment: float, predicted: float) -> None:
        self.count += 1
        self.increment_sum += increment
        self.increment_sq_sum += increment * increment
        self.predicted_sum += predicted

    @property
    def mean(self) -> float:
        return self.increment_sum / self.count if self.count else 0.0

    @property
    def predicted_mean(self) -> float:
        return self.predicted_sum / self.count if self.count else 0.0

    @property
    def variance(self) -> float:
        """Sample variance of the increments."""
        if self.count < 2:
            return 0.0
        centered = self.increment_sq_sum - self.count * self.mean**2
        return max(0.0, centered / (self.count - 1))

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count else 0.0


class DriftCheck(BaseModel):
    rank: int
    n_lo: int
    n_hi: int
    count: int
    empirical_mean: float
    predicted_mean: float = Field(description="Average of the per-step finite-n predictions")
    reference_drift: Optional[float] = Field(
        default=None, description="Limit drift g_k at the bucket-start ratios"
    )
    stderr: float
    z: float
    reference_z: Optional[float] = Field(
        default=None, description="Deviation of the bucket mean from reference_drift, in standard errors"
    )


class DriftRecorder(SimulationObserver):
    """
    Observer collecting rank-k increments into geometric buckets.

    Args:
        params: model parameters of the run
        ranks: ranks to follow
        n_min: first step counted
        growth: ratio between consecutive bucket edges
    """

    def __init__(
        self,
        params: ModelParams,
        ranks: Sequence[int] = (1,),
        n_min: int = DEFAULT_N_MIN,
        growth: float = DEFAULT_GROWTH,
    ):
        if not ranks or min(ranks) < 1:
            raise ValueError(f"ranks must be positive, got {list(ranks)}")
        if n_min < 1:
            raise ValueError(f"n_min must be at least 1, got {n_min}")
        if growth <= 1.0:
            raise ValueError(f"growth must exceed 1, got {growth}")
        self.params = params
        self.ranks = tuple(sorted(set(ranks)))
        self.n_min = n_min
        self.growth = growth
        self._edges: List[int] = [n_min]
        self._buckets: Dict[Tuple[int, int], DriftBucket] = {}
        # (rank, vertex, degree before the step, prediction, start ratios)
        self._pending: List[Tuple[int, int, int, float, Tuple[float, ...]]] = []
        self.skipped_ties = 0

    def _bucket_index(self, n: int) -> int:
        while self._edges[-1] <= n:
            self._edges.append(max(self._edges[-1] + 1, math.ceil(self._edges[-1] * self.growth)))
        return bisect_right(self._edges, n) - 1

    def record(
        self,
        rank: int,
        n: int,
        increment: float,
        predicted: float,
        start_ratios: Sequence[float] = (),
    ) -> None:
        """Add one observed increment at step count n (ignored below n_min)."""
        if n < self.n_min:
            return
        index = self._bucket_index(n)
        key = (rank, index)
        bucket = self._buckets.get(key)
        if bucket is None:
            bucket = DriftBucket(
                rank=rank,
                n_lo=self._edges[index],
                n_hi=self._edges[index + 1],
                start_ratios=tuple(start_ratios),
            )
            self._buckets[key] = bucket
        bucket.add(increment, predicted)

    def _prepare(self, state: GraphState) -> None:
        """Predictions for the coming step, from the pre-step snapshot."""
        self._pending = []
        n = state.n
        if n < self.n_min:
            return
        top = state.top_degrees(self.ranks[-1] + 1)
        for rank in self.ranks:
            head = top[: rank + 1]
            if any(earlier == later for earlier, later in zip(head, head[1:])):
                self.skipped_ties += 1
                continue
            degree = top[rank - 1]
            vertex = state.registry.bucket(degree)[0]
            predicted = drift_finite(rank, top, state.n_prime, state.vertex_count, self.params)
            ratios = tuple(g / n for g in top[:rank])
            self._pending.append((rank, vertex, degree, predicted, ratios))

    def on_start(self, state: GraphState) -> None:
        self._prepare(state)

    def on_step(self, state: GraphState, report: StepReport) -> None:
        n_before = state.n - 1
        for rank, vertex, degree, predicted, ratios in self._pending:
            self.record(rank, n_before, state.in_degrees[vertex] - degree, predicted, ratios)
        self._prepare(state)

    @property
    def buckets(self) -> List[DriftBucket]:
        return [self._buckets[key] for key in sorted(self._buckets)]


def _standardize(diff: float, stderr: float) -> float:
    if stderr > 0.0:
        return diff / stderr
    return 0.0 if abs(diff) < 1e-12 else math.copysign(math.inf, diff)


def drift_check(
    buckets: Sequence[DriftBucket],
    params: Optional[ModelParams] = None,
    min_count: int = DEFAULT_MIN_COUNT,
) -> List[DriftCheck]:
    """
    Standardized deviation of every bucket's mean increment from its prediction.

    Buckets with fewer than ``min_count`` steps are dropped. When ``params`` is
    given the limit drift at the bucket-start ratios is reported as well, with
    its own z-score; only ``z`` (against the finite-n prediction) is gated on.
    """
    checks: List[DriftCheck] = []
    for bucket in buckets:
        if bucket.count < min_count:
            continue
        stderr = bucket.stderr
        z = _standardize(bucket.mean - bucket.predicted_mean, stderr)
        reference = reference_z = None
        if params is not None and len(bucket.start_ratios) >= bucket.rank:
            reference = drift(bucket.rank, bucket.start_ratios, params)
            reference_z = _standardize(bucket.mean - reference, stderr)
        checks.append(
            DriftCheck(
                rank=bucket.rank,
                n_lo=bucket.n_lo,
                n_hi=bucket.n_hi,
                count=bucket.count,
                empirical_mean=bucket.mean,
                predicted_mean=bucket.predicted_mean,
                reference_drift=reference,
                stderr=stderr,
                z=z,
                reference_z=reference_z,
            )
        )
    worst = max((abs(c.z) for c in checks), default=0.0)
    logger.debug("Drift check: %d buckets, max |z| = %.3f", len(checks), worst)
    return checks
