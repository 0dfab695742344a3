"""
Replica ensembles

Replica r runs on stream r of the master seed, so its trajectory depends on
nothing but (params, r). Replicas may finish in any order; summaries are
always returned and aggregated sorted by replica id.
"""

import logging
import math
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from tqdm import tqdm

from model.params import ModelParams
from model.series import TimeSeries
from model.simulation import Simulation
from samplers.rng import derive_stream
from theory.solver import TheoryResult

from .drift import DEFAULT_N_MIN, DriftCheck, DriftRecorder, drift_check
from .estimators import InsufficientDataError, RatioKind, default_window, estimate_exponent, ratio_values

logger = logging.getLogger(__name__)


class ReplicaSummary(BaseModel):
    """End-of-run statistics of one replica."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    replica_id: int = Field(ge=0)
    final_n: int = Field(ge=0)
    final_ranks: List[int] = Field(description="M_1..M_k at the final checkpoint")
    exponent: Optional[float] = Field(default=None, description="Slope of log M_1 vs log n, last two decades")
    exponent_stderr: Optional[float] = None
    exponent_last_decade: Optional[float] = Field(default=None, description="Same slope over the last decade")
    ratios: List[float] = Field(default_factory=list, description="Final M_k(n)/n")
    critical_ratio: Optional[float] = Field(default=None, description="Final M_1(n) ln n / n")
    drift: List[DriftCheck] = Field(default_factory=list)
    series: Optional[TimeSeries] = Field(default=None, exclude=True)

    @model_validator(mode="after")
    def _check_values(self) -> "ReplicaSummary":
        if any(r < 0 for r in self.ratios):
            raise ValueError("ratios must be non-negative")
        for value in (self.exponent, self.exponent_last_decade):
            if value is not None and not math.isfinite(value):
                raise ValueError("exponent estimates must be finite")
        return self

    @property
    def max_abs_z(self) -> float:
        return max((abs(check.z) for check in self.drift), default=0.0)


class EnsembleReport(BaseModel):
    """Aggregate of replica summaries; a pure function of them."""

    replica_count: int
    final_n: int
    mean_ratios: List[float] = Field(default_factory=list)
    stderr_ratios: List[float] = Field(default_factory=list)
    mean_abs_deviation: List[float] = Field(
        default_factory=list, description="Mean |M_k(n)/n - x_k*| over replicas, k <= K"
    )
    mean_critical_ratio: Optional[float] = None
    stderr_critical_ratio: Optional[float] = None
    mean_exponent: Optional[float] = None
    stderr_exponent: Optional[float] = None
    mean_exponent_last_decade: Optional[float] = None
    max_abs_z: float = 0.0
    drift_buckets: int = 0


def _optional_fit(series: TimeSeries, window) -> Optional[tuple]:
    try:
        estimate = estimate_exponent(series, window)
    except InsufficientDataError as exc:
        logger.debug("No exponent estimate: %s", exc)
        return None
    return estimate.slope, estimate.stderr


def summarize_series(
    replica_id: int,
    series: TimeSeries,
    drift: Sequence[DriftCheck] = (),
    keep_series: bool = False,
) -> ReplicaSummary:
    """Turn one trajectory into a ReplicaSummary."""
    last = series.last
    ratios: List[float] = []
    critical_ratio = None
    if last.n >= 1:
        ratios = [float(value) / last.n for value in last.ranks]
        _, critical = ratio_values(series, RatioKind.M1_LOGN_OVER_N)
        critical_ratio = float(critical[-1])
    fit = _optional_fit(series, None)
    last_decade = _optional_fit(series, default_window(last.n, decades=1.0)) if last.n >= 1 else None
    return ReplicaSummary(
        replica_id=replica_id,
        final_n=last.n,
        final_ranks=list(last.ranks),
        exponent=fit[0] if fit else None,
        exponent_stderr=fit[1] if fit else None,
        exponent_last_decade=last_decade[0] if last_decade else None,
        ratios=ratios,
        critical_ratio=critical_ratio,
        drift=list(drift),
        series=series if keep_series else None,
    )


def run_replica(
    params: ModelParams,
    replica_id: int,
    drift_ranks: Sequence[int] = (1,),
    drift_n_min: int = DEFAULT_N_MIN,
    keep_series: bool = True,
) -> ReplicaSummary:
    """Run replica ``replica_id`` on stream ``replica_id`` of ``params.seed``."""
    recorder = DriftRecorder(params, ranks=drift_ranks, n_min=drift_n_min)
    simulation = Simulation(params, rng=derive_stream(params.seed, replica_id), observers=[recorder])
    series = simulation.run()
    checks = drift_check(recorder.buckets, params)
    return summarize_series(replica_id, series, checks, keep_series=keep_series)


def run_replicas(
    params: ModelParams,
    replica_count: int,
    parallelism: int = 1,
    drift_ranks: Sequence[int] = (1,),
    drift_n_min: int = DEFAULT_N_MIN,
    progress: bool = False,
    keep_series: bool = True,
) -> List[ReplicaSummary]:
    """
    Run independent replicas, optionally in worker processes.

    Args:
        params: model parameters shared by every replica
        replica_count: number of replicas (>= 1)
        parallelism: worker processes; 1 runs in-process
        drift_ranks: ranks followed by each replica's drift recorder
        drift_n_min: first step counted by the drift recorder
        progress: show a tqdm bar over completed replicas
        keep_series: attach each trajectory to its summary

    Returns:
        Summaries sorted by replica id; identical for any ``parallelism``.
    """
    if replica_count < 1:
        raise ValueError(f"replica_count must be at least 1, got {replica_count}")
    if parallelism < 1:
        raise ValueError(f"parallelism must be at least 1, got {parallelism}")

    results: Dict[int, ReplicaSummary] = {}
    bar = tqdm(total=replica_count, desc="replicas", unit="run", disable=not progress)
    try:
        if parallelism == 1 or replica_count == 1:
            for replica_id in range(replica_count):
                results[replica_id] = run_replica(params, replica_id, drift_ranks, drift_n_min, keep_series)
                logger.info("Replica %d done: final M_1=%d", replica_id, results[replica_id].final_ranks[0])
                bar.update(1)
        else:
            workers = min(parallelism, replica_count)
            with ProcessPoolExecutor(max_workers=workers, mp_context=mp.get_context("spawn")) as pool:
                futures = {
                    pool.submit(run_replica, params, replica_id, tuple(drift_ranks), drift_n_min, keep_series): replica_id
                    for replica_id in range(replica_count)
                }
                for future in as_completed(futures):
                    replica_id = futures[future]
                    results[replica_id] = future.result()
                    logger.info("Replica %d done: final M_1=%d", replica_id, results[replica_id].final_ranks[0])
                    bar.update(1)
    finally:
        bar.close()
    return [results[replica_id] for replica_id in sorted(results)]


def _mean_stderr(values: Sequence[float]):
    if not values:
        return None, None
    array = np.asarray(values, dtype=float)
    stderr = float(array.std(ddof=1) / math.sqrt(array.size)) if array.size > 1 else 0.0
    return float(array.mean()), stderr


def summarize_ensemble(
    summaries: Sequence[ReplicaSummary],
    theory: Optional[TheoryResult] = None,
) -> EnsembleReport:
    """Means and standard errors across replicas, in replica-id order."""
    if not summaries:
        raise ValueError("no replica summaries to aggregate")
    ordered = sorted(summaries, key=lambda s: s.replica_id)
    rank_count = min(len(s.ratios) for s in ordered)
    mean_ratios, stderr_ratios = [], []
    for k in range(rank_count):
        mean, stderr = _mean_stderr([s.ratios[k] for s in ordered])
        mean_ratios.append(mean)
        stderr_ratios.append(stderr)

    deviations: List[float] = []
    if theory is not None:
        for k, target in enumerate(theory.x_star[:rank_count]):
            deviations.append(float(np.mean([abs(s.ratios[k] - target) for s in ordered])))

    critical_mean, critical_stderr = _mean_stderr(
        [s.critical_ratio for s in ordered if s.critical_ratio is not None]
    )
    exponent_mean, exponent_stderr = _mean_stderr([s.exponent for s in ordered if s.exponent is not None])
    decade_mean, _ = _mean_stderr(
        [s.exponent_last_decade for s in ordered if s.exponent_last_decade is not None]
    )
    return EnsembleReport(
        replica_count=len(ordered),
        final_n=ordered[0].final_n,
        mean_ratios=mean_ratios,
        stderr_ratios=stderr_ratios,
        mean_abs_deviation=deviations,
        mean_critical_ratio=critical_mean,
        stderr_critical_ratio=critical_stderr,
        mean_exponent=exponent_mean,
        stderr_exponent=exponent_stderr,
        mean_exponent_last_decade=decade_mean,
        max_abs_z=max(s.max_abs_z for s in ordered),
        drift_buckets=sum(len(s.drift) for s in ordered),
    )
