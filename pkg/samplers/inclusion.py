"""
Bernoulli inclusion sampling over degree classes.

Every candidate vertex enters each of the d preferential samples
independently, so it lands in their union with probability 1-(1-p)^d where
p depends only on its in-degree. Vertices of equal degree are exchangeable:
one Binomial draw per class gives how many members of the class are
included, and that many members are then picked uniformly without
replacement. All class counts are drawn in a single vectorized call.
"""

from typing import Callable, Collection, Dict, List, Optional, Sequence, Set

import numpy as np

from .registry import DegreeClassRegistry
from .rng import RngStream

ProbabilityFn = Callable[[np.ndarray], np.ndarray]


def binomial(count: int, prob: float, rng: RngStream) -> int:
    """Exact Binomial(count, prob) variate."""
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"prob must lie in [0, 1], got {prob}")
    if count == 0 or prob == 0.0:
        return 0
    if prob == 1.0:
        return count
    return int(rng.binomial(count, prob))


def union_probability(p: np.ndarray, d: int) -> np.ndarray:
    """Probability of appearing in at least one of d independent samples."""
    return 1.0 - np.power(1.0 - p, d)


def _pick_members(
    bucket: Sequence[int],
    extras: Sequence[int],
    count: int,
    excluded: Collection[int],
    rng: RngStream,
) -> List[int]:
    """``count`` uniform distinct members of bucket+extras, skipping ``excluded``."""
    size = len(bucket)
    population = size + len(extras)
    draws = rng.choice(population, min(population, count + len(excluded)))
    picked: List[int] = []
    for index in draws:
        vertex_id = bucket[index] if index < size else extras[index - size]
        if vertex_id in excluded:
            continue
        picked.append(vertex_id)
        if len(picked) == count:
            break
    return picked


def class_union_sample(
    registry: DegreeClassRegistry,
    exclusions: Collection[int],
    extra_zero_degree: Sequence[int],
    p_of_degree: ProbabilityFn,
    d: int,
    rng: RngStream,
    limit: Optional[int] = None,
) -> List[int]:
    """
    Sample the union of d Bernoulli inclusion samples.

    Args:
        registry: degree classes of the snapshot graph
        exclusions: vertex ids that may not be included (the edge source)
        extra_zero_degree: candidate ids not yet registered, treated as in-degree 0
        p_of_degree: vectorized map from in-degree values to per-sample inclusion probability
        d: number of independent samples
        rng: random stream
        limit: stop once this many ids have been collected

    Returns:
        Included vertex ids, highest snapshot in-degree first; ties come in
        uniformly random order.
    """
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")

    for vertex_id in extra_zero_degree:
        if vertex_id in registry:
            raise ValueError(f"extra vertex {vertex_id} is already registered")

    keys, sizes = registry.class_arrays()
    extras = [v for v in extra_zero_degree if v not in exclusions]
    if extras:
        if keys.size and keys[-1] == 0:
            sizes[-1] += len(extras)
        else:
            keys = np.append(keys, 0)
            sizes = np.append(sizes, len(extras))
    if keys.size == 0:
        return []

    # exclusions only ever touch a handful of classes
    excluded_by_degree: Dict[int, Set[int]] = {}
    for vertex_id in exclusions:
        if vertex_id in registry:
            degree = registry.degree_of(vertex_id)
            excluded_by_degree.setdefault(degree, set()).add(vertex_id)
    for degree, members in excluded_by_degree.items():
        index = int(np.searchsorted(-keys, -degree))
        sizes[index] -= len(members)

    p = np.asarray(p_of_degree(keys.astype(float)), dtype=float)
    if p.shape != keys.shape:
        p = np.broadcast_to(p, keys.shape)
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("inclusion probabilities must lie in [0, 1]")
    counts = rng.binomial(sizes, union_probability(p, d))

    included: List[int] = []
    for index in np.flatnonzero(counts):
        degree = int(keys[index])
        picked = _pick_members(
            registry.bucket(degree),
            extras if degree == 0 else (),
            int(counts[index]),
            excluded_by_degree.get(degree, ()),
            rng,
        )
        included.extend(picked)
        if limit is not None and len(included) >= limit:
            return included[:limit]
    return included


def uniform_fill(
    population: int,
    excluded: Collection[int],
    count: int,
    rng: RngStream,
) -> List[int]:
    """
    Draw ``count`` distinct ids uniformly from range(population) minus ``excluded``.

    Rejection sampling; callers guarantee enough eligible ids exist.
    """
    if count <= 0:
        return []
    blocked = set(excluded)
    if population - len(blocked) < count:
        raise ValueError(
            f"cannot draw {count} distinct vertices from {population} with {len(blocked)} excluded"
        )
    drawn: List[int] = []
    while len(drawn) < count:
        vertex_id = rng.integers(population)
        if vertex_id in blocked:
            continue
        blocked.add(vertex_id)
        drawn.append(vertex_id)
    return drawn
