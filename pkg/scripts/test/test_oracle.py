"""
The fast edge step against the literal two-stage procedure
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from collections import Counter

import numpy as np
import pytest

from model.graph import GraphState
from model.params import ModelParams
from model.simulation import edge_step
from samplers.oracle import two_stage_oracle
from samplers.rng import RngStream

DEGREES = [20] * 2 + [10] * 8 + [3] * 15 + [0] * 25


def frozen_state(m_dist, beta=8.0, degrees=DEGREES):
    params = ModelParams(a=0.3, b=1.0, alpha=0.3, beta=beta, d=2, m_dist=m_dist, n0=10)
    rng = np.random.default_rng(0)
    positions = rng.random(len(degrees)).tolist()
    state = GraphState.from_degrees(params, positions, degrees, n=len(degrees) - 10)
    state.stage_vertex(0.5)
    return state


def degree_profile(state, targets):
    return tuple(sorted((state.in_degrees[v] for v in targets), reverse=True))


def total_variation(first: Counter, second: Counter, trials: int) -> float:
    keys = set(first) | set(second)
    return 0.5 * sum(abs(first[k] - second[k]) for k in keys) / trials


@pytest.mark.parametrize("m_dist", [[1.0], [0.0, 1.0]])
def test_fast_path_matches_oracle_in_distribution(m_dist):
    """TV distance between target-degree laws stays below 0.02 over 10^5 trials."""
    print(f"\n⚖️ Comparing fast path and oracle for m_dist={m_dist}...")
    state = frozen_state(m_dist)
    population = len(state.positions)
    new_vertex = state.pending
    trials = 10**5
    fast_rng, oracle_rng = RngStream(21), RngStream(22)
    fast, oracle = Counter(), Counter()
    for _ in range(trials):
        outcome = edge_step(state, new_vertex, fast_rng)
        fast[degree_profile(state, outcome.targets)] += 1
        source = oracle_rng.integers(population)
        targets = two_stage_oracle(state, source, outcome.m, oracle_rng)
        oracle[degree_profile(state, targets)] += 1
    distance = total_variation(fast, oracle, trials)
    assert distance <= 0.02, f"TV distance {distance:.4f}"
    print(f"✅ TV distance {distance:.4f}")


def test_all_included_reduces_to_global_top():
    """With every probability clamped to 1 both procedures pick the top degrees."""
    state = frozen_state([0.0, 1.0], beta=60.0)
    rng = RngStream(3)
    for _ in range(200):
        source, targets, m = edge_step(state, state.pending, rng)
        assert m == 2
        assert source not in targets
        expected = sorted(g for v, g in enumerate(state.in_degrees) if v != source)[::-1][:2]
        assert degree_profile(state, targets) == tuple(expected)
        oracle = two_stage_oracle(state, source, m, rng)
        assert degree_profile(state, oracle) == tuple(expected)


def test_fill_rule_tops_up_short_samples():
    """An almost empty union still yields m distinct targets."""
    state = frozen_state([0.0, 0.0, 1.0], beta=1e-9, degrees=[0] * 50)
    rng = RngStream(4)
    fills = 0
    for _ in range(200):
        outcome = edge_step(state, state.pending, rng)
        assert len(set(outcome.targets)) == 3
        assert outcome.source not in outcome.targets
        fills += outcome.fill_count
        oracle = two_stage_oracle(state, outcome.source, 3, rng)
        assert len(set(oracle)) == 3 and outcome.source not in oracle
    assert fills > 0, "the fill rule should engage"
