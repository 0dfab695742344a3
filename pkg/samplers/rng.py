"""
Reproducible random streams.

A stream is a pure function of (master_seed, stream_id): the pair seeds a
numpy SeedSequence (stream_id goes into the spawn key) which drives a PCG64
bit generator. Replica r of a run always uses stream_id = r.
"""

from typing import Any, Dict, Optional

import numpy as np

MAX_SEED = 2**64 - 1


class RngStream:
    """Thin wrapper around ``numpy.random.Generator`` bound to a stream id."""

    def __init__(self, master_seed: int, stream_id: int = 0):
        if not 0 <= master_seed <= MAX_SEED:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {master_seed}")
        if not 0 <= stream_id <= MAX_SEED:
            raise ValueError(f"stream_id must be a 64-bit unsigned integer, got {stream_id}")
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(seq))

    def random(self) -> float:
        return float(self.generator.random())

    def integers(self, high: int) -> int:
        """Uniform integer in [0, high)."""
        return int(self.generator.integers(0, high))

    def binomial(self, count, prob):
        return self.generator.binomial(count, prob)

    def choice(self, population: int, size: int) -> np.ndarray:
        """``size`` distinct indices from range(population), in random order."""
        return self.generator.choice(population, size=size, replace=False, shuffle=True)

    def uniform_array(self, size: int) -> np.ndarray:
        return self.generator.random(size)

    def get_state(self) -> Dict[str, Any]:
        return {
            "master_seed": self.master_seed,
            "stream_id": self.stream_id,
            "bit_generator": self.generator.bit_generator.state,
        }

    def set_state(self, state: Dict[str, Any]) -> None:
        self.master_seed = int(state["master_seed"])
        self.stream_id = int(state["stream_id"])
        self.generator.bit_generator.state = state["bit_generator"]

    def copy(self) -> "RngStream":
        twin = RngStream(self.master_seed, self.stream_id)
        twin.set_state(self.get_state())
        return twin

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"


def derive_stream(master_seed: int, stream_id: int, state: Optional[Dict[str, Any]] = None) -> RngStream:
    """
    Create the stream for ``(master_seed, stream_id)``.

    Args:
        master_seed: run seed (64-bit unsigned)
        stream_id: replica index or any other stream label
        state: optional saved state to resume from

    Returns:
        A fresh RngStream; identical inputs give identical sequences.
    """
    stream = RngStream(master_seed, stream_id)
    if state is not None:
        stream.set_state(state)
    return stream
