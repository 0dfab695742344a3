"""
Degree Class Registry - vertices grouped by exact in-degree

Buckets are kept per degree value with O(1) swap-remove, and the occupied
degree values are kept sorted so classes can be walked from the highest
in-degree down. The same structure answers the M_i(n) rank queries.
"""

from bisect import bisect_left
from typing import Dict, Iterable, Iterator, List, Tuple

import numpy as np


class DegreeClassRegistry:
    """Ordered map in-degree -> bucket of vertex ids."""

    def __init__(self):
        self._buckets: Dict[int, List[int]] = {}
        # sorted ascending, aligned with _sizes
        self._keys: List[int] = []
        self._sizes: List[int] = []
        self._degree: List[int] = []
        self._slot: List[int] = []
        self.total_in_edges = 0

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "DegreeClassRegistry":
        """Build a registry from scratch; vertex ids are list positions."""
        registry = cls()
        for vertex_id, degree in enumerate(degrees):
            registry.add(vertex_id, int(degree))
        return registry

    @property
    def vertex_count(self) -> int:
        return len(self._degree)

    def __len__(self) -> int:
        return len(self._degree)

    def __contains__(self, vertex_id: int) -> bool:
        return 0 <= vertex_id < len(self._degree)

    def degree_of(self, vertex_id: int) -> int:
        return self._degree[vertex_id]

    def bucket(self, degree: int) -> List[int]:
        return self._buckets.get(degree, [])

    def add(self, vertex_id: int, degree: int = 0) -> None:
        """Register the next vertex; ids must be contiguous."""
        if vertex_id != len(self._degree):
            raise ValueError(
                f"vertex ids must be registered in order: expected {len(self._degree)}, got {vertex_id}"
            )
        if degree < 0:
            raise ValueError(f"in-degree must be non-negative, got {degree}")
        self._degree.append(degree)
        self._slot.append(0)
        self._put(vertex_id, degree)
        self.total_in_edges += degree

    def increment(self, vertex_id: int) -> int:
        """Move a vertex to the next degree class; returns the new degree."""
        degree = self._degree[vertex_id]
        self._take(vertex_id, degree)
        degree += 1
        self._degree[vertex_id] = degree
        self._put(vertex_id, degree)
        self.total_in_edges += 1
        return degree

    def _put(self, vertex_id: int, degree: int) -> None:
        bucket = self._buckets.get(degree)
        if bucket is None:
            bucket = []
            self._buckets[degree] = bucket
            pos = bisect_left(self._keys, degree)
            self._keys.insert(pos, degree)
            self._sizes.insert(pos, 0)
        else:
            pos = bisect_left(self._keys, degree)
        self._slot[vertex_id] = len(bucket)
        bucket.append(vertex_id)
        self._sizes[pos] += 1

    def _take(self, vertex_id: int, degree: int) -> None:
        bucket = self._buckets[degree]
        slot = self._slot[vertex_id]
        last = bucket.pop()
        if last != vertex_id:
            bucket[slot] = last
            self._slot[last] = slot
        pos = bisect_left(self._keys, degree)
        self._sizes[pos] -= 1
        if not bucket:
            del self._buckets[degree]
            del self._keys[pos]
            del self._sizes[pos]

    def iter_classes_desc(self) -> Iterator[Tuple[int, List[int]]]:
        """Yield (degree, bucket) from the highest degree down."""
        for degree in reversed(self._keys):
            yield degree, self._buckets[degree]

    def class_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Degree values and class sizes, both in descending degree order."""
        keys = np.array(self._keys[::-1], dtype=np.int64)
        sizes = np.array(self._sizes[::-1], dtype=np.int64)
        return keys, sizes

    def top_degrees(self, k: int) -> List[int]:
        """M_1 >= ... >= M_k, padded with zeros when there are fewer vertices."""
        out: List[int] = []
        for pos in range(len(self._keys) - 1, -1, -1):
            take = min(self._sizes[pos], k - len(out))
            out.extend([self._keys[pos]] * take)
            if len(out) >= k:
                break
        out.extend([0] * (k - len(out)))
        return out

    @property
    def distinct_degrees(self) -> int:
        return len(self._keys)

    def canonical(self) -> Dict[int, List[int]]:
        """Order-free view used by the rebuild audit."""
        return {degree: sorted(bucket) for degree, bucket in self._buckets.items()}

    def audit(self) -> None:
        """Check every structural invariant; raises AssertionError on drift."""
        assert self._keys == sorted(self._buckets), "degree keys out of sync with buckets"
        assert all(self._buckets[g] for g in self._keys), "empty bucket kept"
        assert self._sizes == [len(self._buckets[g]) for g in self._keys], "class sizes out of sync"
        for degree, bucket in self._buckets.items():
            for slot, vertex_id in enumerate(bucket):
                assert self._degree[vertex_id] == degree, f"vertex {vertex_id} in wrong bucket"
                assert self._slot[vertex_id] == slot, f"vertex {vertex_id} has stale slot"
        assert sum(self._sizes) == len(self._degree), "vertex count mismatch"
        assert sum(g * len(b) for g, b in self._buckets.items()) == self.total_in_edges, "edge count mismatch"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DegreeClassRegistry):
            return NotImplemented
        return (
            self._degree == other._degree
            and self.total_in_edges == other.total_in_edges
            and self.canonical() == other.canonical()
        )

    def __repr__(self) -> str:
        return (
            f"DegreeClassRegistry(vertices={self.vertex_count}, "
            f"edges={self.total_in_edges}, classes={len(self._keys)})"
        )

    def to_dict(self) -> Dict[str, List[List[int]]]:
        """Bucket contents in their current order (sampling depends on it)."""
        return {"classes": [[degree, list(self._buckets[degree])] for degree in self._keys]}

    @classmethod
    def from_dict(cls, data: Dict[str, List[List[int]]]) -> "DegreeClassRegistry":
        """Inverse of ``to_dict``; restores bucket order exactly."""
        registry = cls()
        classes = [(int(degree), [int(v) for v in bucket]) for degree, bucket in data["classes"]]
        vertex_count = sum(len(bucket) for _, bucket in classes)
        registry._degree = [-1] * vertex_count
        registry._slot = [0] * vertex_count
        for degree, bucket in sorted(classes):
            if not bucket:
                continue
            registry._buckets[degree] = bucket
            registry._keys.append(degree)
            registry._sizes.append(len(bucket))
            for slot, vertex_id in enumerate(bucket):
                if not 0 <= vertex_id < vertex_count or registry._degree[vertex_id] != -1:
                    raise ValueError(f"vertex id {vertex_id} is out of range or listed twice")
                registry._degree[vertex_id] = degree
                registry._slot[vertex_id] = slot
            registry.total_in_edges += degree * len(bucket)
        if -1 in registry._degree:
            raise ValueError("registry data does not cover a contiguous id range")
        return registry
