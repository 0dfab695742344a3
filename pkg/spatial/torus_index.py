"""
Torus Index - which balls B_n(v) contain a query point

Vertices live on the circle [0, 1). Each vertex owns a ball whose
half-width is min(1, (a*deg + b)/n')/2. Light vertices (half-width <= delta)
sit in a uniform cell grid and are found by scanning the cells under the
query window; heavy vertices are few and are scanned exhaustively. Every
candidate goes through the exact distance test, so tier membership only
affects cost, never the answer.
"""

import logging
import math
from typing import Dict, List, Set

logger = logging.getLogger(__name__)

MIN_CELLS = 64
TARGET_OCCUPANCY = 4


class DuplicateVertexError(KeyError):
    """Raised when a vertex id is inserted twice."""


def torus_distance(x: float, y: float) -> float:
    gap = abs(x - y)
    return min(gap, 1.0 - gap)


def ball_half_width(degree: int, n_prime: int, a: float, b: float) -> float:
    """Half-width of B_n(v); the ball never exceeds the whole torus."""
    return min(1.0, (a * degree + b) / n_prime) / 2.0


class TorusIndex:
    """Two-tier spatial index over vertex balls on the 1-D torus."""

    def __init__(self, a: float, b: float, delta: float = 0.01):
        if not 0.0 < delta <= 0.5:
            raise ValueError(f"delta must lie in (0, 0.5], got {delta}")
        self.a = a
        self.b = b
        self.delta = delta
        self._positions: List[float] = []
        self._degrees: List[int] = []
        self._heavy: Set[int] = set()
        self._cell_count = MIN_CELLS
        self._cells: List[List[int]] = [[] for _ in range(self._cell_count)]
        self._light_count = 0
        # upper bound on the in-degree of any light vertex
        self._light_max_degree = 0
        self.counters: Dict[str, int] = {
            "queries": 0,
            "light_touched": 0,
            "heavy_touched": 0,
            "rebuilds": 0,
        }

    def __len__(self) -> int:
        return len(self._positions)

    @property
    def heavy(self) -> Set[int]:
        return self._heavy

    def is_heavy(self, vertex_id: int) -> bool:
        return vertex_id in self._heavy

    def position_of(self, vertex_id: int) -> float:
        return self._positions[vertex_id]

    def degree_of(self, vertex_id: int) -> int:
        return self._degrees[vertex_id]

    def _cell_of(self, position: float) -> int:
        return min(int(position * self._cell_count), self._cell_count - 1)

    def _half_width(self, vertex_id: int, n_prime: int) -> float:
        return ball_half_width(self._degrees[vertex_id], n_prime, self.a, self.b)

    def _make_light(self, vertex_id: int) -> None:
        self._cells[self._cell_of(self._positions[vertex_id])].append(vertex_id)
        self._light_count += 1
        self._light_max_degree = max(self._light_max_degree, self._degrees[vertex_id])

    def _make_heavy(self, vertex_id: int) -> None:
        cell = self._cells[self._cell_of(self._positions[vertex_id])]
        cell.remove(vertex_id)
        self._light_count -= 1
        self._heavy.add(vertex_id)

    def insert(self, vertex_id: int, position: float, n_prime: int, degree: int = 0) -> None:
        """Add a vertex; ids are contiguous and may only be inserted once."""
        if vertex_id < len(self._positions):
            raise DuplicateVertexError(f"vertex {vertex_id} is already indexed")
        if vertex_id != len(self._positions):
            raise ValueError(f"expected vertex id {len(self._positions)}, got {vertex_id}")
        if not 0.0 <= position < 1.0:
            raise ValueError(f"position must lie in [0, 1), got {position}")
        self._positions.append(position)
        self._degrees.append(degree)
        if self._half_width(vertex_id, n_prime) > self.delta:
            self._heavy.add(vertex_id)
        else:
            self._make_light(vertex_id)
        if self._light_count > TARGET_OCCUPANCY * self._cell_count:
            self._rebuild(n_prime)

    def bump_degree(self, vertex_id: int, new_degree: int, n_prime: int) -> None:
        """Record a new in-degree and promote the vertex if its ball outgrew delta."""
        self._degrees[vertex_id] = new_degree
        if vertex_id in self._heavy:
            return
        if self._half_width(vertex_id, n_prime) > self.delta:
            self._make_heavy(vertex_id)
        elif new_degree > self._light_max_degree:
            self._light_max_degree = new_degree

    def _rebuild(self, n_prime: int) -> None:
        """Double the grid and sweep shrunken heavy vertices back to the light tier."""
        while self._light_count > TARGET_OCCUPANCY * self._cell_count:
            self._cell_count *= 2
        demoted = [v for v in self._heavy if self._half_width(v, n_prime) <= self.delta]
        for vertex_id in demoted:
            self._heavy.discard(vertex_id)
        self._cells = [[] for _ in range(self._cell_count)]
        self._light_count = 0
        self._light_max_degree = 0
        for vertex_id in range(len(self._positions)):
            if vertex_id not in self._heavy:
                self._make_light(vertex_id)
        self.counters["rebuilds"] += 1
        logger.debug(
            "Torus index rebuilt: %d cells, %d heavy, %d demoted",
            self._cell_count, len(self._heavy), len(demoted),
        )

    def query_balls(self, x: float, n_prime: int) -> List[int]:
        """
        Ids of all vertices whose ball contains ``x``.

        Args:
            x: query position in [0, 1)
            n_prime: current radius denominator n + n0

        Returns:
            Ids with torus_distance(x, X_i) < half-width of B_n(v_i), in
            ascending id order.
        """
        if not 0.0 <= x < 1.0:
            raise ValueError(f"query position must lie in [0, 1), got {x}")
        self.counters["queries"] += 1
        hits: List[int] = []
        positions = self._positions
        degrees = self._degrees
        a, b = self.a, self.b

        for vertex_id in self._heavy:
            self.counters["heavy_touched"] += 1
            if torus_distance(x, positions[vertex_id]) < min(1.0, (a * degrees[vertex_id] + b) / n_prime) / 2.0:
                hits.append(vertex_id)

        window = min(self.delta, ball_half_width(self._light_max_degree, n_prime, a, b))
        cells = self._cell_count
        low = math.floor((x - window) * cells)
        high = math.floor((x + window) * cells)
        span = high - low + 1
        touched = 0
        for step in range(min(span, cells)):
            for vertex_id in self._cells[(low + step) % cells]:
                touched += 1
                if torus_distance(x, positions[vertex_id]) < min(1.0, (a * degrees[vertex_id] + b) / n_prime) / 2.0:
                    hits.append(vertex_id)
        self.counters["light_touched"] += touched
        hits.sort()
        return hits

    def naive_query(self, x: float, n_prime: int) -> List[int]:
        """Full scan reference for ``query_balls``."""
        return [
            vertex_id
            for vertex_id, position in enumerate(self._positions)
            if torus_distance(x, position) < self._half_width(vertex_id, n_prime)
        ]

    def audit(self, n_prime: int) -> None:
        """Check the tier invariants against the current denominator."""
        light = [v for cell in self._cells for v in cell]
        assert len(light) == self._light_count, "light count out of sync"
        assert len(light) + len(self._heavy) == len(self._positions), "vertex in no tier or two tiers"
        assert not set(light) & self._heavy, "vertex in both tiers"
        for vertex_id in light:
            assert self._cells[self._cell_of(self._positions[vertex_id])].count(vertex_id) == 1
            assert self._degrees[vertex_id] <= self._light_max_degree, "light degree bound violated"
            assert self._half_width(vertex_id, n_prime) <= self.delta, f"vertex {vertex_id} should be heavy"
