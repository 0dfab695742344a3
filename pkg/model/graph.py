"""
Graph State - the evolving graph G_n

Only what the dynamics read is stored: vertex positions, in-degrees and the
total in-edge count, plus two indexes over them (degree classes for the edge
step, the torus index for the vertex step). Adjacency is not kept.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from samplers.registry import DegreeClassRegistry
from spatial.torus_index import TorusIndex

from .params import ModelParams


@dataclass(frozen=True)
class VertexRecord:
    id: int
    position: float
    in_degree: int


@dataclass
class StepReport:
    """What happened in one growth step."""

    step: int
    new_vertex: int
    position: float
    vertex_step_targets: List[int]
    edge_source: int
    m: int
    edge_step_targets: List[int]
    fill_count: int = 0

    @property
    def edge_count(self) -> int:
        return len(self.vertex_step_targets) + len(self.edge_step_targets)


@dataclass
class EdgeStepResult:
    source: int
    targets: List[int]
    m: int
    fill_count: int = 0

    def __iter__(self):
        # unpacks as (u_n, targets, m_n)
        return iter((self.source, self.targets, self.m))


class GraphState:
    """Mutable state of one simulation; owned by a single run."""

    def __init__(self, params: ModelParams):
        self.params = params
        self.n = 0
        self.positions: List[float] = []
        self.in_degrees: List[int] = []
        self.total_in_edges = 0
        self.registry = DegreeClassRegistry()
        self.index = TorusIndex(params.a, params.b, params.torus_delta)
        self.pending: Optional[int] = None

    @property
    def n0(self) -> int:
        return self.params.n0

    @property
    def n_prime(self) -> int:
        """Denominator n + n0 of the current step."""
        return self.n + self.params.n0

    @property
    def vertex_count(self) -> int:
        """Committed vertices (the staged new vertex is not counted)."""
        return len(self.registry)

    def vertex(self, vertex_id: int) -> VertexRecord:
        return VertexRecord(vertex_id, self.positions[vertex_id], self.in_degrees[vertex_id])

    def top_degrees(self, k: int) -> List[int]:
        return self.registry.top_degrees(k)

    def add_vertex(self, position: float, degree: int = 0) -> int:
        """Append and register a vertex right away (initial graph)."""
        vertex_id = len(self.positions)
        self.positions.append(position)
        self.in_degrees.append(degree)
        self.registry.add(vertex_id, degree)
        self.index.insert(vertex_id, position, self.n_prime, degree)
        self.total_in_edges += degree
        return vertex_id

    def stage_vertex(self, position: float) -> int:
        """
        Append v_{n+1} with in-degree 0 without registering it.

        The staged vertex is a candidate of the edge step but is invisible to
        the vertex step and to the degree classes until ``commit``.
        """
        if self.pending is not None:
            raise RuntimeError(f"vertex {self.pending} is already staged")
        vertex_id = len(self.positions)
        self.positions.append(position)
        self.in_degrees.append(0)
        self.pending = vertex_id
        return vertex_id

    def commit(self, report: StepReport) -> None:
        """Register the staged vertex and add every edge of the step."""
        if self.pending != report.new_vertex:
            raise RuntimeError(f"report for vertex {report.new_vertex} does not match staged {self.pending}")
        next_n_prime = self.n_prime + 1
        self.registry.add(report.new_vertex, 0)
        self.index.insert(report.new_vertex, report.position, next_n_prime)
        for targets in (report.vertex_step_targets, report.edge_step_targets):
            for vertex_id in targets:
                degree = self.registry.increment(vertex_id)
                self.in_degrees[vertex_id] = degree
                self.index.bump_degree(vertex_id, degree, next_n_prime)
        self.total_in_edges += report.edge_count
        self.pending = None
        self.n += 1

    def to_dict(self) -> Dict[str, Any]:
        """Serializable pre-step snapshot."""
        if self.pending is not None:
            raise RuntimeError("cannot snapshot a state in the middle of a step")
        return {
            "n": self.n,
            "positions": list(self.positions),
            "registry": self.registry.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], params: ModelParams) -> "GraphState":
        registry = DegreeClassRegistry.from_dict(data["registry"])
        state = cls._assemble(params, data["positions"], registry, int(data["n"]))
        return state

    @classmethod
    def from_degrees(
        cls,
        params: ModelParams,
        positions: Sequence[float],
        degrees: Sequence[int],
        n: int,
    ) -> "GraphState":
        """Frozen state with given positions and in-degrees after ``n`` steps."""
        if len(positions) != len(degrees):
            raise ValueError("positions and degrees must have the same length")
        registry = DegreeClassRegistry.from_degrees(degrees)
        return cls._assemble(params, positions, registry, n)

    @classmethod
    def _assemble(
        cls,
        params: ModelParams,
        positions: Sequence[float],
        registry: DegreeClassRegistry,
        n: int,
    ) -> "GraphState":
        if len(positions) != params.n0 + n:
            raise ValueError(
                f"a state after {n} steps has {params.n0 + n} vertices, got {len(positions)}"
            )
        state = cls(params)
        state.n = n
        state.positions = [float(x) for x in positions]
        state.in_degrees = [registry.degree_of(v) for v in range(len(registry))]
        state.registry = registry
        state.total_in_edges = registry.total_in_edges
        for vertex_id, position in enumerate(state.positions):
            state.index.insert(vertex_id, position, state.n_prime, state.in_degrees[vertex_id])
        return state

    def audit(self) -> None:
        """Full consistency check against from-scratch rebuilds."""
        committed = len(self.registry)
        assert committed == self.params.n0 + self.n, "vertex count does not match n0 + n"
        assert self.total_in_edges == sum(self.in_degrees[:committed]), "E differs from sum of in-degrees"
        assert self.registry.total_in_edges == self.total_in_edges, "registry edge count out of sync"
        self.registry.audit()
        rebuilt = DegreeClassRegistry.from_degrees(self.in_degrees[:committed])
        assert rebuilt == self.registry, "registry differs from a rebuild"
        assert len(self.index) == committed, "torus index size out of sync"
        for vertex_id in range(committed):
            assert self.index.degree_of(vertex_id) == self.in_degrees[vertex_id], "index degree out of sync"
        self.index.audit(self.n_prime)

    def __repr__(self) -> str:
        return f"GraphState(n={self.n}, vertices={self.vertex_count}, E={self.total_in_edges})"


@dataclass
class TimeSeriesRow:
    """One checkpoint: step count, total in-edges and the top in-degrees."""

    n: int
    E: int
    ranks: List[int] = field(default_factory=list)

    def as_record(self) -> Dict[str, int]:
        record = {"n": self.n, "E": self.E}
        for k, value in enumerate(self.ranks, start=1):
            record[f"M_{k}"] = value
        return record
