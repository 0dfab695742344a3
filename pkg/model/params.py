"""
Model parameters for the spatial preferential attachment process
"""

import math
from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

M_DIST_TOLERANCE = 1e-12


class ModelParams(BaseModel):
    """All process parameters plus the run controls of one simulation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: float = Field(gt=0.0, le=0.5, description="Vertex-step ball slope in (0, 1/2]")
    b: float = Field(gt=0.0, description="Vertex-step ball offset, > 0")
    alpha: float = Field(gt=0.0, lt=0.5, description="Edge-step sampling slope in (0, 1/2)")
    beta: float = Field(gt=0.0, description="Edge-step sampling offset, > 0")
    d: int = Field(ge=1, description="Number of independent preferential samples")
    M: int = Field(ge=1, description="Largest possible m; defaults to the length of m_dist")
    m_dist: List[float] = Field(
        description="Pr(m = r) for r = 1..M (shorter vectors are padded with zeros)"
    )
    n0: int = Field(ge=2, description="Vertices in the initial graph, must exceed M")
    steps: int = Field(default=0, ge=0, description="Growth steps to simulate")
    seed: int = Field(default=0, ge=0, le=2**64 - 1, description="Master seed")
    track_k: int = Field(default=1, ge=1, description="Number of top in-degree ranks to record")
    checkpoint_stride: int = Field(default=1, ge=1, description="Steps between recorded rows")
    torus_delta: float = Field(
        default=0.01, gt=0.0, le=0.5,
        description="Ball half-width above which a vertex is scanned exhaustively",
    )

    @field_validator("m_dist")
    @classmethod
    def _check_distribution(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("m_dist must not be empty")
        if any(p < 0.0 for p in value):
            raise ValueError(f"m_dist entries must be non-negative, got {value}")
        total = math.fsum(value)
        if abs(total - 1.0) > M_DIST_TOLERANCE:
            raise ValueError(f"m_dist must sum to 1 (got {total!r})")
        return list(value)

    @model_validator(mode="before")
    @classmethod
    def _fill_support(cls, data):
        if isinstance(data, dict) and data.get("m_dist") is not None:
            data = dict(data)
            m_dist = [float(p) for p in data["m_dist"]]
            if data.get("M") is None:
                data["M"] = len(m_dist)
            elif len(m_dist) < int(data["M"]):
                m_dist += [0.0] * (int(data["M"]) - len(m_dist))
            data["m_dist"] = m_dist
        return data

    @model_validator(mode="after")
    def _check_sizes(self) -> "ModelParams":
        if len(self.m_dist) != self.M:
            raise ValueError(f"m_dist has {len(self.m_dist)} entries but M = {self.M}")
        if self.n0 <= self.M:
            raise ValueError(f"the initial graph needs n0 > M vertices (n0={self.n0}, M={self.M})")
        return self

    @property
    def exponent(self) -> float:
        """a + d*alpha, the quantity separating the three regimes."""
        return self.a + self.d * self.alpha

    @property
    def r_m(self) -> int:
        """Smallest number of edge-step edges drawn with positive probability."""
        return next(r for r, p in enumerate(self.m_dist, start=1) if p > 0.0)

    def n_prime(self, n: int) -> int:
        """Denominator used wherever the process divides by n."""
        return n + self.n0

    def with_updates(self, **changes) -> "ModelParams":
        """Validated copy with some fields replaced."""
        data = self.model_dump()
        data.update(changes)
        if "m_dist" in changes and "M" not in changes:
            data["M"] = None
        return ModelParams(**data)
