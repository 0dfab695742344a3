"""
Time series of checkpoints recorded during a run
"""

from typing import Iterator, List, Optional

import numpy as np
import pandas as pd

from .graph import TimeSeriesRow


def series_columns(track_k: int) -> List[str]:
    return ["n", "E"] + [f"M_{k}" for k in range(1, track_k + 1)]


class TimeSeries:
    """Ordered checkpoint rows with numpy/pandas views."""

    def __init__(self, track_k: int, rows: Optional[List[TimeSeriesRow]] = None):
        self.track_k = track_k
        self.rows: List[TimeSeriesRow] = list(rows or [])

    def append(self, row: TimeSeriesRow) -> None:
        if len(row.ranks) != self.track_k:
            raise ValueError(f"expected {self.track_k} rank columns, got {len(row.ranks)}")
        if self.rows and row.n <= self.rows[-1].n:
            raise ValueError(f"checkpoint n must increase ({self.rows[-1].n} then {row.n})")
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[TimeSeriesRow]:
        return iter(self.rows)

    def __getitem__(self, index: int) -> TimeSeriesRow:
        return self.rows[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.track_k == other.track_k and self.rows == other.rows

    @property
    def last(self) -> TimeSeriesRow:
        return self.rows[-1]

    @property
    def columns(self) -> List[str]:
        return series_columns(self.track_k)

    def n_values(self) -> np.ndarray:
        return np.array([row.n for row in self.rows], dtype=np.int64)

    def rank(self, k: int) -> np.ndarray:
        """M_k over all checkpoints (k is 1-based)."""
        if not 1 <= k <= self.track_k:
            raise ValueError(f"rank {k} is not tracked (track_k={self.track_k})")
        return np.array([row.ranks[k - 1] for row in self.rows], dtype=np.int64)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame([row.as_record() for row in self.rows], columns=self.columns)
        return frame.astype("int64")

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "TimeSeries":
        rank_columns = [c for c in frame.columns if c.startswith("M_")]
        expected = series_columns(len(rank_columns))
        if list(frame.columns) != expected:
            raise ValueError(f"unexpected columns {list(frame.columns)}, expected {expected}")
        series = cls(len(rank_columns))
        for record in frame.itertuples(index=False):
            values = [int(v) for v in record]
            series.append(TimeSeriesRow(n=values[0], E=values[1], ranks=values[2:]))
        return series
