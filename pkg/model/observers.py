"""
Simulation observers - hooks called synchronously by the growth loop
"""

import csv
import logging
from pathlib import Path
from typing import IO, Optional

from .graph import GraphState, StepReport, TimeSeriesRow

logger = logging.getLogger(__name__)


class SimulationObserver:
    """Base class; override only the hooks you need."""

    def on_start(self, state: GraphState) -> None:
        pass

    def on_step(self, state: GraphState, report: StepReport) -> None:
        pass

    def on_checkpoint(self, row: TimeSeriesRow) -> None:
        pass

    def on_finish(self, series) -> None:
        pass


def wants_steps(observer) -> bool:
    """True when the observer actually handles per-step callbacks."""
    hook = getattr(type(observer), "on_step", None)
    return hook is not None and hook is not SimulationObserver.on_step


class CheckpointLogger(SimulationObserver):
    """Logs every checkpoint row at DEBUG level."""

    def on_checkpoint(self, row: TimeSeriesRow) -> None:
        logger.debug("n=%d E=%d top=%s", row.n, row.E, row.ranks)


class EdgeLogObserver(SimulationObserver):
    """
    Streams every committed edge to a CSV file for debugging.

    Columns: step, source, target, kind (``vertex`` or ``edge``). The vertex
    step's source is the new vertex, the edge step's source is u_n.
    """

    def __init__(self, path: Path):
        self.path = Path(path)
        self._handle: Optional[IO[str]] = None
        self._writer = None
        self.edges_written = 0

    def on_start(self, state: GraphState) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._handle = open(self.path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._handle, lineterminator="\n")
        self._writer.writerow(["step", "source", "target", "kind"])

    def on_step(self, state: GraphState, report: StepReport) -> None:
        for target in report.vertex_step_targets:
            self._writer.writerow([report.step, report.new_vertex, target, "vertex"])
        for target in report.edge_step_targets:
            self._writer.writerow([report.step, report.edge_source, target, "edge"])
        self.edges_written += report.edge_count

    def on_finish(self, series) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None
            logger.info("Edge log written to %s (%d edges)", self.path, self.edges_written)
