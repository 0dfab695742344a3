"""
Model package - parameters, graph state and the growth loop
"""

from .params import ModelParams
from .graph import EdgeStepResult, GraphState, StepReport, TimeSeriesRow, VertexRecord
from .series import TimeSeries, series_columns
from .observers import CheckpointLogger, EdgeLogObserver, SimulationObserver
from .simulation import (
    Simulation,
    checkpoint_row,
    draw_m,
    edge_step,
    inclusion_probability,
    init,
    run,
    step,
    vertex_step,
)

__all__ = [
    'ModelParams',
    'EdgeStepResult',
    'GraphState',
    'StepReport',
    'TimeSeriesRow',
    'VertexRecord',
    'TimeSeries',
    'series_columns',
    'CheckpointLogger',
    'EdgeLogObserver',
    'SimulationObserver',
    'Simulation',
    'checkpoint_row',
    'draw_m',
    'edge_step',
    'inclusion_probability',
    'init',
    'run',
    'step',
    'vertex_step',
]
