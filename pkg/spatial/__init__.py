"""
Spatial package - ball queries on the 1-D torus for the vertex step
"""

from .torus_index import (
    TorusIndex,
    DuplicateVertexError,
    ball_half_width,
    torus_distance,
)

__all__ = [
    'TorusIndex',
    'DuplicateVertexError',
    'ball_half_width',
    'torus_distance',
]
