"""
Samplers package - reproducible streams, degree classes and the
preferential inclusion samplers used by the edge step
"""

from .rng import RngStream, derive_stream
from .registry import DegreeClassRegistry
from .inclusion import binomial, class_union_sample, union_probability, uniform_fill
from .oracle import two_stage_oracle

__all__ = [
    'RngStream',
    'derive_stream',
    'DegreeClassRegistry',
    'binomial',
    'class_union_sample',
    'union_probability',
    'uniform_fill',
    'two_stage_oracle',
]
