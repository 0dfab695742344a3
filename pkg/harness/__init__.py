"""
Harness package - replica ensembles, estimators, the drift diagnostic and
acceptance profiles
"""

from .estimators import (
    ExponentEstimate,
    InsufficientDataError,
    RatioKind,
    RatioReport,
    check_ratio,
    estimate_exponent,
    fit_power_law,
)
from .drift import DriftBucket, DriftCheck, DriftRecorder, drift_check
from .replicas import EnsembleReport, ReplicaSummary, run_replica, run_replicas, summarize_ensemble
from .acceptance import (
    PROFILES,
    AcceptanceProfile,
    AcceptanceReport,
    CheckKind,
    CheckResult,
    get_profile,
    run_acceptance,
)

__all__ = [
    'ExponentEstimate',
    'InsufficientDataError',
    'RatioKind',
    'RatioReport',
    'check_ratio',
    'estimate_exponent',
    'fit_power_law',
    'DriftBucket',
    'DriftCheck',
    'DriftRecorder',
    'drift_check',
    'EnsembleReport',
    'ReplicaSummary',
    'run_replica',
    'run_replicas',
    'summarize_ensemble',
    'PROFILES',
    'AcceptanceProfile',
    'AcceptanceReport',
    'CheckKind',
    'CheckResult',
    'get_profile',
    'run_acceptance',
]
