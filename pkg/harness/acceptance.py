"""
Acceptance profiles - named experiments comparing ensembles with theory

Each profile fixes a parameter set, a run length and a replica count, and
lists the checks its ensemble must pass. Every profile carries the drift
check on rank 1 from n = 10^4 on.
"""

import logging
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from model.params import ModelParams
from theory.solver import TheoryResult, solve_fixed_point

from .drift import DEFAULT_N_MIN
from .replicas import EnsembleReport, ReplicaSummary, run_replicas, summarize_ensemble

logger = logging.getLogger(__name__)

DRIFT_Z_LIMIT = 4.0


class CheckKind(str, Enum):
    RATIO = "ratio"
    RATIO_FLOOR = "ratio_floor"
    CRITICAL_RATIO = "critical_ratio"
    EXPONENT = "exponent"
    LAST_DECADE_SLOPE = "last_decade_slope"
    ROOTS = "roots"
    DRIFT = "drift"


class AcceptanceProfile(BaseModel):
    """A named experiment: parameters, scale and the checks that must hold."""

    name: str
    description: str
    params: ModelParams
    replicas: int = Field(ge=1)
    checks: List[CheckKind]
    ratio_tolerance: float = Field(default=0.05, description="Bound on mean |M_k/n - x_k*|")
    ratio_floor: Optional[float] = Field(
        default=None, description="Lower bound on mean M_1/n for runs still climbing to x_1*"
    )
    ratio_ranks: int = Field(default=1, ge=1)
    expected_K: Optional[int] = None
    critical_factor: float = Field(default=3.0, description="Allowed factor around 2/(d*alpha)^2")
    slope_band: List[float] = Field(default_factory=lambda: [0.85, 1.02])
    exponent_tolerance: float = 0.1
    drift_n_min: int = DEFAULT_N_MIN
    drift_z_limit: float = DRIFT_Z_LIMIT

    def scaled(self, steps: Optional[int] = None, replicas: Optional[int] = None) -> "AcceptanceProfile":
        """Copy with the run length or replica count overridden."""
        changes: Dict[str, object] = {}
        if steps is not None:
            changes["params"] = self.params.with_updates(steps=steps)
        if replicas is not None:
            changes["replicas"] = replicas
        return self.model_copy(update=changes)


class CheckResult(BaseModel):
    kind: CheckKind
    passed: bool
    value: Optional[float] = None
    target: Optional[float] = None
    detail: str = ""


class AcceptanceReport(BaseModel):
    profile: str
    passed: bool
    steps: int
    replicas: int
    theory: TheoryResult
    ensemble: EnsembleReport
    checks: List[CheckResult]


def _base(**overrides) -> ModelParams:
    values = dict(a=0.5, b=1.0, alpha=0.3, beta=1.0, d=2, m_dist=[1.0], n0=8, seed=0, track_k=2)
    values.update(overrides)
    return ModelParams(**values)


PROFILES: Dict[str, AcceptanceProfile] = {
    "supercritical": AcceptanceProfile(
        name="supercritical",
        description="M_1(n)/n settles at x_1* = 10/9",
        params=_base(steps=200_000, checkpoint_stride=1_000),
        replicas=20,
        checks=[CheckKind.RATIO, CheckKind.DRIFT],
        ratio_tolerance=0.05,
    ),
    "two-giants": AcceptanceProfile(
        name="two-giants",
        description="With m = 2 two vertices share the linear limit 10/9",
        params=_base(m_dist=[0.0, 1.0], steps=200_000, checkpoint_stride=1_000),
        replicas=20,
        checks=[CheckKind.ROOTS, CheckKind.RATIO, CheckKind.DRIFT],
        ratio_tolerance=0.07,
        ratio_ranks=2,
        expected_K=2,
    ),
    "critical": AcceptanceProfile(
        name="critical",
        description="M_1(n) ln n / n approaches 2/(d*alpha)^2 when a + d*alpha = 1",
        params=_base(a=0.4, steps=1_000_000, checkpoint_stride=1_000),
        replicas=10,
        checks=[CheckKind.CRITICAL_RATIO, CheckKind.LAST_DECADE_SLOPE, CheckKind.DRIFT],
    ),
    "subcritical": AcceptanceProfile(
        name="subcritical",
        description="M_1(n) grows like n^(a + d*alpha) = n^0.6",
        params=_base(a=0.2, alpha=0.2, steps=100_000, checkpoint_stride=100),
        replicas=20,
        checks=[CheckKind.EXPONENT, CheckKind.DRIFT],
        exponent_tolerance=0.1,
    ),
    "smoke": AcceptanceProfile(
        name="smoke",
        description="Short supercritical run: M_1 grows linearly and climbs towards x_1* from below",
        params=_base(steps=30_000, checkpoint_stride=500),
        replicas=2,
        checks=[CheckKind.RATIO_FLOOR, CheckKind.LAST_DECADE_SLOPE, CheckKind.DRIFT],
        ratio_tolerance=0.05,
        ratio_floor=0.35,
        slope_band=[0.9, 1.4],
    ),
}


def get_profile(name: str) -> AcceptanceProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}") from None


def _ratio_checks(profile: AcceptanceProfile, theory: TheoryResult, ensemble: EnsembleReport) -> List[CheckResult]:
    checks = []
    for k in range(profile.ratio_ranks):
        if k >= len(ensemble.mean_abs_deviation):
            checks.append(CheckResult(
                kind=CheckKind.RATIO, passed=False,
                detail=f"no limit for rank {k + 1} (K={theory.K}) or no ratios",
            ))
            continue
        deviation = ensemble.mean_abs_deviation[k]
        checks.append(CheckResult(
            kind=CheckKind.RATIO,
            passed=deviation <= profile.ratio_tolerance,
            value=deviation,
            target=profile.ratio_tolerance,
            detail=f"mean |M_{k + 1}/n - {theory.x_star[k]:.6f}| over replicas",
        ))
    return checks


def _floor_check(profile: AcceptanceProfile, theory: TheoryResult, ensemble: EnsembleReport) -> CheckResult:
    # M_1/n climbs to x_1* like n^f_1'(x_1*); short runs only bound it from below
    value = ensemble.mean_ratios[0] if ensemble.mean_ratios else None
    if value is None or theory.K < 1 or profile.ratio_floor is None:
        return CheckResult(kind=CheckKind.RATIO_FLOOR, passed=False, value=value, detail="no ratio, limit or floor")
    ceiling = theory.x_star[0] + profile.ratio_tolerance
    return CheckResult(
        kind=CheckKind.RATIO_FLOOR,
        passed=profile.ratio_floor <= value <= ceiling,
        value=value,
        target=profile.ratio_floor,
        detail=f"mean M_1/n in [{profile.ratio_floor:g}, {ceiling:.6f}]",
    )


def _evaluate(
    profile: AcceptanceProfile,
    theory: TheoryResult,
    ensemble: EnsembleReport,
    summaries: List[ReplicaSummary],
) -> List[CheckResult]:
    results: List[CheckResult] = []
    for kind in profile.checks:
        if kind is CheckKind.RATIO:
            results.extend(_ratio_checks(profile, theory, ensemble))
        elif kind is CheckKind.RATIO_FLOOR:
            results.append(_floor_check(profile, theory, ensemble))
        elif kind is CheckKind.ROOTS:
            coincide = theory.K >= 2 and abs(theory.x_star[0] - theory.x_star[1]) <= 1e-12
            results.append(CheckResult(
                kind=kind,
                passed=theory.K == profile.expected_K and coincide,
                value=float(theory.K),
                target=float(profile.expected_K) if profile.expected_K is not None else None,
                detail=f"x_star={theory.x_star}",
            ))
        elif kind is CheckKind.CRITICAL_RATIO:
            value = ensemble.mean_critical_ratio
            target = theory.critical_constant
            passed = value is not None and target / profile.critical_factor <= value <= target * profile.critical_factor
            results.append(CheckResult(
                kind=kind, passed=passed, value=value, target=target,
                detail=f"mean M_1 ln n / n within a factor {profile.critical_factor:g}",
            ))
        elif kind is CheckKind.LAST_DECADE_SLOPE:
            value = ensemble.mean_exponent_last_decade
            lo, hi = profile.slope_band
            results.append(CheckResult(
                kind=kind, passed=value is not None and lo <= value <= hi, value=value,
                detail=f"log-log slope of M_1 over the last decade in [{lo}, {hi}]",
            ))
        elif kind is CheckKind.EXPONENT:
            value = ensemble.mean_exponent
            target = theory.exponent
            passed = value is not None and abs(value - target) <= profile.exponent_tolerance
            results.append(CheckResult(
                kind=kind, passed=passed, value=value, target=target,
                detail=f"mean exponent within {profile.exponent_tolerance:g}",
            ))
        elif kind is CheckKind.DRIFT:
            buckets = sum(len(s.drift) for s in summaries)
            worst = ensemble.max_abs_z
            results.append(CheckResult(
                kind=kind,
                passed=buckets > 0 and worst <= profile.drift_z_limit,
                value=worst,
                target=profile.drift_z_limit,
                detail=f"max |z| over {buckets} buckets from n={profile.drift_n_min}",
            ))
    return results


def run_acceptance(
    profile: AcceptanceProfile,
    parallelism: int = 1,
    progress: bool = False,
) -> AcceptanceReport:
    """Run the profile's ensemble and evaluate its checks."""
    params = profile.params
    theory = solve_fixed_point(params)
    logger.info(
        "Acceptance profile %s: %d replicas x %d steps", profile.name, profile.replicas, params.steps
    )
    summaries = run_replicas(
        params,
        profile.replicas,
        parallelism=parallelism,
        drift_n_min=profile.drift_n_min,
        progress=progress,
        keep_series=False,
    )
    ensemble = summarize_ensemble(summaries, theory)
    checks = _evaluate(profile, theory, ensemble, summaries)
    for check in checks:
        if not check.passed:
            logger.warning("Check %s failed: value=%s target=%s (%s)", check.kind.value, check.value, check.target, check.detail)
    return AcceptanceReport(
        profile=profile.name,
        passed=all(check.passed for check in checks),
        steps=params.steps,
        replicas=profile.replicas,
        theory=theory,
        ensemble=ensemble,
        checks=checks,
    )
