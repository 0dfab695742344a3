"""
Command-line interface

Subcommands: simulate, solve, classify, replicas, verify, plot.
Exit codes: 0 success, 1 acceptance or solver failure, 2 usage or invalid
parameters, 3 I/O failure.
"""

import argparse
import logging
import sys
import time
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError
from tqdm import tqdm

from harness.acceptance import PROFILES, get_profile, run_acceptance
from harness.estimators import InsufficientDataError, RatioKind, check_ratio, estimate_exponent
from harness.replicas import run_replicas, summarize_ensemble
from model.observers import CheckpointLogger, EdgeLogObserver, SimulationObserver
from model.params import ModelParams
from model.simulation import Simulation
from theory.solver import FixedPointError, Regime, classify_regime, solve_fixed_point

from .config import RunConfig, build_run_config, get_settings
from .io import dumps, read_series_csv, write_json, write_series_csv
from .plot import save_svg

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class ProgressObserver(SimulationObserver):
    """tqdm bar advanced at every checkpoint."""

    def __init__(self, total: int):
        self._bar = tqdm(total=total, desc="steps", unit="step")
        self._n = 0

    def on_checkpoint(self, row) -> None:
        self._bar.update(row.n - self._n)
        self._n = row.n

    def on_finish(self, series) -> None:
        self._bar.close()


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    # absent flags stay out of the namespace so lower layers can fill them
    group = parser.add_argument_group("model parameters")
    group.add_argument("--a", type=float, default=argparse.SUPPRESS, help="vertex-step slope in (0, 1/2]")
    group.add_argument("--b", type=float, default=argparse.SUPPRESS, help="vertex-step offset (default 1)")
    group.add_argument("--alpha", type=float, default=argparse.SUPPRESS, help="edge-step slope in (0, 1/2)")
    group.add_argument("--beta", type=float, default=argparse.SUPPRESS, help="edge-step offset (default 1)")
    group.add_argument("--d", type=int, default=argparse.SUPPRESS, help="number of samples (default 1)")
    group.add_argument("--m-dist", dest="m_dist", default=argparse.SUPPRESS,
                       help="law of m as comma-separated Pr(m=1),Pr(m=2),... (default 1.0)")
    group.add_argument("--n0", type=int, default=argparse.SUPPRESS, help="initial vertices (default max(8, M+1))")
    group.add_argument("--steps", type=int, default=argparse.SUPPRESS, help="growth steps (default 0)")
    group.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master seed (default 0)")
    group.add_argument("--track-k", dest="track_k", type=int, default=argparse.SUPPRESS,
                       help="top ranks recorded per checkpoint (default 1)")
    group.add_argument("--checkpoint-stride", dest="checkpoint_stride", type=int, default=argparse.SUPPRESS,
                       help="steps between checkpoints (default 1)")
    group.add_argument("--torus-delta", dest="torus_delta", type=float, default=argparse.SUPPRESS,
                       help="exhaustive-scan threshold of the ball index (default SPA_TORUS_DELTA or 0.01)")


def _add_common_flags(
    parser: argparse.ArgumentParser,
    out_help: str = "output directory (default SPA_OUTPUT_DIR)",
) -> None:
    parser.add_argument("--config", default=argparse.SUPPRESS, help="JSON file supplying any flag")
    parser.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS,
                        help="DEBUG, INFO, WARNING or ERROR (default SPA_LOG_LEVEL or INFO)")
    parser.add_argument("--out", default=argparse.SUPPRESS, help=out_help)


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes (default SPA_JOBS or 1)")
    parser.add_argument("--progress", action="store_true", default=argparse.SUPPRESS, help="show a progress bar")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spa",
        description="Spatial preferential attachment with choice: simulation, theory and acceptance checks",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="one run -> series.csv + summary.json")
    _add_model_flags(simulate)
    _add_common_flags(simulate)
    _add_run_flags(simulate)
    simulate.add_argument("--edge-log", dest="edge_log", default=argparse.SUPPRESS,
                          help="stream every edge to this CSV file")
    simulate.add_argument("--record-timing", dest="record_timing", action="store_true",
                          default=argparse.SUPPRESS, help="write wall-clock time into summary.json")
    simulate.add_argument("--k-max", dest="k_max", type=int, default=argparse.SUPPRESS,
                          help="highest rank the solver tries (default 16)")

    for name, help_text in (("solve", "fixed point x_1*..x_K* as JSON"), ("classify", "regime and constants as JSON")):
        sub = commands.add_parser(name, help=help_text)
        _add_model_flags(sub)
        _add_common_flags(sub)
        sub.add_argument("--k-max", dest="k_max", type=int, default=argparse.SUPPRESS,
                         help="highest rank the solver tries (default 16)")

    replicas = commands.add_parser("replicas", help="ensemble -> replica_NNN.csv + ensemble.json")
    _add_model_flags(replicas)
    _add_common_flags(replicas)
    _add_run_flags(replicas)
    replicas.add_argument("--replicas", type=int, default=argparse.SUPPRESS, help="number of replicas (default 1)")

    verify = commands.add_parser("verify", help="run an acceptance profile -> verify.json")
    _add_common_flags(verify)
    _add_run_flags(verify)
    verify.add_argument("--profile", default=argparse.SUPPRESS, help=f"one of {', '.join(PROFILES)}")
    verify.add_argument("--steps", type=int, default=argparse.SUPPRESS, help="override the profile's run length")
    verify.add_argument("--replicas", type=int, default=argparse.SUPPRESS, help="override the profile's replica count")

    plot = commands.add_parser("plot", help="series CSV -> SVG")
    _add_model_flags(plot)
    _add_common_flags(plot, out_help="SVG file to write")
    plot.add_argument("--input", required=True, help="series CSV written by simulate or replicas")
    plot.add_argument("--kind", choices=["ratio", "loglog"], default=argparse.SUPPRESS)
    return parser


def _estimates(series, theory, params: ModelParams) -> Dict[str, Any]:
    """Estimator outputs included in summary.json (null where data is short)."""
    out: Dict[str, Any] = {"exponent": None, "ratios": [], "critical_ratio": None}
    try:
        out["exponent"] = estimate_exponent(series)
    except InsufficientDataError as exc:
        logger.debug("Exponent not estimated: %s", exc)
    if series.last.n < 1:
        return out
    for k, target in enumerate(theory.x_star[: params.track_k], start=1):
        out["ratios"].append(check_ratio(series, target, RatioKind.M_K_OVER_N, k))
    if theory.regime is Regime.CRITICAL:
        out["critical_ratio"] = check_ratio(series, theory.critical_constant, RatioKind.M1_LOGN_OVER_N)
    return out


def cmd_simulate(config: RunConfig) -> int:
    params = config.params
    observers: List[SimulationObserver] = [CheckpointLogger()]
    if config.edge_log is not None:
        observers.append(EdgeLogObserver(config.edge_log))
    if config.progress:
        observers.append(ProgressObserver(params.steps))
    theory = classify_regime(params, config.k_max)

    started = time.perf_counter()
    series = Simulation(params, observers=observers).run()
    elapsed = time.perf_counter() - started
    logger.info("Simulation took %.2f s", elapsed)

    last = series.last
    summary: Dict[str, Any] = {
        "seed": params.seed,
        "params": params,
        "theory": theory,
        "final": {
            "n": last.n,
            "E": last.E,
            "ranks": list(last.ranks),
            "ratios": [value / last.n for value in last.ranks] if last.n else [],
        },
        "estimates": _estimates(series, theory, params),
    }
    if config.record_timing:
        summary["wall_clock_seconds"] = elapsed
    csv_path = write_series_csv(series, config.out / "series.csv")
    json_path = write_json(summary, config.out / "summary.json")
    print(f"✅ {len(series)} checkpoints -> {csv_path}")
    print(f"✅ Summary -> {json_path}")
    return EXIT_OK


def cmd_solve(config: RunConfig) -> int:
    sys.stdout.write(dumps(solve_fixed_point(config.params, config.k_max)))
    return EXIT_OK


def cmd_classify(config: RunConfig) -> int:
    sys.stdout.write(dumps(classify_regime(config.params, config.k_max)))
    return EXIT_OK


def cmd_replicas(config: RunConfig) -> int:
    params = config.params
    summaries = run_replicas(
        params, config.replicas, parallelism=config.jobs, progress=config.progress, keep_series=True,
    )
    theory = classify_regime(params, config.k_max)
    for summary in summaries:
        write_series_csv(summary.series, config.out / f"replica_{summary.replica_id:03d}.csv")
    report = {
        "seed": params.seed,
        "params": params,
        "theory": theory,
        "ensemble": summarize_ensemble(summaries, theory),
        "replicas": summaries,
    }
    path = write_json(report, config.out / "ensemble.json")
    print(f"✅ {len(summaries)} replicas -> {config.out}")
    print(f"✅ Ensemble summary -> {path}")
    return EXIT_OK


def cmd_verify(config: RunConfig, cli_values: Dict[str, Any]) -> int:
    profile = get_profile(config.profile or "smoke")
    profile = profile.scaled(steps=cli_values.get("steps"), replicas=cli_values.get("replicas"))
    report = run_acceptance(profile, parallelism=config.jobs, progress=config.progress)
    path = write_json(report, config.out / "verify.json")
    for check in report.checks:
        mark = "✅" if check.passed else "❌"
        print(f"{mark} {check.kind.value}: value={check.value} target={check.target} ({check.detail})")
    print(f"{'✅ PASSED' if report.passed else '❌ FAILED'} profile {profile.name} -> {path}")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_plot(config: RunConfig) -> int:
    series = read_series_csv(config.input)
    out = config.out if config.out.suffix == ".svg" else config.out / "plot.svg"
    theory = classify_regime(config.params, config.k_max) if config.params is not None else None
    path = save_svg(series, out, kind=config.kind, theory=theory)
    print(f"✅ Plot -> {path}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    cli_values = vars(args)
    command = cli_values.pop("command")
    try:
        settings = get_settings()
        logging.basicConfig(
            level=str(cli_values.get("log_level", settings.log_level)).upper(),
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
        if command == "verify":
            values = {k: v for k, v in cli_values.items() if k not in ("steps", "replicas")}
            config = build_run_config(values, need_params=False, settings=settings)
            return cmd_verify(config, cli_values)
        config = build_run_config(cli_values, need_params=command != "plot", settings=settings)
        if command == "simulate":
            return cmd_simulate(config)
        if command == "solve":
            return cmd_solve(config)
        if command == "classify":
            return cmd_classify(config)
        if command == "replicas":
            return cmd_replicas(config)
        return cmd_plot(config)
    except (ValidationError, ValueError) as exc:
        logger.error("Invalid arguments: %s", exc)
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        logger.error("I/O failure: %s", exc)
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_IO
    except FixedPointError as exc:
        logger.error("Solver failure: %s", exc)
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
