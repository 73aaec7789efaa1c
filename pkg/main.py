#!/usr/bin/env python3
"""
Co-Presence Monitor
Main entry point: simulate a shrunk day, run the detection pipeline,
evaluate it against the scenario and render ambulatograms.
"""

import argparse
import os
import sys
from typing import Any, Dict, List, Optional

from loguru import logger

from ambulatogram import AmbulatogramMismatchError
from config import ENV_PREFIX, ConfigError, RunConfig, load_config
from evaluation import EvaluationError
from ingestion import MalformedRecordError, OrderingError
from localization import TransformError
from simulator import ScenarioError
from workflow import evaluate_all, load_inputs, render_all, run_all, simulate_all
from zones import ZoneValidationError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

# Errors that mean "the inputs are wrong", not "the program is broken"
INVALID_INPUT_ERRORS = (
    ConfigError,
    ZoneValidationError,
    ScenarioError,
    AmbulatogramMismatchError,
    EvaluationError,
    MalformedRecordError,
    OrderingError,
    TransformError,
    FileNotFoundError,
)


def configure_logging(level: str, log_dir: Optional[str] = None) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level.upper())
    if log_dir:
        logger.add(f"{log_dir}/copresence_{{time}}.log", rotation="1 day", retention="7 days", level="DEBUG")


def simulate(config: RunConfig, inputs) -> None:
    """Write a detection stream and reference intervals per run."""
    summaries = simulate_all(config, inputs)

    print("\nSimulation complete!")
    print(f"Scenario: {inputs.script.name} ({inputs.script.duration:.0f} s, seed {config.seed})")
    for summary in summaries:
        stats = summary.stats
        print(f"  - run_{summary.run:02d}: {summary.detections} detections, {summary.intervals} reference intervals")
        print(
            f"      swaps {stats['random_swaps']} random / {stats['forced_swaps']} forced, "
            f"{stats['dropout_episodes']} dropouts, {stats['fragment_renewals']} id renewals"
        )
    print(f"\nFiles saved under: {config.output_dir}")


def run(config: RunConfig, inputs) -> None:
    """Process every run's stream into verdicts and ambulatograms."""
    results = run_all(config, inputs)

    print("\nPipeline complete!")
    for result in results:
        stats = result.ingestion
        kept = sum(1 for v in result.verdicts if v.kept)
        print(f"  - run_{result.run:02d}: {len(result.verdicts)} sequences, {kept} kept")
        for reason, count in result.removals().items():
            print(f"      {reason}: {count}")
        print(
            f"      ingestion: {stats['delivered']} delivered, {stats['dropped_late']} late, "
            f"{stats['dropped_lookup']} unprojectable, {stats['malformed']} malformed"
        )
        print(f"      co-presence episodes: {len(result.copresence_raw)} raw, {len(result.copresence_filtered)} filtered")


def evaluate(config: RunConfig, inputs) -> None:
    """Print and save the raw/filtered sensitivity and specificity table."""
    summary = evaluate_all(config, inputs)
    print()
    print(summary.table, end="")
    print("Files saved:")
    for name, path in summary.files.items():
        print(f"  - {name}: {path}")


def render(config: RunConfig, inputs) -> None:
    written = render_all(config, inputs)
    print(f"\nRendered {len(written)} files:")
    for path in written:
        print(f"  - {path}")


def run_everything(config: RunConfig, inputs) -> None:
    """Simulate, run, evaluate and render in one go."""
    simulate(config, inputs)
    run(config, inputs)
    evaluate(config, inputs)
    render(config, inputs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Co-presence detection in a sensor-equipped apartment",
        epilog=f"Environment variables {ENV_PREFIX}* override the config file; flags override both.",
    )
    parser.add_argument(
        "command",
        choices=["simulate", "run", "eval", "render", "all"],
        help="Command to execute",
    )
    parser.add_argument("--config", help="JSON config file (defaults to data/default_config.json)")
    parser.add_argument("--seed", type=int, help="Seed of the simulated noise")
    parser.add_argument("--runs", type=int, help="Number of simulated runs")
    parser.add_argument("--jobs", type=int, help="Worker processes for simulating several runs")
    parser.add_argument("--output", help="Output directory")
    parser.add_argument("--strict", action="store_true", default=None, help="Abort on malformed stream lines")
    parser.add_argument(
        "--realtime",
        type=float,
        metavar="SPEED",
        help="Replay streams on the wall clock at SPEED times the scenario rate",
    )
    parser.add_argument("--log-level", help="Log level on stderr (default INFO)")
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {
        "seed": args.seed,
        "runs": args.runs,
        "jobs": args.jobs,
        "output_dir": args.output,
        "strict": args.strict,
        "log_level": args.log_level,
    }
    if args.realtime is not None:
        overrides["mode"] = "realtime"
        overrides["realtime_speed"] = args.realtime
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or os.getenv(f"{ENV_PREFIX}LOG_LEVEL", "INFO"))

    commands = {
        "simulate": simulate,
        "run": run,
        "eval": evaluate,
        "render": render,
        "all": run_everything,
    }

    try:
        config = load_config(args.config, overrides_from_args(args))
        configure_logging(config.log_level, str(config.log_dir) if config.log_dir else None)
        inputs = load_inputs(config)
        commands[args.command](config, inputs)
    except INVALID_INPUT_ERRORS as e:
        logger.debug(f"{type(e).__name__}: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as e:
        logger.exception(f"{args.command} failed")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
