"""
Simulation stage: compile the scenario, sense it and write stream + reference.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from loguru import logger

from config import RunConfig
from data_store import RunStorage
from simulator import compile_scenario, sense

from .inputs import RunInputs, load_inputs


@dataclass
class SimulationSummary:
    run: int
    detections: int
    intervals: int
    files: Dict[str, str] = field(default_factory=dict)
    stats: Dict = field(default_factory=dict)


def run_generator(seed: int, run: int) -> np.random.Generator:
    """Independent, reproducible stream for run ``run`` of a seeded experiment."""
    return np.random.default_rng(np.random.SeedSequence([seed, run]))


def simulate_run(config: RunConfig, inputs: RunInputs, run: int, storage: Optional[RunStorage] = None) -> SimulationSummary:
    storage = storage or RunStorage(config.output_dir)
    rng = run_generator(config.seed, run)
    compiled = compile_scenario(inputs.script, inputs.zone_map, rng=rng)
    stream = sense(compiled, inputs.sensors, config.noise, rng=rng)

    detections_path = storage.detections_path(run)
    intervals_path = storage.intervals_path(run)
    storage.detections.save(stream.detections, detections_path)
    storage.intervals.save(
        compiled.intervals,
        intervals_path,
        metadata={"scenario": inputs.script.name, "span_s": list(compiled.span), "rate_hz": inputs.script.rate_hz},
    )

    files = {"detections": detections_path.name, "intervals": intervals_path.name}
    stats = stream.stats.to_dict()
    storage.manifest.save(
        {
            "run": run,
            "seed": config.seed,
            "seed_sequence": [config.seed, run],
            "config_hash": config.fingerprint(),
            "scenario": inputs.script.name,
            "span_s": list(compiled.span),
            "files": files,
            "simulation": stats,
        },
        storage.manifest_path(run),
    )
    logger.info(f"Run {run}: {len(stream.detections)} detections, {len(compiled.intervals)} reference intervals")
    return SimulationSummary(run, len(stream.detections), len(compiled.intervals), files, stats)


def _simulate_job(config: RunConfig, run: int) -> SimulationSummary:
    return simulate_run(config, load_inputs(config), run)


def simulate_all(config: RunConfig, inputs: Optional[RunInputs] = None) -> List[SimulationSummary]:
    """Simulate runs 1..config.runs; with ``jobs`` > 1 runs go to worker processes."""
    inputs = inputs or load_inputs(config)
    runs = list(range(1, config.runs + 1))
    if config.jobs > 1 and len(runs) > 1:
        logger.info(f"Simulating {len(runs)} runs on {config.jobs} workers")
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            return list(pool.map(_simulate_job, [config] * len(runs), runs))
    storage = RunStorage(config.output_dir)
    return [simulate_run(config, inputs, run, storage) for run in runs]
