"""
Evaluation and rendering stages over the files of every run.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd
from loguru import logger

from ambulatogram import Ambulatogram, ambulatogram_svg
from config import RunConfig
from data_store import RunStorage
from evaluation import (
    EvalReport,
    confusion_timelines,
    evaluate,
    evaluation_tables,
    frame_to_csv,
    results_frame,
    summary_frame,
    table_text,
    timeline_frame,
    zone_frame,
)

from .inputs import RunInputs


@dataclass
class EvaluationSummary:
    per_run: Dict[str, List[EvalReport]]
    table: str
    results: pd.DataFrame
    summary: pd.DataFrame
    files: Dict[str, Path]


def _load_run_ambulatograms(storage: RunStorage, run: int, bin_width: float) -> Dict[str, Ambulatogram]:
    run_dir = storage.run_dir(run)
    return {
        label: storage.ambulatograms.load(run_dir / f"ambulatogram_{label}.csv", bin_width=bin_width)
        for label in ("raw", "filtered", "reference")
    }


def evaluate_run(ambulatograms: Dict[str, Ambulatogram], covered_zones: List[str]) -> List[EvalReport]:
    reference = ambulatograms["reference"]
    return [
        evaluate(ambulatograms["raw"], reference, covered_zones, label="raw"),
        evaluate(ambulatograms["filtered"], reference, covered_zones, label="filtered"),
    ]


def evaluate_all(config: RunConfig, inputs: RunInputs, storage: Optional[RunStorage] = None) -> EvaluationSummary:
    """Raw and filtered reports per run, pooled over runs; writes CSVs and the text table."""
    storage = storage or RunStorage(config.output_dir)
    covered = inputs.zone_map.covered_names
    per_run: Dict[str, List[EvalReport]] = {}
    for run in range(1, config.runs + 1):
        per_run[f"run_{run:02d}"] = evaluate_run(_load_run_ambulatograms(storage, run, config.bin_width), covered)

    scoped = evaluation_tables(per_run)
    per_run_scoped = [(scope, report) for scope, report in scoped if scope != "pooled"]
    results = results_frame(scoped)
    summary = summary_frame(per_run_scoped)
    table = table_text(scoped, summary)

    files = {
        "results": storage.output_dir / "evaluation.csv",
        "zones": storage.output_dir / "evaluation_zones.csv",
        "summary": storage.output_dir / "evaluation_summary.csv",
        "table": storage.output_dir / "evaluation.txt",
    }
    storage.write_text(files["results"], frame_to_csv(results))
    storage.write_text(files["zones"], frame_to_csv(zone_frame(scoped)))
    storage.write_text(files["summary"], frame_to_csv(summary))
    storage.write_text(files["table"], table)
    logger.info(f"Evaluated {len(per_run)} runs over zones {covered}")
    return EvaluationSummary(per_run, table, results, summary, files)


def render_all(config: RunConfig, inputs: RunInputs, storage: Optional[RunStorage] = None) -> List[Path]:
    """
    Raw and filtered SVG timelines, each drawn above the reference.

    False positives and false negatives of the covered zones are marked on
    the measured rows and listed bin by bin in ``confusion_<label>.csv``.
    """
    storage = storage or RunStorage(config.output_dir)
    script = inputs.script
    covered = inputs.zone_map.covered_names
    written: List[Path] = []
    for run in range(1, config.runs + 1):
        ambulatograms = _load_run_ambulatograms(storage, run, config.bin_width)
        reference = ambulatograms["reference"]
        for label in ("raw", "filtered"):
            measured = ambulatograms[label]
            timelines = confusion_timelines(measured, reference, covered)
            svg = ambulatogram_svg(measured, reference, script.compression, script.day_start_hours, timelines)
            written.append(storage.write_text(storage.run_dir(run) / f"ambulatogram_{label}.svg", svg))
            written.append(
                storage.write_text(storage.run_dir(run) / f"confusion_{label}.csv", frame_to_csv(timeline_frame(timelines, measured)))
            )
    logger.info(f"Rendered {len(written)} ambulatogram views and confusion timelines")
    return written
