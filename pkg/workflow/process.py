"""
Pipeline stage: ingest a detection stream, segment, filter and count.
"""

import queue
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from ambulatogram import (
    Ambulatogram,
    CopresenceInterval,
    PresenceInterval,
    build,
    copresence_csv,
    copresence_report,
    reference_ambulatogram,
)
from artifact_filter import FilterVerdict, RemovalReason, apply_filter, bridge_gaps, kept_sequences
from config import RunConfig
from data_store import RunStorage
from ingestion import Detection, Projector, Segmenter, Topic, TrackSample, replay
from localization import TransformTree
from simulator import RealtimeReplayer

from .inputs import RunInputs

Report = List[Tuple[str, CopresenceInterval]]


@dataclass
class RunResult:
    run: int
    verdicts: List[FilterVerdict]
    raw: Ambulatogram
    filtered: Ambulatogram
    reference: Ambulatogram
    copresence_raw: Report
    copresence_filtered: Report
    ingestion: Dict[str, int] = field(default_factory=dict)

    def removals(self) -> Dict[str, int]:
        counts = {reason.value: 0 for reason in RemovalReason}
        for verdict in self.verdicts:
            if not verdict.kept:
                counts[verdict.reason.value] += 1
        return counts


def _consume_realtime(detections: Sequence[Detection], topic: Topic, projector: Projector, speed: float) -> None:
    """Publisher thread replays on the wall clock, this thread projects what arrives."""
    inbox: "queue.Queue[Detection]" = queue.Queue()
    topic.subscribe(inbox.put)
    publisher = RealtimeReplayer(detections, topic, speed)
    publisher.start()
    while True:
        try:
            projector(inbox.get(timeout=0.05))
        except queue.Empty:
            if not publisher.is_alive() and inbox.empty():
                break
    publisher.join()
    if publisher.error is not None:
        raise publisher.error


def ingest(
    detections: Sequence[Detection],
    tree: TransformTree,
    config: RunConfig,
) -> Tuple[List[TrackSample], Dict[str, int]]:
    """Apartment-frame samples in delivery order, plus ingestion counters."""
    topic = Topic("detections", reorder_window=config.reorder_window)
    projector = Projector(tree)
    if config.mode == "realtime":
        logger.info(f"Replaying {len(detections)} detections at {config.realtime_speed}x")
        _consume_realtime(detections, topic, projector, config.realtime_speed)
    else:
        projector.attach(topic)
        replay(detections, topic)
    stats = dict(topic.stats)
    stats["dropped_lookup"] = projector.dropped
    return projector.samples, stats


def process_detections(
    config: RunConfig,
    inputs: RunInputs,
    detections: Sequence[Detection],
    intervals: Sequence[PresenceInterval],
    run: int = 1,
) -> RunResult:
    samples, stats = ingest(detections, inputs.tree(config), config)
    segmenter = Segmenter(config.gap_threshold, config.reorder_window)
    sequences = segmenter.segment(samples)
    stats.update(segmenter.stats)
    stats["sequences"] = len(sequences)

    verdicts = apply_filter(sequences, config.filter)
    if config.bridge.enabled:
        survivors = bridge_gaps(verdicts, inputs.zone_map, config.bridge.max_gap, config.bridge.max_displacement)
    else:
        survivors = kept_sequences(verdicts)

    span, width = inputs.span, config.bin_width
    raw = build(sequences, inputs.zone_map, width, span, label="raw")
    filtered = build(survivors, inputs.zone_map, width, span, label="filtered")
    reference = reference_ambulatogram(intervals, inputs.zone_map, width, span)

    result = RunResult(
        run=run,
        verdicts=verdicts,
        raw=raw,
        filtered=filtered,
        reference=reference,
        copresence_raw=copresence_report(raw, config.min_copresence),
        copresence_filtered=copresence_report(filtered, config.min_copresence),
        ingestion=stats,
    )
    removed = result.removals()
    logger.info(f"Run {run}: {len(sequences)} sequences, removed {removed}")
    return result


def write_run_outputs(result: RunResult, storage: RunStorage) -> Dict[str, str]:
    run_dir = storage.run_dir(result.run)
    files = {
        "verdicts": run_dir / "verdicts.csv",
        "ambulatogram_raw": run_dir / "ambulatogram_raw.csv",
        "ambulatogram_filtered": run_dir / "ambulatogram_filtered.csv",
        "ambulatogram_reference": run_dir / "ambulatogram_reference.csv",
        "copresence_raw": run_dir / "copresence_raw.csv",
        "copresence_filtered": run_dir / "copresence_filtered.csv",
    }
    storage.verdicts.save(result.verdicts, files["verdicts"])
    storage.ambulatograms.save(result.raw, files["ambulatogram_raw"])
    storage.ambulatograms.save(result.filtered, files["ambulatogram_filtered"])
    storage.ambulatograms.save(result.reference, files["ambulatogram_reference"])
    storage.write_text(files["copresence_raw"], copresence_csv(result.copresence_raw, "raw"))
    storage.write_text(files["copresence_filtered"], copresence_csv(result.copresence_filtered, "filtered"))
    return {name: path.name for name, path in files.items()}


def run_pipeline(config: RunConfig, inputs: RunInputs, run: int, storage: Optional[RunStorage] = None) -> RunResult:
    """Read run ``run``'s stream and reference, process them and write the results."""
    storage = storage or RunStorage(config.output_dir)
    storage.detections.strict = config.strict
    log = storage.detections.load(storage.detections_path(run))
    intervals = storage.intervals.load(storage.intervals_path(run))

    result = process_detections(config, inputs, log.detections, intervals, run)
    result.ingestion["malformed"] = log.malformed
    files = write_run_outputs(result, storage)

    manifest_path = storage.manifest_path(run)
    manifest = storage.manifest.load(manifest_path)
    storage.manifest.update(
        manifest_path,
        files={**manifest.get("files", {}), **files},
        ingestion=result.ingestion,
        removals=result.removals(),
        filter=config.filter.to_dict(),
        bridge=config.bridge.to_dict(),
        bin_width=config.bin_width,
    )
    return result


def run_all(config: RunConfig, inputs: RunInputs) -> List[RunResult]:
    storage = RunStorage(config.output_dir)
    return [run_pipeline(config, inputs, run, storage) for run in range(1, config.runs + 1)]
