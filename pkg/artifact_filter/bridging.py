"""
Gap bridging between kept sequences of the same person.

A static person the sensor lost for a while shows up as two sequences whose
boundary positions nearly coincide. When both boundaries fall in the same
zone the gap is filled with synthetic samples held at those positions.
"""

import math
from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from ingestion import PersonKey, TrackSequence
from zones import ZoneMap

from .filter import FilterVerdict

DEFAULT_MAX_GAP = 600.0
DEFAULT_MAX_DISPLACEMENT = 0.5


def _fill_interval(first: TrackSequence, second: TrackSequence) -> float:
    steps = np.concatenate([np.diff(first.stamps), np.diff(second.stamps)])
    return float(np.median(steps)) if len(steps) else 0.1


def _merge(first: TrackSequence, second: TrackSequence, interval: float) -> TrackSequence:
    gap_start, gap_end = first.t_end, second.t_start
    n_fill = max(int(math.ceil((gap_end - gap_start) / interval)) - 1, 0)
    fill_stamps = gap_start + interval * np.arange(1, n_fill + 1)
    fill_stamps = fill_stamps[fill_stamps < gap_end]
    midpoint = (gap_start + gap_end) / 2.0
    fill_positions = np.where(
        (fill_stamps < midpoint)[:, None], first.positions[-1][None, :], second.positions[0][None, :]
    )
    stamps = np.concatenate([first.stamps, fill_stamps, second.stamps])
    positions = np.concatenate([first.positions, fill_positions.reshape(-1, 3), second.positions])
    return TrackSequence(first.person_key, stamps, positions)


def bridge_gaps(
    verdicts: Sequence[FilterVerdict],
    zone_map: ZoneMap,
    max_gap: float = DEFAULT_MAX_GAP,
    max_displacement: float = DEFAULT_MAX_DISPLACEMENT,
    fill_interval: Optional[float] = None,
) -> List[TrackSequence]:
    """Kept sequences, with bridgeable neighbours of one person_key merged."""
    per_person: Dict[PersonKey, List[TrackSequence]] = {}
    for verdict in verdicts:
        if verdict.kept:
            per_person.setdefault(verdict.sequence.person_key, []).append(verdict.sequence)

    bridged: List[TrackSequence] = []
    merges = 0
    for sequences in per_person.values():
        sequences = sorted(sequences, key=TrackSequence.sort_key)
        current = sequences[0]
        for nxt in sequences[1:]:
            gap = nxt.t_start - current.t_end
            end_point, start_point = current.positions[-1], nxt.positions[0]
            displacement = math.dist(end_point[:2], start_point[:2])
            zone = zone_map.classify(end_point)
            if 0 < gap <= max_gap and displacement <= max_displacement and zone is not None and zone == zone_map.classify(start_point):
                current = _merge(current, nxt, fill_interval or _fill_interval(current, nxt))
                merges += 1
            else:
                bridged.append(current)
                current = nxt
        bridged.append(current)

    bridged.sort(key=TrackSequence.sort_key)
    if merges:
        logger.info(f"Bridged {merges} gaps")
    return bridged
