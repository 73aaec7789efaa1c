"""
Ambulatogram construction and co-presence extraction.
"""

from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
from loguru import logger

from ingestion import PersonKey, TrackSequence
from zones import ZoneMap

from .models import (
    BIN_EPS,
    Ambulatogram,
    CopresenceInterval,
    IntervalOverlapError,
    PresenceInterval,
    UnknownZoneError,
    bin_count,
)


def build(
    seqs: Iterable[TrackSequence],
    zone_map: ZoneMap,
    bin_width: float,
    span: Tuple[float, float],
    label: str = "",
) -> Ambulatogram:
    """
    Count distinct person_keys per zone per bin.

    A person_key sampled in several zones during one bin counts once, in the
    zone holding most of its samples; ties go to the zone listed first.
    Samples outside every zone do not vote.
    """
    t0, t1 = span
    names = zone_map.names
    n_bins = bin_count(t0, t1, bin_width)
    amb = Ambulatogram.zeros(names, bin_width, span, label)
    if n_bins == 0:
        return amb

    votes: Dict[PersonKey, Tuple[List[np.ndarray], List[np.ndarray]]] = {}
    for seq in seqs:
        labels = zone_map.classify_many(seq.positions)
        zone_idx = np.array([zone_map.order_of(z) if z is not None else -1 for z in labels], dtype=int)
        bins = np.floor((seq.stamps - t0) / bin_width + BIN_EPS).astype(int)
        valid = (zone_idx >= 0) & (bins >= 0) & (bins < n_bins) & (seq.stamps < t1)
        bucket = votes.setdefault(seq.person_key, ([], []))
        bucket[0].append(bins[valid])
        bucket[1].append(zone_idx[valid])

    for person_bins, person_zones in votes.values():
        bins = np.concatenate(person_bins)
        zone_idx = np.concatenate(person_zones)
        if len(bins) == 0:
            continue
        tally = np.zeros((n_bins, len(names)), dtype=np.int64)
        np.add.at(tally, (bins, zone_idx), 1)
        present = np.flatnonzero(tally.sum(axis=1) > 0)
        winners = np.argmax(tally[present], axis=1)
        np.add.at(amb.counts, (winners, present), 1)

    logger.debug(f"Built {label or 'measured'} ambulatogram from {len(votes)} person keys")
    return amb


def reference_ambulatogram(
    scenario: Sequence[PresenceInterval],
    zone_map: ZoneMap,
    bin_width: float,
    span: Tuple[float, float],
    label: str = "reference",
) -> Ambulatogram:
    """
    Ground-truth counts from presence intervals.

    A person counts once per bin, in the zone where they spent the most time
    during that bin; ties go to the zone listed first.
    """
    t0, t1 = span
    names = zone_map.names
    n_bins = bin_count(t0, t1, bin_width)

    per_person: Dict[object, List[PresenceInterval]] = {}
    for interval in scenario:
        if interval.zone not in zone_map:
            raise UnknownZoneError(f"Interval of {interval.person} in unknown zone '{interval.zone}'")
        per_person.setdefault(interval.person, []).append(interval)
    for person, intervals in per_person.items():
        intervals.sort(key=lambda i: (i.t_start, i.t_end))
        for before, after in zip(intervals, intervals[1:]):
            if after.t_start < before.t_end:
                raise IntervalOverlapError(
                    f"{person}: {before.zone} [{before.t_start}, {before.t_end}) overlaps {after.zone} [{after.t_start}, {after.t_end})"
                )

    amb = Ambulatogram.zeros(names, bin_width, span, label)
    if n_bins == 0:
        return amb
    edges = t0 + bin_width * np.arange(n_bins + 1)
    edges[-1] = t1
    tolerance = BIN_EPS * bin_width

    for intervals in per_person.values():
        dwell = np.zeros((n_bins, len(names)))
        for interval in intervals:
            if interval.t_end <= t0 or interval.t_start >= t1:
                continue
            overlap = np.minimum(edges[1:], interval.t_end) - np.maximum(edges[:-1], interval.t_start)
            dwell[:, zone_map.order_of(interval.zone)] += np.clip(overlap, 0.0, None)
        longest = dwell.max(axis=1)
        present = np.flatnonzero(longest > tolerance)
        # first zone within tolerance of the longest stay
        winners = np.argmax(dwell[present] >= longest[present, None] - tolerance, axis=1)
        np.add.at(amb.counts, (winners, present), 1)
    return amb


def copresence(amb: Ambulatogram, zone: str, min_duration: float) -> List[CopresenceInterval]:
    """Maximal runs of bins with at least two people, lasting ``min_duration`` or more."""
    row = amb.row(zone)
    found: List[CopresenceInterval] = []
    start = None
    for b in range(len(row) + 1):
        crowded = b < len(row) and row[b] >= 2
        if crowded and start is None:
            start = b
        elif not crowded and start is not None:
            duration = (b - start) * amb.bin_width
            if duration >= min_duration - BIN_EPS:
                found.append(
                    CopresenceInterval(amb.t0 + start * amb.bin_width, amb.t0 + b * amb.bin_width, int(row[start:b].max()))
                )
            start = None
    return found


def copresence_report(amb: Ambulatogram, min_duration: float) -> List[Tuple[str, CopresenceInterval]]:
    """``copresence`` over every zone, in zone order."""
    report = []
    for zone in amb.zone_names:
        report.extend((zone, interval) for interval in copresence(amb, zone, min_duration))
    return report
