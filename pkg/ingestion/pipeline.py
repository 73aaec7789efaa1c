"""
Projection of detections into the apartment frame and track segmentation.
"""

import bisect
from collections import OrderedDict
from typing import Dict, Iterable, List, Optional

from loguru import logger

from localization import TransformError, TransformTree, transform_point

from .bus import CapacityError, Topic
from .models import Detection, PersonKey, TrackSample, TrackSequence

APARTMENT_FRAME = "apartment"
DEFAULT_GAP_THRESHOLD = 2.0
DEFAULT_SORT_WINDOW = 0.2


class OrderingError(ValueError):
    """Samples of one person arrived further out of order than the sort window allows."""


def project(det: Detection, tree: TransformTree, frame: str = APARTMENT_FRAME) -> TrackSample:
    """Express a detection in ``frame``; lookup errors propagate."""
    xform = tree.lookup(frame, det.sensor, det.stamp)
    return TrackSample(person_key=det.person_key, stamp=det.stamp, position=transform_point(xform, det.position))


class Projector:
    """Topic subscriber that projects every delivered detection and keeps the samples."""

    def __init__(self, tree: TransformTree, frame: str = APARTMENT_FRAME):
        self.tree = tree
        self.frame = frame
        self.samples: List[TrackSample] = []
        self.dropped = 0

    def __call__(self, det: Detection) -> None:
        try:
            self.samples.append(project(det, self.tree, self.frame))
        except TransformError as e:
            self.dropped += 1
            logger.warning(f"Dropped detection {det.sensor}/{det.local_id} at {det.stamp}: {e}")

    def attach(self, topic: Topic):
        return topic.subscribe(self)


class Segmenter:
    """Splits per-person sample streams into gap-free sequences."""

    def __init__(self, gap_threshold: float = DEFAULT_GAP_THRESHOLD, sort_window: float = DEFAULT_SORT_WINDOW):
        if gap_threshold <= 0:
            raise ValueError("gap_threshold must be positive")
        self.gap_threshold = gap_threshold
        self.sort_window = sort_window
        self.stats = {"reordered": 0, "dropped_duplicate": 0}

    def _ordered(self, samples: Iterable[TrackSample]) -> Dict[PersonKey, List[TrackSample]]:
        per_person: Dict[PersonKey, List[TrackSample]] = OrderedDict()
        per_person_stamps: Dict[PersonKey, List[float]] = {}
        for sample in samples:
            track = per_person.setdefault(sample.person_key, [])
            stamps = per_person_stamps.setdefault(sample.person_key, [])
            if not stamps or sample.stamp > stamps[-1]:
                track.append(sample)
                stamps.append(sample.stamp)
                continue
            if stamps[-1] - sample.stamp > self.sort_window:
                raise OrderingError(
                    f"Sample of {sample.person_key} at {sample.stamp} arrived after {stamps[-1]}, "
                    f"beyond the {self.sort_window} s sort window"
                )
            index = bisect.bisect_left(stamps, sample.stamp)
            if index < len(stamps) and stamps[index] == sample.stamp:
                self.stats["dropped_duplicate"] += 1
                continue
            track.insert(index, sample)
            stamps.insert(index, sample.stamp)
            self.stats["reordered"] += 1
        return per_person

    def segment(self, samples: Iterable[TrackSample]) -> List[TrackSequence]:
        sequences: List[TrackSequence] = []
        for track in self._ordered(samples).values():
            start = 0
            for i in range(1, len(track)):
                if track[i].stamp - track[i - 1].stamp > self.gap_threshold:
                    sequences.append(TrackSequence.from_samples(track[start:i]))
                    start = i
            sequences.append(TrackSequence.from_samples(track[start:]))
        sequences.sort(key=TrackSequence.sort_key)
        logger.debug(f"Segmented into {len(sequences)} sequences")
        return sequences


def segment(
    samples: Iterable[TrackSample],
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
    sort_window: float = DEFAULT_SORT_WINDOW,
) -> List[TrackSequence]:
    """Gap-free TrackSequences, ordered by start stamp then person_key."""
    return Segmenter(gap_threshold, sort_window).segment(samples)


def replay(detections: Iterable[Detection], topic: Topic, flush: bool = True) -> int:
    """Publish detections in the given order as fast as possible; returns the number accepted."""
    count = 0
    for det in detections:
        try:
            topic.publish(det)
        except CapacityError as e:
            logger.warning(f"{topic.name}: {e}")
            continue
        count += 1
    if flush:
        topic.flush()
    return count


def samples_from_detections(
    detections: Iterable[Detection],
    tree: TransformTree,
    topic: Optional[Topic] = None,
) -> Projector:
    """Batch path: replay ``detections`` through a topic into a fresh projector."""
    topic = topic or Topic("detections")
    projector = Projector(tree)
    projector.attach(topic)
    replay(detections, topic)
    return projector
