"""
Ingestion module: detections, topics, projection and segmentation.
"""

from .models import Detection, TrackSample, TrackSequence, PersonKey, MalformedRecordError, person_frame, DETECTION_FIELDS
from .bus import Topic, TopicBus, Subscription, CapacityError, MAX_TRACKS_PER_SENSOR, DEFAULT_REORDER_WINDOW
from .pipeline import (
    APARTMENT_FRAME,
    DEFAULT_GAP_THRESHOLD,
    OrderingError,
    Projector,
    Segmenter,
    project,
    segment,
    replay,
    samples_from_detections,
)

__all__ = [
    'Detection',
    'TrackSample',
    'TrackSequence',
    'PersonKey',
    'MalformedRecordError',
    'person_frame',
    'DETECTION_FIELDS',
    'Topic',
    'TopicBus',
    'Subscription',
    'CapacityError',
    'MAX_TRACKS_PER_SENSOR',
    'DEFAULT_REORDER_WINDOW',
    'APARTMENT_FRAME',
    'DEFAULT_GAP_THRESHOLD',
    'OrderingError',
    'Projector',
    'Segmenter',
    'project',
    'segment',
    'replay',
    'samples_from_detections',
]
