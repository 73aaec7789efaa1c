"""
Data storage module for detection streams and run artifacts.
"""

from .storage import (
    RecordStorage,
    DetectionLog,
    DetectionStorage,
    IntervalStorage,
    ManifestStorage,
    VerdictStorage,
    AmbulatogramStorage,
    RunStorage,
)

__all__ = [
    'RecordStorage',
    'DetectionLog',
    'DetectionStorage',
    'IntervalStorage',
    'ManifestStorage',
    'VerdictStorage',
    'AmbulatogramStorage',
    'RunStorage',
]
