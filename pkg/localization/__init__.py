"""
Transform tree module: rigid transforms between named frames.
"""

from .exceptions import (
    TransformError,
    UnknownFrameError,
    DisconnectedFramesError,
    ExtrapolationError,
    AmbiguousSampleError,
    TreeStructureError,
)
from .transforms import RigidTransform, StampedTransform, compose, interpolate, transform_point
from .tree import TransformTree, DEFAULT_EXTRAPOLATION_MARGIN, DEFAULT_STREAMING_RETENTION
from .loader import load_static_transforms, static_transform_from_dict, build_tree

__all__ = [
    'TransformError',
    'UnknownFrameError',
    'DisconnectedFramesError',
    'ExtrapolationError',
    'AmbiguousSampleError',
    'TreeStructureError',
    'RigidTransform',
    'StampedTransform',
    'compose',
    'interpolate',
    'transform_point',
    'TransformTree',
    'DEFAULT_EXTRAPOLATION_MARGIN',
    'DEFAULT_STREAMING_RETENTION',
    'load_static_transforms',
    'static_transform_from_dict',
    'build_tree',
]
