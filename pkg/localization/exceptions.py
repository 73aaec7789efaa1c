"""
Errors raised by the transform tree.
"""


class TransformError(Exception):
    """Base class for transform tree failures."""


class UnknownFrameError(TransformError, LookupError):
    """A frame id that was never inserted into the tree."""


class DisconnectedFramesError(TransformError, LookupError):
    """Two frames that live in different trees of the forest."""


class ExtrapolationError(TransformError, ValueError):
    """A lookup time outside the buffered range plus the clamp margin."""


class AmbiguousSampleError(TransformError, ValueError):
    """Two different transforms stored for the same edge and stamp."""


class TreeStructureError(TransformError, ValueError):
    """An insertion that would give a frame two parents or close a cycle."""
