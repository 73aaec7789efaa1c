"""
Artifact filter module: removes static ghosts and mixed trajectories.
"""

from .hull import convex_hull, hull_perimeter, hull_area
from .features import acceleration_profile, max_acceleration
from .filter import (
    FilterConfig,
    FilterVerdict,
    RemovalReason,
    apply_filter,
    judge,
    kept_sequences,
    split_at_spikes,
)
from .bridging import bridge_gaps

__all__ = [
    'convex_hull',
    'hull_perimeter',
    'hull_area',
    'acceleration_profile',
    'max_acceleration',
    'FilterConfig',
    'FilterVerdict',
    'RemovalReason',
    'apply_filter',
    'judge',
    'kept_sequences',
    'split_at_spikes',
    'bridge_gaps',
]
