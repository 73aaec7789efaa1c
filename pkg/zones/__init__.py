"""
Zones module: purpose-specific floor areas and point classification.
"""

from .models import Zone, ZoneMap, ZoneIssue, ZoneValidationError, DEFAULT_ZONES_PATH
from .geometry import point_in_polygon, points_in_polygon, polygon_area, polygons_overlap

__all__ = [
    'Zone',
    'ZoneMap',
    'ZoneIssue',
    'ZoneValidationError',
    'DEFAULT_ZONES_PATH',
    'point_in_polygon',
    'points_in_polygon',
    'polygon_area',
    'polygons_overlap',
]
