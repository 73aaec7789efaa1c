"""
Depth sensor configuration: pose in the apartment and floor field of view.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
from loguru import logger

from ingestion import MAX_TRACKS_PER_SENSOR
from localization import RigidTransform, StampedTransform, static_transform_from_dict
from zones import ZoneIssue, ZoneMap, points_in_polygon, polygons_overlap
from zones.geometry import point_in_polygon


@dataclass(frozen=True)
class SensorConfig:
    sensor: str
    pose: RigidTransform
    fov_polygon: Tuple[Tuple[float, float], ...]
    max_tracks: int = MAX_TRACKS_PER_SENSOR
    parent: str = "apartment"

    def __post_init__(self):
        object.__setattr__(self, "fov_polygon", tuple((float(x), float(y)) for x, y in self.fov_polygon))
        if len(self.fov_polygon) < 3:
            raise ValueError(f"Field of view of {self.sensor} needs at least 3 vertices")
        if not 1 <= self.max_tracks <= MAX_TRACKS_PER_SENSOR:
            raise ValueError(f"max_tracks of {self.sensor} must be within 1..{MAX_TRACKS_PER_SENSOR}")

    def sees(self, point) -> bool:
        return point_in_polygon((float(point[0]), float(point[1])), self.fov_polygon)

    def visible(self, points: np.ndarray) -> np.ndarray:
        """Boolean mask of the (N, 3) points inside the field of view; NaN rows are not."""
        points = np.asarray(points, dtype=float)
        mask = np.zeros(len(points), dtype=bool)
        finite = np.isfinite(points[:, :2]).all(axis=1)
        if finite.any():
            mask[finite] = points_in_polygon(points[finite, :2], self.fov_polygon)
        return mask

    def to_sensor_frame(self, points: np.ndarray) -> np.ndarray:
        """Apartment coordinates of (N, 3) points expressed in the sensor frame."""
        inverse = self.pose.inverse()
        return np.asarray(points, dtype=float) @ inverse.rotation_matrix().T + np.asarray(inverse.translation)

    def static_transform(self) -> StampedTransform:
        return StampedTransform(self.parent, self.sensor, 0.0, self.pose)

    def to_dict(self) -> Dict:
        data = {"sensor": self.sensor, "parent": self.parent}
        data.update(self.pose.to_dict())
        data["max_tracks"] = self.max_tracks
        data["fov"] = [list(v) for v in self.fov_polygon]
        return data

    @classmethod
    def from_dict(cls, data: Dict, default_parent: str = "apartment") -> "SensorConfig":
        edge = static_transform_from_dict(data, default_parent)
        return cls(
            sensor=edge.child,
            pose=edge.xform,
            fov_polygon=tuple(tuple(v) for v in data["fov"]),
            max_tracks=int(data.get("max_tracks", MAX_TRACKS_PER_SENSOR)),
            parent=edge.parent,
        )


def load_sensors(filepath: Path) -> List[SensorConfig]:
    with open(filepath, "r", encoding="utf-8") as f:
        data = json.load(f)
    root = data.get("root", "apartment")
    sensors = [SensorConfig.from_dict(entry, root) for entry in data["sensors"]]
    names = [s.sensor for s in sensors]
    if len(set(names)) != len(names):
        raise ValueError(f"Duplicate sensor ids in {filepath}")
    logger.info(f"Loaded {len(sensors)} sensors from {filepath}")
    return sensors


def coverage_issues(sensors: List[SensorConfig], zone_map: ZoneMap) -> List[ZoneIssue]:
    """
    Mismatches between fields of view and zone coverage flags.

    A covered zone must lie inside some field of view; an uncovered zone
    must not overlap any.
    """
    issues = []
    for zone in zone_map:
        seen_by = [s.sensor for s in sensors if all(s.sees(v) for v in zone.polygon)]
        overlapping = [s.sensor for s in sensors if polygons_overlap(zone.polygon, s.fov_polygon)]
        if zone.covered and not seen_by:
            issues.append(ZoneIssue("warning", f"covered zone '{zone.name}' is not inside any field of view", (zone.name,)))
        if not zone.covered and overlapping:
            issues.append(ZoneIssue("warning", f"uncovered zone '{zone.name}' overlaps the field of view of {overlapping}", (zone.name,)))
    for issue in issues:
        logger.warning(f"Sensor coverage: {issue.message}")
    return issues
