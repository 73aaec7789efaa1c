"""
Zones: named floor polygons in the apartment frame.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from .geometry import Point2, point_in_polygon, points_in_polygon, polygon_area, polygon_centroid, polygons_overlap, self_intersections

DEFAULT_ZONES_PATH = Path(__file__).resolve().parent.parent / "data" / "livinlab.zones.json"


class ZoneValidationError(ValueError):
    """Raised when a zone map holds at least one error-level issue."""

    def __init__(self, issues: List["ZoneIssue"]):
        self.issues = issues
        errors = "; ".join(issue.message for issue in issues if issue.severity == "error")
        super().__init__(f"Invalid zone map: {errors}")


@dataclass(frozen=True)
class ZoneIssue:
    """One finding of ``ZoneMap.validate``."""

    severity: str  # "error" or "warning"
    message: str
    zones: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"{self.severity}: {self.message}"


@dataclass(frozen=True)
class Zone:
    """A purpose-specific area, independent of the walls around it."""

    name: str
    polygon: Tuple[Point2, ...]
    covered: bool = False

    def __post_init__(self):
        object.__setattr__(self, "polygon", tuple((float(x), float(y)) for x, y in self.polygon))

    def contains(self, point: Sequence[float]) -> bool:
        return point_in_polygon((float(point[0]), float(point[1])), self.polygon)

    @property
    def area(self) -> float:
        return abs(polygon_area(self.polygon))

    @property
    def centroid(self) -> Point2:
        return polygon_centroid(self.polygon)

    @classmethod
    def from_dict(cls, data: Dict) -> "Zone":
        return cls(name=data["name"], polygon=tuple(tuple(v) for v in data["vertices"]), covered=bool(data.get("covered", False)))


class ZoneMap:
    """Ordered zones; the first zone containing a point wins."""

    def __init__(self, zones: Iterable[Zone]):
        self._zones: Tuple[Zone, ...] = tuple(zones)
        self._index: Dict[str, int] = {}
        for i, zone in enumerate(self._zones):
            self._index.setdefault(zone.name, i)

    def __len__(self) -> int:
        return len(self._zones)

    def __iter__(self):
        return iter(self._zones)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    @property
    def names(self) -> List[str]:
        return [zone.name for zone in self._zones]

    @property
    def covered_names(self) -> List[str]:
        return [zone.name for zone in self._zones if zone.covered]

    def get(self, name: str) -> Zone:
        if name not in self._index:
            raise KeyError(f"Unknown zone '{name}'")
        return self._zones[self._index[name]]

    def order_of(self, name: str) -> int:
        return self._index[name]

    def classify(self, point: Sequence[float]) -> Optional[str]:
        """Name of the first zone whose closed polygon holds the floor projection of ``point``."""
        for zone in self._zones:
            if zone.contains(point):
                return zone.name
        return None

    def classify_many(self, points: np.ndarray) -> List[Optional[str]]:
        """``classify`` over an (N, >=2) array, vectorized per zone."""
        points = np.asarray(points, dtype=float)
        if len(points) == 0:
            return []
        labels = np.full(len(points), -1, dtype=int)
        for i, zone in enumerate(self._zones):
            pending = labels < 0
            if not pending.any():
                break
            hits = points_in_polygon(points[pending, :2], zone.polygon)
            pending_idx = np.flatnonzero(pending)
            labels[pending_idx[hits]] = i
        return [self._zones[i].name if i >= 0 else None for i in labels]

    def validate(self) -> List[ZoneIssue]:
        """Report malformed polygons, duplicate names and overlapping covered zones."""
        issues: List[ZoneIssue] = []
        seen = set()
        for zone in self._zones:
            if zone.name in seen:
                issues.append(ZoneIssue("error", f"duplicate zone name '{zone.name}'", (zone.name,)))
            seen.add(zone.name)
            if len(zone.polygon) < 3:
                issues.append(ZoneIssue("error", f"zone '{zone.name}' has fewer than 3 vertices", (zone.name,)))
                continue
            crossings = self_intersections(zone.polygon)
            if crossings:
                issues.append(ZoneIssue("error", f"zone '{zone.name}' is self-intersecting (edges {crossings[0]})", (zone.name,)))
            elif zone.area == 0.0:
                issues.append(ZoneIssue("error", f"zone '{zone.name}' has zero area", (zone.name,)))

        broken = {name for issue in issues if issue.severity == "error" for name in issue.zones}
        covered = [zone for zone in self._zones if zone.covered and zone.name not in broken]
        for i, first in enumerate(covered):
            for second in covered[i + 1:]:
                if polygons_overlap(first.polygon, second.polygon):
                    issues.append(
                        ZoneIssue("warning", f"covered zones '{first.name}' and '{second.name}' overlap", (first.name, second.name))
                    )
        for issue in issues:
            if issue.severity == "error":
                logger.error(f"Zone map: {issue.message}")
            else:
                logger.warning(f"Zone map: {issue.message}")
        return issues

    def ensure_valid(self) -> "ZoneMap":
        issues = self.validate()
        if any(issue.severity == "error" for issue in issues):
            raise ZoneValidationError(issues)
        return self

    @classmethod
    def from_list(cls, data: List[Dict]) -> "ZoneMap":
        return cls(Zone.from_dict(entry) for entry in data)

    @classmethod
    def load(cls, filepath: Path) -> "ZoneMap":
        """Read a zone file: a JSON array of {name, covered, vertices}."""
        with open(filepath, "r", encoding="utf-8") as f:
            data = json.load(f)
        zone_map = cls.from_list(data)
        logger.info(f"Loaded {len(zone_map)} zones from {filepath}")
        return zone_map

    @classmethod
    def default(cls) -> "ZoneMap":
        return cls.load(DEFAULT_ZONES_PATH)
