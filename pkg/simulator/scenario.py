"""
Shrunk-day scenario scripts.

A day of activities written in clock time is played on a compressed
scenario clock: with compression 60 one day-hour lasts one scenario minute.
Stamp 0 is ``day_start``; earlier clock times belong to the following day.
"""

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from zones import ZoneMap

POSTURES = ("standing", "seated", "lying")
STATIC_POSTURES = ("seated", "lying")
SECONDS_PER_DAY = 24 * 3600

_DAYTIME = re.compile(r"^(\d{1,2}):(\d{2})$")


class ScenarioError(ValueError):
    """An invalid scenario script."""


def parse_daytime(text: str, allow_end_of_day: bool = False) -> float:
    """Hours since midnight of an ``HH:MM`` string."""
    match = _DAYTIME.match(str(text).strip())
    if not match:
        raise ScenarioError(f"Invalid daytime '{text}', expected HH:MM")
    hours, minutes = int(match.group(1)), int(match.group(2))
    if minutes >= 60 or hours > 24 or (hours == 24 and (minutes or not allow_end_of_day)):
        raise ScenarioError(f"Daytime '{text}' outside [00:00, 24:00)")
    return hours + minutes / 60.0


@dataclass(frozen=True)
class Activity:
    person: str
    zone: str
    start: str
    end: str
    label: str = ""
    posture: str = "standing"
    anchor: Optional[Tuple[float, float]] = None
    waypoints: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.posture not in POSTURES:
            raise ScenarioError(f"Unknown posture '{self.posture}' for {self.person} in {self.zone}")
        if self.anchor is not None:
            object.__setattr__(self, "anchor", (float(self.anchor[0]), float(self.anchor[1])))
        object.__setattr__(self, "waypoints", tuple((float(x), float(y)) for x, y in self.waypoints))

    @classmethod
    def from_dict(cls, data: Dict) -> "Activity":
        try:
            return cls(
                person=data["person"],
                zone=data["zone"],
                start=data["start"],
                end=data["end"],
                label=data.get("label", ""),
                posture=data.get("posture", "standing"),
                anchor=tuple(data["anchor"]) if data.get("anchor") is not None else None,
                waypoints=tuple(tuple(w) for w in data.get("waypoints", ())),
            )
        except KeyError as e:
            raise ScenarioError(f"Activity missing field {e}: {data}") from e

    def to_dict(self) -> Dict:
        data = {"person": self.person, "zone": self.zone, "start": self.start, "end": self.end,
                "label": self.label, "posture": self.posture}
        if self.anchor is not None:
            data["anchor"] = list(self.anchor)
        if self.waypoints:
            data["waypoints"] = [list(w) for w in self.waypoints]
        return data


@dataclass
class ScenarioScript:
    """Activities of every person over one compressed day."""

    activities: List[Activity]
    persons: List[str] = field(default_factory=list)
    compression: float = 60.0
    day_start: str = "01:00"
    rate_hz: float = 10.0
    walking_speed: float = 1.2
    idle_sigma: float = 0.05
    name: str = "scenario"

    def __post_init__(self):
        if self.compression <= 0:
            raise ScenarioError("compression must be positive")
        if self.rate_hz <= 0 or self.walking_speed <= 0 or self.idle_sigma < 0:
            raise ScenarioError("rate_hz and walking_speed must be positive, idle_sigma non-negative")
        parse_daytime(self.day_start)
        if not self.persons:
            self.persons = sorted({a.person for a in self.activities})

    @property
    def day_start_hours(self) -> float:
        return parse_daytime(self.day_start)

    @property
    def duration(self) -> float:
        """Scenario seconds for a whole day."""
        return SECONDS_PER_DAY / self.compression

    @property
    def n_ticks(self) -> int:
        return int(round(self.duration * self.rate_hz))

    def stamp_of(self, daytime: str, after: Optional[float] = None) -> float:
        """
        Scenario stamp of a clock time.

        ``after`` is the stamp the result must follow (an activity's start
        when converting its end); a clock time that would not follow it is
        taken on the next day.
        """
        hours = parse_daytime(daytime, allow_end_of_day=after is not None) - self.day_start_hours
        if hours < 0:
            hours += 24.0
        stamp = hours * 3600.0 / self.compression
        if after is not None and stamp <= after:
            stamp += self.duration
        return stamp

    def window(self, activity: Activity) -> Tuple[float, float]:
        start = self.stamp_of(activity.start)
        return start, self.stamp_of(activity.end, after=start)

    def activities_of(self, person: str) -> List[Activity]:
        return sorted((a for a in self.activities if a.person == person), key=lambda a: self.window(a)[0])

    def validate(self, zone_map: Optional[ZoneMap] = None) -> None:
        """Raise ``ScenarioError`` on unknown zones, overlaps or spill past the day."""
        for activity in self.activities:
            if activity.person not in self.persons:
                raise ScenarioError(f"Activity for undeclared person '{activity.person}'")
            if zone_map is not None and activity.zone not in zone_map:
                raise ScenarioError(f"Activity '{activity.label}' of {activity.person} in unknown zone '{activity.zone}'")
            start, end = self.window(activity)
            if end > self.duration + 1e-9:
                raise ScenarioError(f"Activity '{activity.label}' of {activity.person} runs past the end of the day")
        for person in self.persons:
            windows = [(self.window(a), a) for a in self.activities_of(person)]
            for ((_, end), first), ((start, _), second) in zip(windows, windows[1:]):
                if start < end:
                    raise ScenarioError(
                        f"{person}: '{first.label}' ({first.start}-{first.end}) overlaps '{second.label}' ({second.start}-{second.end})"
                    )
        opening = [a for a in self.activities if self.window(a)[0] == 0.0]
        if not opening or any(a.posture not in STATIC_POSTURES for a in opening):
            logger.warning(f"Scenario '{self.name}' does not open with a static phase")

    @classmethod
    def from_dict(cls, data: Dict) -> "ScenarioScript":
        try:
            activities = [Activity.from_dict(entry) for entry in data["activities"]]
        except (KeyError, TypeError) as e:
            raise ScenarioError(f"Malformed scenario: {e}") from e
        options = {k: data[k] for k in ("persons", "compression", "day_start", "rate_hz", "walking_speed", "idle_sigma", "name") if k in data}
        return cls(activities=activities, **options)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "compression": self.compression,
            "day_start": self.day_start,
            "rate_hz": self.rate_hz,
            "walking_speed": self.walking_speed,
            "idle_sigma": self.idle_sigma,
            "persons": list(self.persons),
            "activities": [a.to_dict() for a in self.activities],
        }

    @classmethod
    def load(cls, filepath: Path) -> "ScenarioScript":
        with open(filepath, "r", encoding="utf-8") as f:
            data = json.load(f)
        script = cls.from_dict(data)
        logger.info(f"Loaded scenario '{script.name}' with {len(script.activities)} activities for {len(script.persons)} persons")
        return script
