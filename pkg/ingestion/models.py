"""
Detection, track sample and track sequence models.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

PersonKey = Tuple[str, int]
Vector3 = Tuple[float, float, float]

DETECTION_FIELDS = ("sensor", "local_id", "stamp", "x", "y", "z")


class MalformedRecordError(ValueError):
    """A detection record that cannot be parsed."""


def person_frame(key: PersonKey) -> str:
    """Frame id of a tracked person under its sensor, e.g. ``kinect1/user3``."""
    sensor, local_id = key
    return f"{sensor}/user{local_id}"


@dataclass(frozen=True)
class Detection:
    """A center-of-mass position reported by one sensor in its own frame."""

    sensor: str
    local_id: int
    stamp: float
    position: Vector3

    def __post_init__(self):
        if not self.sensor:
            raise MalformedRecordError("Detection without sensor")
        if isinstance(self.local_id, bool) or int(self.local_id) != self.local_id or self.local_id < 0:
            raise MalformedRecordError(f"Invalid local_id {self.local_id!r}")
        object.__setattr__(self, "local_id", int(self.local_id))
        object.__setattr__(self, "stamp", float(self.stamp))
        position = tuple(float(v) for v in self.position)
        if len(position) != 3:
            raise MalformedRecordError(f"Position needs 3 components, got {len(position)}")
        if not all(math.isfinite(v) for v in position + (self.stamp,)) or self.stamp < 0:
            raise MalformedRecordError(f"Non-finite or negative values in detection at stamp {self.stamp}")
        object.__setattr__(self, "position", position)

    @property
    def person_key(self) -> PersonKey:
        return (self.sensor, self.local_id)

    def to_record(self) -> Dict:
        x, y, z = self.position
        return {"sensor": self.sensor, "local_id": self.local_id, "stamp": self.stamp, "x": x, "y": y, "z": z}

    @classmethod
    def from_record(cls, data: Dict) -> "Detection":
        if not isinstance(data, dict):
            raise MalformedRecordError(f"Expected an object, got {type(data).__name__}")
        missing = [name for name in DETECTION_FIELDS if name not in data]
        if missing:
            raise MalformedRecordError(f"Missing fields {missing}")
        try:
            return cls(
                sensor=str(data["sensor"]),
                local_id=data["local_id"],
                stamp=data["stamp"],
                position=(data["x"], data["y"], data["z"]),
            )
        except (TypeError, ValueError) as e:
            raise MalformedRecordError(str(e)) from e


@dataclass(frozen=True)
class TrackSample:
    """A detection projected into the apartment frame."""

    person_key: PersonKey
    stamp: float
    position: Vector3


class TrackSequence:
    """A gap-free run of samples of one person_key, strictly increasing in stamp."""

    def __init__(self, person_key: PersonKey, stamps: Sequence[float], positions: Sequence[Sequence[float]]):
        stamps_array = np.asarray(stamps, dtype=float).reshape(-1)
        positions_array = np.asarray(positions, dtype=float).reshape(-1, 3)
        if len(stamps_array) == 0:
            raise ValueError("A track sequence needs at least one sample")
        if len(stamps_array) != len(positions_array):
            raise ValueError("Stamps and positions differ in length")
        if np.any(np.diff(stamps_array) <= 0):
            raise ValueError(f"Stamps of {person_frame(person_key)} are not strictly increasing")
        stamps_array.setflags(write=False)
        positions_array.setflags(write=False)
        self.person_key = (str(person_key[0]), int(person_key[1]))
        self.stamps = stamps_array
        self.positions = positions_array

    @classmethod
    def from_samples(cls, samples: Sequence[TrackSample]) -> "TrackSequence":
        return cls(samples[0].person_key, [s.stamp for s in samples], [s.position for s in samples])

    def __len__(self) -> int:
        return len(self.stamps)

    def __repr__(self) -> str:
        return f"TrackSequence({person_frame(self.person_key)}, {len(self)} samples, {self.t_start:.3f}-{self.t_end:.3f} s)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrackSequence):
            return NotImplemented
        return (
            self.person_key == other.person_key
            and np.array_equal(self.stamps, other.stamps)
            and np.array_equal(self.positions, other.positions)
        )

    __hash__ = None

    @property
    def t_start(self) -> float:
        return float(self.stamps[0])

    @property
    def t_end(self) -> float:
        return float(self.stamps[-1])

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    @property
    def samples(self) -> List[Tuple[float, Vector3]]:
        return [(float(t), tuple(float(v) for v in p)) for t, p in zip(self.stamps, self.positions)]

    def slice(self, start: int, stop: int) -> "TrackSequence":
        return TrackSequence(self.person_key, self.stamps[start:stop], self.positions[start:stop])

    def sort_key(self) -> Tuple[float, str, int]:
        return (self.t_start, self.person_key[0], self.person_key[1])
