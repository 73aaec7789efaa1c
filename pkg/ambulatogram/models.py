"""
Ambulatogram and presence interval models.
"""

import math
from dataclasses import dataclass
from typing import Dict, NamedTuple, Sequence, Tuple, Union

import numpy as np

from ingestion import PersonKey

# Guards bin arithmetic against float representation error (e.g. 0.3 / 0.1).
BIN_EPS = 1e-9


class AmbulatogramMismatchError(ValueError):
    """Two ambulatograms that do not share span, bin width or zones."""


class UnknownZoneError(KeyError):
    """A zone name absent from the ambulatogram or zone map."""


class IntervalOverlapError(ValueError):
    """Presence intervals of one person that overlap in time."""


def bin_count(t0: float, t1: float, bin_width: float) -> int:
    if bin_width <= 0:
        raise ValueError(f"bin_width must be positive, got {bin_width}")
    if t1 < t0:
        raise ValueError(f"Span end {t1} before start {t0}")
    return max(int(math.ceil((t1 - t0) / bin_width - BIN_EPS)), 0)


def bin_of(stamp: float, t0: float, bin_width: float) -> int:
    return int(math.floor((stamp - t0) / bin_width + BIN_EPS))


@dataclass(frozen=True)
class PresenceInterval:
    """A person in a zone over [t_start, t_end)."""

    person: Union[str, PersonKey]
    zone: str
    t_start: float
    t_end: float
    activity: str = ""

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError(f"Interval of {self.person} in {self.zone} has t_start {self.t_start} >= t_end {self.t_end}")

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    def to_dict(self) -> Dict:
        person = list(self.person) if isinstance(self.person, tuple) else self.person
        data = {"person": person, "zone": self.zone, "t_start": self.t_start, "t_end": self.t_end}
        if self.activity:
            data["activity"] = self.activity
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "PresenceInterval":
        person = data["person"]
        if isinstance(person, list):
            person = (str(person[0]), int(person[1]))
        return cls(person, data["zone"], float(data["t_start"]), float(data["t_end"]), data.get("activity", ""))


class CopresenceInterval(NamedTuple):
    t_start: float
    t_end: float
    max_count: int


@dataclass
class Ambulatogram:
    """People count per zone per time bin."""

    bin_width: float
    t0: float
    t1: float
    zone_names: Tuple[str, ...]
    counts: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.zone_names = tuple(self.zone_names)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        expected = (len(self.zone_names), bin_count(self.t0, self.t1, self.bin_width))
        if self.counts.shape != expected:
            raise ValueError(f"Counts shape {self.counts.shape} does not match {expected}")
        if np.any(self.counts < 0):
            raise ValueError("Counts must be non-negative")

    @classmethod
    def zeros(cls, zone_names: Sequence[str], bin_width: float, span: Tuple[float, float], label: str = "") -> "Ambulatogram":
        t0, t1 = span
        return cls(bin_width, t0, t1, tuple(zone_names), np.zeros((len(zone_names), bin_count(t0, t1, bin_width)), dtype=np.int64), label)

    @property
    def n_bins(self) -> int:
        return self.counts.shape[1]

    @property
    def span(self) -> Tuple[float, float]:
        return (self.t0, self.t1)

    def bin_starts(self) -> np.ndarray:
        return self.t0 + self.bin_width * np.arange(self.n_bins)

    def row(self, zone: str) -> np.ndarray:
        if zone not in self.zone_names:
            raise UnknownZoneError(f"Unknown zone '{zone}'")
        return self.counts[self.zone_names.index(zone)]

    def restricted(self, zones: Sequence[str]) -> "Ambulatogram":
        """Copy holding only ``zones``, in the given order."""
        rows = [self.row(zone) for zone in zones]
        counts = np.vstack(rows) if rows else np.zeros((0, self.n_bins), dtype=np.int64)
        return Ambulatogram(self.bin_width, self.t0, self.t1, tuple(zones), counts, self.label)

    def check_compatible(self, other: "Ambulatogram") -> None:
        if self.n_bins != other.n_bins or not math.isclose(self.bin_width, other.bin_width) or not math.isclose(self.t0, other.t0):
            raise AmbulatogramMismatchError(
                f"Span/bins differ: [{self.t0}, {self.t1}) / {self.bin_width} s vs [{other.t0}, {other.t1}) / {other.bin_width} s"
            )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ambulatogram):
            return NotImplemented
        return (
            self.bin_width == other.bin_width
            and self.t0 == other.t0
            and self.t1 == other.t1
            and self.zone_names == other.zone_names
            and np.array_equal(self.counts, other.counts)
        )
