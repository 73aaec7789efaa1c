"""
Sensor artifact model: measurement noise, ghosts, swaps, dropouts and
track fragmentation.
"""

from dataclasses import dataclass, fields, replace
from typing import Dict, Optional, Tuple

Vector3 = Tuple[float, float, float]


@dataclass(frozen=True)
class GhostSpawn:
    """A static object the tracker takes for a person."""

    zone: str
    position: Vector3
    start: str
    end: str

    def __post_init__(self):
        position = tuple(float(v) for v in self.position)
        if len(position) == 2:
            position = position + (0.9,)
        object.__setattr__(self, "position", position)

    def to_dict(self) -> Dict:
        return {"zone": self.zone, "position": list(self.position), "start": self.start, "end": self.end}

    @classmethod
    def from_dict(cls, data: Dict) -> "GhostSpawn":
        return cls(data["zone"], tuple(data["position"]), data["start"], data["end"])


@dataclass(frozen=True)
class ForcedSwap:
    """Exchange the ids of the two closest tracks of ``sensor`` at clock time ``at``."""

    sensor: str
    at: str

    def to_dict(self) -> Dict:
        return {"sensor": self.sensor, "at": self.at}

    @classmethod
    def from_dict(cls, data: Dict) -> "ForcedSwap":
        return cls(data["sensor"], data["at"])


@dataclass(frozen=True)
class NoiseModel:
    """
    Artifact parameters of the simulated sensors.

    Rates are per second of scenario clock, ``fragmentation`` and
    ``swap_rate`` are per sample and per opportunity respectively.
    """

    position_sigma: float = 0.05
    noise_period: float = 1.0
    ghost_sigma: float = 0.02
    ghost_spawns: Tuple[GhostSpawn, ...] = ()
    swap_rate: float = 0.5
    swap_distance: float = 0.5
    forced_swaps: Tuple[ForcedSwap, ...] = ()
    dropout_rate: float = 1.0 / 80.0
    dropout_rate_lying: float = 1.0 / 60.0
    dropout_duration: Tuple[float, float] = (6.0, 16.0)
    dropout_duration_lying: Tuple[float, float] = (10.0, 30.0)
    static_speed: float = 0.05
    fragmentation: float = 0.02
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "ghost_spawns", tuple(
            g if isinstance(g, GhostSpawn) else GhostSpawn.from_dict(g) for g in self.ghost_spawns
        ))
        object.__setattr__(self, "forced_swaps", tuple(
            s if isinstance(s, ForcedSwap) else ForcedSwap.from_dict(s) for s in self.forced_swaps
        ))
        object.__setattr__(self, "dropout_duration", tuple(float(v) for v in self.dropout_duration))
        object.__setattr__(self, "dropout_duration_lying", tuple(float(v) for v in self.dropout_duration_lying))
        for name in ("position_sigma", "ghost_sigma", "swap_distance", "static_speed", "dropout_rate", "dropout_rate_lying"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("swap_rate", "fragmentation"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be a probability in [0, 1]")
        if self.noise_period <= 0:
            raise ValueError("noise_period must be positive")
        for name in ("dropout_duration", "dropout_duration_lying"):
            low, high = getattr(self, name)
            if low < 0 or high < low:
                raise ValueError(f"{name} must be an ordered non-negative range")

    def dropout_probability(self, lying: bool, dt: float) -> float:
        """Chance that a dropout starts within one tick of length ``dt``."""
        rate = self.dropout_rate_lying if lying else self.dropout_rate
        return min(rate * dt, 1.0)

    @classmethod
    def disabled(cls) -> "NoiseModel":
        """No noise, no artifacts."""
        return cls(
            position_sigma=0.0,
            ghost_sigma=0.0,
            swap_rate=0.0,
            dropout_rate=0.0,
            dropout_rate_lying=0.0,
            fragmentation=0.0,
        )

    def with_seed(self, seed: int) -> "NoiseModel":
        return replace(self, seed=seed)

    def to_dict(self) -> Dict:
        data = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in ("ghost_spawns", "forced_swaps"):
                value = [item.to_dict() for item in value]
            elif isinstance(value, tuple):
                value = list(value)
            data[f.name] = value
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "NoiseModel":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"Unknown noise parameters {sorted(unknown)}")
        options = dict(data)
        for name in ("ghost_spawns", "forced_swaps", "dropout_duration", "dropout_duration_lying"):
            if name in options:
                options[name] = tuple(options[name])
        return cls(**options)
