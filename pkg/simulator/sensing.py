"""
Simulated depth sensors: turn ground truth into a noisy detection stream.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ingestion import Detection

from .compiler import CompiledScenario
from .noise import NoiseModel
from .sensors import SensorConfig

# Tracker user ids cycle through this range, as depth-camera SDKs hand out small integers.
MAX_LOCAL_ID = 64


@dataclass
class SenseStats:
    detections: Dict[str, int] = field(default_factory=dict)
    capacity_truncations: int = 0
    random_swaps: int = 0
    forced_swaps: int = 0
    fragment_renewals: int = 0
    dropout_episodes: int = 0

    def to_dict(self) -> Dict:
        return {
            "detections": dict(self.detections),
            "capacity_truncations": self.capacity_truncations,
            "random_swaps": self.random_swaps,
            "forced_swaps": self.forced_swaps,
            "fragment_renewals": self.fragment_renewals,
            "dropout_episodes": self.dropout_episodes,
        }


@dataclass
class SensorStream:
    detections: List[Detection]
    stats: SenseStats


@dataclass
class _Entity:
    name: str
    truth: np.ndarray
    static: np.ndarray
    seated: np.ndarray
    lying: np.ndarray
    ghost: bool = False


@dataclass
class _View:
    """One entity as one sensor sees it."""

    visible: np.ndarray
    measured: np.ndarray
    lateral: np.ndarray


class _SensorState:
    def __init__(self, config: SensorConfig):
        self.config = config
        self.ids: Dict[str, int] = {}
        self.dropout_until: Dict[str, float] = {}
        self.armed: Dict[Tuple[str, str], bool] = {}
        self.next_id = 1

    def allocate(self) -> int:
        used = set(self.ids.values())
        candidate = self.next_id
        while candidate in used:
            candidate = candidate % MAX_LOCAL_ID + 1
        self.next_id = candidate % MAX_LOCAL_ID + 1
        return candidate


def knot_noise(rng: np.random.Generator, n: int, dt: float, period: float, sigma: float) -> np.ndarray:
    """Gaussian values at knots every ``period`` seconds, linearly interpolated per tick."""
    if sigma == 0.0 or n == 0:
        return np.zeros((n, 3))
    n_knots = int(math.ceil(n * dt / period)) + 2
    knots = rng.normal(0.0, sigma, size=(n_knots, 3))
    position = np.arange(n) * dt / period
    return np.column_stack([np.interp(position, np.arange(n_knots), knots[:, axis]) for axis in range(3)])


def _entities(compiled: CompiledScenario, noise: NoiseModel) -> List[_Entity]:
    entities = []
    for person in compiled.script.persons:
        trajectory = compiled.trajectories[person]
        present = trajectory.present
        entities.append(_Entity(
            name=person,
            truth=trajectory.positions,
            static=present & (trajectory.speed < noise.static_speed),
            seated=trajectory.posture == "seated",
            lying=trajectory.posture == "lying",
        ))
    n = len(compiled.stamps)
    for index, spawn in enumerate(noise.ghost_spawns):
        start = compiled.script.stamp_of(spawn.start)
        end = compiled.script.stamp_of(spawn.end, after=start)
        active = (compiled.stamps >= start) & (compiled.stamps < end)
        truth = np.full((n, 3), np.nan)
        truth[active] = spawn.position
        entities.append(_Entity(
            name=f"ghost{index + 1}:{spawn.zone}",
            truth=truth,
            static=active,
            seated=np.zeros(n, dtype=bool),
            lying=np.zeros(n, dtype=bool),
            ghost=True,
        ))
    return entities


def sense(
    compiled: CompiledScenario,
    sensors: Sequence[SensorConfig],
    noise: NoiseModel,
    rng: Optional[np.random.Generator] = None,
) -> SensorStream:
    """
    Detections of every sensor at the scenario rate, sorted by stamp, sensor, local_id.

    Noise is drawn once per (sensor, entity) pair up front; tracker events
    (dropouts, id renewals, swaps) are drawn tick by tick in sensor order.
    """
    rng = rng if rng is not None else np.random.default_rng(noise.seed)
    stamps = compiled.stamps
    n = len(stamps)
    dt = compiled.dt
    entities = _entities(compiled, noise)
    stats = SenseStats(detections={s.sensor: 0 for s in sensors})

    views: Dict[Tuple[str, str], _View] = {}
    for sensor in sensors:
        for entity in entities:
            visible = sensor.visible(entity.truth)
            if not visible.any():
                continue
            sigma = noise.ghost_sigma if entity.ghost else noise.position_sigma
            measured = sensor.to_sensor_frame(entity.truth + knot_noise(rng, n, dt, noise.noise_period, sigma))
            lateral = sensor.to_sensor_frame(entity.truth)[:, 1]
            views[(sensor.sensor, entity.name)] = _View(visible, measured, lateral)

    forced = {
        s.sensor: sorted(compiled.script.stamp_of(f.at) for f in noise.forced_swaps if f.sensor == s.sensor)
        for s in sensors
    }
    states = [_SensorState(s) for s in sensors]
    detections: List[Detection] = []

    for k in range(n):
        stamp = float(stamps[k])
        for state in states:
            sensor_id = state.config.sensor
            in_view = [e for e in entities if (sensor_id, e.name) in views and views[(sensor_id, e.name)].visible[k]]
            names_in_view = {e.name for e in in_view}
            for name in [name for name in state.ids if name not in names_in_view]:
                del state.ids[name]
                state.dropout_until.pop(name, None)
            for entity in in_view:
                if entity.name in state.ids:
                    continue
                if len(state.ids) >= state.config.max_tracks:
                    stats.capacity_truncations += 1
                    continue
                state.ids[entity.name] = state.allocate()

            emitting = []
            for entity in in_view:
                if entity.name not in state.ids:
                    continue
                if state.dropout_until.get(entity.name, -1.0) > stamp:
                    continue
                if not entity.ghost and entity.static[k]:
                    if rng.random() < noise.dropout_probability(bool(entity.lying[k]), dt):
                        low, high = noise.dropout_duration_lying if entity.lying[k] else noise.dropout_duration
                        state.dropout_until[entity.name] = stamp + rng.uniform(low, high)
                        stats.dropout_episodes += 1
                        continue
                    if entity.seated[k] and noise.fragmentation > 0 and rng.random() < noise.fragmentation:
                        del state.ids[entity.name]
                        state.ids[entity.name] = state.allocate()
                        stats.fragment_renewals += 1
                emitting.append(entity)

            _swap_forced(state, emitting, views, forced[sensor_id], stamp, k, stats)
            _swap_random(state, emitting, views, noise, rng, k, stats)

            frame = []
            for entity in emitting:
                position = views[(sensor_id, entity.name)].measured[k]
                frame.append(Detection(sensor_id, state.ids[entity.name], stamp, (float(position[0]), float(position[1]), float(position[2]))))
            frame.sort(key=lambda d: d.local_id)
            detections.extend(frame)
            stats.detections[sensor_id] += len(frame)

    logger.info(
        f"Sensed {len(detections)} detections: {stats.dropout_episodes} dropouts, {stats.fragment_renewals} id renewals, "
        f"{stats.random_swaps + stats.forced_swaps} swaps, {stats.capacity_truncations} capacity truncations"
    )
    return SensorStream(detections, stats)


def _exchange(state: _SensorState, first: str, second: str) -> None:
    state.ids[first], state.ids[second] = state.ids[second], state.ids[first]


def _swap_forced(state, emitting, views, pending: List[float], stamp: float, k: int, stats: SenseStats) -> None:
    if not pending or pending[0] > stamp or len(emitting) < 2:
        return
    sensor_id = state.config.sensor
    best = None
    for i, first in enumerate(emitting):
        for second in emitting[i + 1:]:
            separation = abs(views[(sensor_id, first.name)].lateral[k] - views[(sensor_id, second.name)].lateral[k])
            if best is None or separation < best[0]:
                best = (separation, first.name, second.name)
    _exchange(state, best[1], best[2])
    pending.pop(0)
    stats.forced_swaps += 1
    logger.debug(f"{sensor_id}: forced swap of {best[1]} and {best[2]} at {stamp}")


def _swap_random(state, emitting, views, noise: NoiseModel, rng, k: int, stats: SenseStats) -> None:
    """One swap chance per encounter of two tracks overlapping along the line of sight."""
    if noise.swap_distance <= 0:
        return
    sensor_id = state.config.sensor
    for i, first in enumerate(emitting):
        for second in emitting[i + 1:]:
            pair = (first.name, second.name)
            separation = abs(views[(sensor_id, first.name)].lateral[k] - views[(sensor_id, second.name)].lateral[k])
            if separation <= noise.swap_distance:
                if state.armed.get(pair, True):
                    state.armed[pair] = False
                    if noise.swap_rate > 0 and rng.random() < noise.swap_rate:
                        _exchange(state, first.name, second.name)
                        stats.random_swaps += 1
            elif separation > 2.0 * noise.swap_distance:
                state.armed[pair] = True
