"""
Ground truth of a scenario: per-person trajectories and presence intervals.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from loguru import logger
from scipy.signal import lfilter

from ambulatogram import PresenceInterval
from zones import ZoneMap

from .scenario import ScenarioError, ScenarioScript

# Center-of-mass height per posture, meters.
POSTURE_HEIGHT = {"standing": 1.0, "seated": 0.7, "lying": 0.3}
# Time to sit down, lie down or get up again.
POSTURE_TRANSITION = 2.0
SWAY_CORRELATION_TIME = 5.0


@dataclass
class Trajectory:
    """Sampled ground truth of one person; NaN rows while absent from the day."""

    person: str
    positions: np.ndarray
    posture: np.ndarray
    speed: np.ndarray
    activity: np.ndarray

    @property
    def present(self) -> np.ndarray:
        return np.isfinite(self.positions[:, 0])


@dataclass
class CompiledScenario:
    script: ScenarioScript
    stamps: np.ndarray
    trajectories: Dict[str, Trajectory]
    intervals: List[PresenceInterval]

    @property
    def dt(self) -> float:
        return 1.0 / self.script.rate_hz

    @property
    def span(self):
        return (0.0, self.script.duration)


def _sway(rng: np.random.Generator, n: int, sigma: float, dt: float) -> np.ndarray:
    """Ornstein-Uhlenbeck sway around an anchor, stationary standard deviation ``sigma``."""
    start = rng.standard_normal(2)
    shocks = rng.standard_normal((n, 2))
    if sigma == 0.0:
        return np.zeros((n, 2))
    rho = math.exp(-dt / SWAY_CORRELATION_TIME)
    gain = sigma * math.sqrt(1.0 - rho * rho)
    return np.column_stack([
        lfilter([gain], [1.0, -rho], shocks[:, axis], zi=[rho * sigma * start[axis]])[0] for axis in range(2)
    ])


def _ramp(elapsed: np.ndarray, source: float, target: float) -> np.ndarray:
    fraction = np.clip(elapsed / POSTURE_TRANSITION, 0.0, 1.0)
    return source + (target - source) * fraction


def _walk(path: np.ndarray, distance: np.ndarray) -> np.ndarray:
    """Points at ``distance`` along a polyline."""
    segment_lengths = np.linalg.norm(np.diff(path, axis=0), axis=1)
    cumulative = np.concatenate([[0.0], np.cumsum(segment_lengths)])
    return np.column_stack([np.interp(distance, cumulative, path[:, axis]) for axis in range(2)])


def _tick(stamp: float, rate_hz: float) -> int:
    return int(math.ceil(stamp * rate_hz - 1e-6))


def compile_scenario(
    script: ScenarioScript,
    zone_map: ZoneMap,
    rng: Optional[np.random.Generator] = None,
    seed: Optional[int] = None,
) -> CompiledScenario:
    """
    Sample every person's ground truth at ``script.rate_hz``.

    Within an activity the person sways around the activity anchor (the zone
    centroid unless the script names one). Between activities the person walks
    the straight legs anchor, waypoints, next anchor at ``walking_speed``.
    """
    script.validate(zone_map)
    rng = rng if rng is not None else np.random.default_rng(seed)
    n = script.n_ticks
    dt = 1.0 / script.rate_hz
    stamps = np.round(np.arange(n) * dt, 6)
    trajectories: Dict[str, Trajectory] = {}
    intervals: List[PresenceInterval] = []

    for person in script.persons:
        positions = np.full((n, 3), np.nan)
        posture = np.full(n, "", dtype="<U8")
        speed = np.zeros(n)
        activity_index = np.full(n, -1, dtype=int)
        sway = _sway(rng, n, script.idle_sigma, dt)
        activities = script.activities_of(person)
        previous_anchor = None
        previous_height = POSTURE_HEIGHT["standing"]

        for index, activity in enumerate(activities):
            start, end = script.window(activity)
            k0, k1 = _tick(start, script.rate_hz), min(_tick(end, script.rate_hz), n)
            if k1 <= k0:
                continue
            anchor = np.array(activity.anchor if activity.anchor is not None else zone_map.get(activity.zone).centroid)
            if previous_anchor is None:
                path = anchor[None, :]
            else:
                path = np.vstack([previous_anchor[None, :], np.array(activity.waypoints).reshape(-1, 2), anchor[None, :]])
            path_length = float(np.sum(np.linalg.norm(np.diff(path, axis=0), axis=1))) if len(path) > 1 else 0.0
            walk_time = path_length / script.walking_speed

            ticks = np.arange(k0, k1)
            elapsed = (ticks - k0) * dt
            walking = elapsed < walk_time
            if walk_time > end - start:
                logger.warning(f"{person} is still walking when '{activity.label}' ends")

            idle_height = POSTURE_HEIGHT[activity.posture]
            if walking.any():
                positions[ticks[walking], :2] = _walk(path, elapsed[walking] * script.walking_speed)
                positions[ticks[walking], 2] = _ramp(elapsed[walking], previous_height, POSTURE_HEIGHT["standing"])
                posture[ticks[walking]] = "standing"
                speed[ticks[walking]] = script.walking_speed
            resting = ~walking
            if resting.any():
                since_arrival = elapsed[resting] - walk_time
                arrival_height = POSTURE_HEIGHT["standing"] if walking.any() else idle_height
                positions[ticks[resting], :2] = anchor[None, :] + sway[ticks[resting]]
                positions[ticks[resting], 2] = _ramp(since_arrival, arrival_height, idle_height)
                posture[ticks[resting]] = activity.posture
            activity_index[ticks] = index
            previous_anchor = anchor
            previous_height = idle_height

        trajectory = Trajectory(person, positions, posture, speed, activity_index)
        trajectories[person] = trajectory
        intervals.extend(_presence_intervals(trajectory, activities, stamps, zone_map, script.rate_hz))

    intervals.sort(key=lambda i: (i.t_start, str(i.person), i.zone))
    logger.info(f"Compiled '{script.name}': {n} ticks, {len(trajectories)} persons, {len(intervals)} presence intervals")
    return CompiledScenario(script, stamps, trajectories, intervals)


def _presence_intervals(trajectory, activities, stamps, zone_map, rate_hz) -> List[PresenceInterval]:
    """Runs of consecutive ticks classified into the same zone."""
    labels: List[Optional[str]] = [None] * len(stamps)
    present = np.flatnonzero(trajectory.present)
    for k, zone in zip(present, zone_map.classify_many(trajectory.positions[present])):
        labels[k] = zone

    intervals = []
    run_start = None
    for k in range(len(labels) + 1):
        current = labels[k] if k < len(labels) else None
        if run_start is not None and (current != labels[run_start]):
            activity = trajectory.activity[run_start]
            intervals.append(PresenceInterval(
                person=trajectory.person,
                zone=labels[run_start],
                t_start=float(stamps[run_start]),
                t_end=round(k / rate_hz, 6),
                activity=activities[activity].label if activity >= 0 else "",
            ))
            run_start = None
        if current is not None and run_start is None:
            run_start = k
    return intervals
