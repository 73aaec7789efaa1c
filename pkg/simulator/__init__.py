"""
Simulator module: shrunk-day scenarios, ground truth and simulated sensors.
"""

from .scenario import Activity, ScenarioScript, ScenarioError, parse_daytime, POSTURES
from .noise import NoiseModel, GhostSpawn, ForcedSwap
from .sensors import SensorConfig, load_sensors, coverage_issues
from .compiler import CompiledScenario, Trajectory, compile_scenario, POSTURE_HEIGHT
from .sensing import SenseStats, SensorStream, sense, knot_noise
from .replay import replay_realtime, RealtimeReplayer

__all__ = [
    'Activity',
    'ScenarioScript',
    'ScenarioError',
    'parse_daytime',
    'POSTURES',
    'NoiseModel',
    'GhostSpawn',
    'ForcedSwap',
    'SensorConfig',
    'load_sensors',
    'coverage_issues',
    'CompiledScenario',
    'Trajectory',
    'compile_scenario',
    'POSTURE_HEIGHT',
    'SenseStats',
    'SensorStream',
    'sense',
    'knot_noise',
    'replay_realtime',
    'RealtimeReplayer',
]
