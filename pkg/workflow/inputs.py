"""
Loading and validating the static inputs of a run.
"""

import json
from dataclasses import dataclass
from typing import List, Tuple

from loguru import logger

from config import ConfigError, RunConfig
from localization import TransformTree, build_tree
from simulator import ScenarioError, ScenarioScript, SensorConfig, coverage_issues, load_sensors
from zones import ZoneMap, ZoneValidationError


@dataclass
class RunInputs:
    zone_map: ZoneMap
    sensors: List[SensorConfig]
    script: ScenarioScript

    @property
    def span(self) -> Tuple[float, float]:
        return (0.0, self.script.duration)

    def tree(self, config: RunConfig) -> TransformTree:
        """Static sensor poses; streaming mode keeps a bounded history."""
        retention = config.retention
        if retention is None and config.mode == "realtime":
            retention = 300.0
        return build_tree(
            (sensor.static_transform() for sensor in self.sensors),
            extrapolation_margin=config.extrapolation_margin,
            retention=retention,
        )


def load_inputs(config: RunConfig) -> RunInputs:
    """Zone map, sensors and scenario; raises before anything is written."""
    try:
        zone_map = ZoneMap.load(config.zones).ensure_valid()
        sensors = load_sensors(config.sensors)
        script = ScenarioScript.load(config.scenario)
    except (ZoneValidationError, ScenarioError):
        raise
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Unreadable input file: {e}") from e
    for issue in coverage_issues(sensors, zone_map):
        logger.warning(f"Sensor coverage: {issue}")
    script.validate(zone_map)
    return RunInputs(zone_map, sensors, script)
