"""
Run configuration: built-in defaults, JSON config files, environment and
command-line overrides.

Precedence, highest first: command-line flags, ``COPRESENCE_*`` environment
variables (a ``.env`` file is loaded when present), the ``--config`` file,
the shipped ``data/default_config.json``.
"""

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import load_dotenv
from loguru import logger

from artifact_filter import FilterConfig
from simulator import NoiseModel

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
DEFAULT_CONFIG_PATH = DATA_DIR / "default_config.json"

ENV_PREFIX = "COPRESENCE_"
PATH_KEYS = ("zones", "sensors", "scenario", "output_dir", "log_dir")
SECTION_KEYS = ("filter", "bridge", "noise")
MODES = ("batch", "realtime")

# environment variable suffix -> (config key, parser)
ENV_KEYS = {
    "SEED": ("seed", int),
    "RUNS": ("runs", int),
    "JOBS": ("jobs", int),
    "BIN_WIDTH": ("bin_width", float),
    "OUTPUT_DIR": ("output_dir", str),
    "ZONES": ("zones", str),
    "SENSORS": ("sensors", str),
    "SCENARIO": ("scenario", str),
    "MODE": ("mode", str),
    "REALTIME_SPEED": ("realtime_speed", float),
    "STRICT": ("strict", lambda v: v.strip().lower() in ("1", "true", "yes", "on")),
    "LOG_LEVEL": ("log_level", str),
    "LOG_DIR": ("log_dir", str),
}


class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""


@dataclass(frozen=True)
class BridgeConfig:
    enabled: bool = False
    max_gap: float = 600.0
    max_displacement: float = 0.5

    def __post_init__(self):
        if self.max_gap <= 0 or self.max_displacement < 0:
            raise ValueError("bridge max_gap must be positive and max_displacement non-negative")

    def to_dict(self) -> Dict:
        return {"enabled": self.enabled, "max_gap": self.max_gap, "max_displacement": self.max_displacement}


@dataclass
class RunConfig:
    """Everything one invocation needs; paths are absolute once loaded."""

    zones: Path
    sensors: Path
    scenario: Path
    output_dir: Path
    filter: FilterConfig = field(default_factory=FilterConfig)
    bridge: BridgeConfig = field(default_factory=BridgeConfig)
    noise: NoiseModel = field(default_factory=NoiseModel)
    seed: int = 42
    runs: int = 1
    jobs: int = 1
    bin_width: float = 5.0
    gap_threshold: float = 2.0
    reorder_window: float = 0.2
    extrapolation_margin: float = 0.5
    retention: Optional[float] = None
    min_copresence: float = 10.0
    mode: str = "batch"
    realtime_speed: float = 1.0
    strict: bool = False
    log_level: str = "INFO"
    log_dir: Optional[Path] = None

    def validate(self) -> "RunConfig":
        """Raise ConfigError on the first problem found."""
        for name in ("zones", "sensors", "scenario"):
            path = getattr(self, name)
            if not path.exists():
                raise ConfigError(f"{name} file not found: {path}")
        checks = [
            (self.runs >= 1, f"runs must be at least 1, got {self.runs}"),
            (self.jobs >= 1, f"jobs must be at least 1, got {self.jobs}"),
            (self.bin_width > 0, f"bin_width must be positive, got {self.bin_width}"),
            (self.gap_threshold > 0, f"gap_threshold must be positive, got {self.gap_threshold}"),
            (self.reorder_window >= 0, f"reorder_window must be non-negative, got {self.reorder_window}"),
            (self.extrapolation_margin >= 0, f"extrapolation_margin must be non-negative, got {self.extrapolation_margin}"),
            (self.retention is None or self.retention > 0, f"retention must be positive, got {self.retention}"),
            (self.min_copresence >= 0, f"min_copresence must be non-negative, got {self.min_copresence}"),
            (self.mode in MODES, f"mode must be one of {MODES}, got {self.mode!r}"),
            (self.realtime_speed > 0, f"realtime speed must be positive, got {self.realtime_speed}"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)
        return self

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "zones": str(self.zones),
            "sensors": str(self.sensors),
            "scenario": str(self.scenario),
            "output_dir": str(self.output_dir),
            "filter": self.filter.to_dict(),
            "bridge": self.bridge.to_dict(),
            "noise": self.noise.to_dict(),
        }
        for name in ("seed", "runs", "jobs", "bin_width", "gap_threshold", "reorder_window",
                     "extrapolation_margin", "retention", "min_copresence", "mode", "realtime_speed",
                     "strict", "log_level"):
            data[name] = getattr(self, name)
        data["log_dir"] = str(self.log_dir) if self.log_dir else None
        return data

    def fingerprint(self) -> str:
        """SHA-256 over the input file contents and every result-affecting parameter."""
        digest = hashlib.sha256()
        for name in ("zones", "sensors", "scenario"):
            digest.update(getattr(self, name).read_bytes())
        parameters = self.to_dict()
        for name in PATH_KEYS + ("log_level", "jobs", "mode", "realtime_speed"):
            parameters.pop(name, None)
        digest.update(json.dumps(parameters, sort_keys=True).encode("utf-8"))
        return digest.hexdigest()

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunConfig":
        missing = [name for name in ("zones", "sensors", "scenario", "output_dir") if not data.get(name)]
        if missing:
            raise ConfigError(f"Missing configuration keys: {missing}")
        try:
            bridge = data.get("bridge") or {}
            return cls(
                zones=Path(data["zones"]),
                sensors=Path(data["sensors"]),
                scenario=Path(data["scenario"]),
                output_dir=Path(data["output_dir"]),
                filter=FilterConfig.from_dict(data.get("filter") or {}),
                bridge=BridgeConfig(**bridge),
                noise=NoiseModel.from_dict(data.get("noise") or {}),
                seed=int(data.get("seed", 42)),
                runs=int(data.get("runs", 1)),
                jobs=int(data.get("jobs", 1)),
                bin_width=float(data.get("bin_width", 5.0)),
                gap_threshold=float(data.get("gap_threshold", 2.0)),
                reorder_window=float(data.get("reorder_window", 0.2)),
                extrapolation_margin=float(data.get("extrapolation_margin", 0.5)),
                retention=None if data.get("retention") is None else float(data["retention"]),
                min_copresence=float(data.get("min_copresence", 10.0)),
                mode=str(data.get("mode", "batch")),
                realtime_speed=float(data.get("realtime_speed", 1.0)),
                strict=bool(data.get("strict", False)),
                log_level=str(data.get("log_level", "INFO")).upper(),
                log_dir=Path(data["log_dir"]) if data.get("log_dir") else None,
            )
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"Invalid configuration: {e}") from e


def _read_config_file(path: Path) -> Dict[str, Any]:
    """Parse a JSON config file and resolve its relative paths against its directory."""
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    for key in PATH_KEYS:
        if data.get(key):
            data[key] = str((path.parent / data[key]).resolve())
    return data


def _merge(base: Dict[str, Any], layer: Mapping[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in layer.items():
        if value is None:
            continue
        if key in SECTION_KEYS and isinstance(value, Mapping):
            merged[key] = {**(merged.get(key) or {}), **value}
        else:
            merged[key] = value
    return merged


def env_overrides(environ: Mapping[str, str]) -> Dict[str, Any]:
    """Config keys taken from ``COPRESENCE_*`` variables."""
    overrides: Dict[str, Any] = {}
    for suffix, (key, parse) in ENV_KEYS.items():
        raw = environ.get(ENV_PREFIX + suffix)
        if raw is None or raw == "":
            continue
        try:
            overrides[key] = parse(raw)
        except ValueError as e:
            raise ConfigError(f"{ENV_PREFIX}{suffix}={raw!r} is invalid: {e}") from e
    for key in PATH_KEYS:
        if key in overrides:
            overrides[key] = str(Path(overrides[key]).resolve())
    return overrides


def load_config(
    path: Optional[Path] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Layer defaults, ``path``, the environment and ``overrides``; validate the result."""
    if environ is None:
        load_dotenv()
        environ = os.environ
    data = _read_config_file(DEFAULT_CONFIG_PATH)
    if path is not None:
        data = _merge(data, _read_config_file(Path(path)))
    data = _merge(data, env_overrides(environ))
    cli = dict(overrides or {})
    for key in PATH_KEYS:
        if cli.get(key):
            cli[key] = str(Path(cli[key]).resolve())
    data = _merge(data, cli)

    config = RunConfig.from_dict(data).validate()
    logger.debug(f"Loaded configuration (seed {config.seed}, {config.runs} runs, mode {config.mode})")
    return config
