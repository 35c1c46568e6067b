"""Pipeline configuration: a JSON document whose keys mirror :class:`PipelineConfig`.

Every key is optional; unknown keys are fatal so typos never pass silently.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields

from ..errors import ConfigError, ParameterError
from ..proximity import THRESHOLD_MAX, THRESHOLD_MIN
from ..tracking import NoiseModel, TrackerConfig


@dataclass(frozen=True)
class ProximityConfig:
    threshold_min: float = THRESHOLD_MIN
    threshold_max: float = THRESHOLD_MAX
    axis_scales: tuple[float, float, float] = (1.0, 1.0, 1.0)
    depth_precedence: str = "printed"

    def __post_init__(self):
        if not (0 < self.threshold_min <= self.threshold_max):
            raise ParameterError("need 0 < threshold_min <= threshold_max")
        if len(self.axis_scales) != 3 or any(not s > 0 for s in self.axis_scales):
            raise ParameterError("axis_scales must be three positive numbers")
        if self.depth_precedence not in ("printed", "grouped"):
            raise ParameterError("depth_precedence must be 'printed' or 'grouped'")


@dataclass(frozen=True)
class OutputConfig:
    reports: str | None = None
    events: str | None = None
    overlay: str | None = None
    summary: str | None = None


@dataclass
class PipelineConfig:
    frame_width: float = 1920.0
    frame_height: float = 1080.0
    confidence_threshold: float = 0.5
    tracker: TrackerConfig = field(default_factory=TrackerConfig)
    proximity: ProximityConfig = field(default_factory=ProximityConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        if not (self.frame_width > 0 and self.frame_height > 0):
            raise ParameterError("frame dimensions must be positive")
        if not (0.0 <= self.confidence_threshold <= 1.0):
            raise ParameterError("confidence_threshold must lie in [0, 1]")


def _build(cls, data, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where or 'config'} must be a JSON object")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        names = ", ".join(f"{where}.{k}" if where else k for k in unknown)
        raise ConfigError(f"unknown config key(s): {names}")
    kwargs = {}
    for key, value in data.items():
        path = f"{where}.{key}" if where else key
        nested = _NESTED.get((cls, key))
        if nested is not None:
            kwargs[key] = _build(nested, value, path)
        elif key == "axis_scales":
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    try:
        return cls(**kwargs)
    except (ParameterError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {where or 'config'}: {exc}") from exc


_NESTED = {
    (PipelineConfig, "tracker"): TrackerConfig,
    (PipelineConfig, "proximity"): ProximityConfig,
    (PipelineConfig, "output"): OutputConfig,
    (TrackerConfig, "noise"): NoiseModel,
}


def config_from_dict(data: dict) -> PipelineConfig:
    return _build(PipelineConfig, data, "")


def load_config(path: str | os.PathLike | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)
