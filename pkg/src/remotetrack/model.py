"""Problem instance: binary Markov source, two sensors, lossy channels, distortion."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np


class SourceState(enum.IntEnum):
    STATE1 = 1
    STATE2 = 2


class Action(enum.IntEnum):
    IDLE = 0
    SENSOR1 = 1
    SENSOR2 = 2

    @property
    def sensor(self) -> int:
        """Zero-based sensor row in ``detect``/``channel``; undefined for IDLE."""
        if self is Action.IDLE:
            raise ValueError("IDLE has no sensor")
        return int(self) - 1


class Observation(enum.Enum):
    OBS1 = "1"
    OBS2 = "2"
    FD = "FD"
    FR = "FR"

    @property
    def state(self) -> SourceState | None:
        if self is Observation.OBS1:
            return SourceState.STATE1
        if self is Observation.OBS2:
            return SourceState.STATE2
        return None

    @classmethod
    def of_state(cls, state: SourceState) -> "Observation":
        return cls.OBS1 if state == SourceState.STATE1 else cls.OBS2


class ConfigError(ValueError):
    """Raised when a model configuration violates its invariants."""


D1 = ((0.0, 1.0), (1.0, 0.0))
D2 = ((0.0, 2.0), (1.0, 0.0))


@dataclass(frozen=True)
class ModelConfig:
    """Model parameters.

    ``detect[m][i]`` is the probability that sensor ``m+1`` detects state
    ``i+1``; ``distortion[i][j]`` is the cost of estimating ``j+1`` when the
    source is in ``i+1``.
    """

    p: float
    detect: tuple[tuple[float, float], tuple[float, float]]
    channel: tuple[float, float]
    alpha: float
    distortion: tuple[tuple[float, float], tuple[float, float]] = D1

    def __post_init__(self):
        # normalise nested sequences / arrays to hashable float tuples
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "detect", _as_2x2(self.detect, "detect"))
        object.__setattr__(self, "distortion", _as_2x2(self.distortion, "distortion"))
        ch = tuple(float(v) for v in np.asarray(self.channel, dtype=float).ravel())
        if len(ch) != 2:
            raise ConfigError(f"channel must have 2 entries, got {len(ch)}")
        object.__setattr__(self, "channel", ch)

    def replace(self, **changes) -> "ModelConfig":
        data = self.to_dict()
        data.update(changes)
        return ModelConfig(**data)

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "detect": [list(r) for r in self.detect],
            "channel": list(self.channel),
            "alpha": self.alpha,
            "distortion": [list(r) for r in self.distortion],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelConfig":
        missing = {"p", "detect", "channel", "alpha", "distortion"} - set(data)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        return cls(
            p=data["p"],
            detect=data["detect"],
            channel=data["channel"],
            alpha=data["alpha"],
            distortion=data["distortion"],
        )


@dataclass(frozen=True)
class ValidatedModel(ModelConfig):
    """A config that passed :func:`validate`, with its source transition matrix."""

    transition: np.ndarray = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return ModelConfig.to_dict(self)

    def replace(self, **changes) -> "ValidatedModel":
        return validate(ModelConfig.replace(self, **changes))


def _as_2x2(value, name):
    arr = np.asarray(value, dtype=float)
    if arr.shape != (2, 2):
        raise ConfigError(f"{name} must be 2x2, got shape {arr.shape}")
    return tuple(tuple(float(v) for v in row) for row in arr)


def _check_prob(value: float, name: str) -> None:
    if not np.isfinite(value) or not 0.0 <= value <= 1.0:
        raise ConfigError(f"{name}={value} is not a probability in [0, 1]")


def validate(config: ModelConfig) -> ValidatedModel:
    """Check all invariants and attach the symmetric source transition matrix."""
    if isinstance(config, ValidatedModel):
        return config
    _check_prob(config.p, "p")
    if config.p in (0.0, 1.0):
        raise ConfigError("p must lie strictly inside (0, 1)")
    for m in range(2):
        for i in range(2):
            _check_prob(config.detect[m][i], f"detect[{m}][{i}]")
        _check_prob(config.channel[m], f"channel[{m}]")
    if not np.isfinite(config.alpha) or config.alpha < 0:
        raise ConfigError(f"alpha={config.alpha} must be finite and >= 0")
    d = np.asarray(config.distortion)
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise ConfigError("distortion entries must be finite and >= 0")
    if d[0, 0] != 0 or d[1, 1] != 0:
        raise ConfigError("distortion diagonal must be zero")
    p = config.p
    transition = np.array([[p, 1 - p], [1 - p, p]])
    transition.setflags(write=False)
    return ValidatedModel(
        p=config.p,
        detect=config.detect,
        channel=config.channel,
        alpha=config.alpha,
        distortion=config.distortion,
        transition=transition,
    )


def load_config(path: str | Path) -> ValidatedModel:
    with open(path) as fh:
        return validate(ModelConfig.from_dict(json.load(fh)))


def save_config(config: ModelConfig, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(config.to_dict(), fh, indent=2)


def _expected_distortions(b: float, distortion) -> tuple[float, float]:
    d = distortion
    return (b * d[0][0] + (1 - b) * d[1][0], b * d[0][1] + (1 - b) * d[1][1])


def md_estimate(b: float, distortion) -> SourceState:
    """Minimum expected distortion estimate; ties go to STATE1."""
    c1, c2 = _expected_distortions(b, distortion)
    return SourceState.STATE1 if c1 <= c2 else SourceState.STATE2


def expected_distortion(b: float, distortion) -> float:
    """Expected distortion of the MD estimate under belief ``b``."""
    c1, c2 = _expected_distortions(b, distortion)
    return c1 if c1 <= c2 else c2


def expected_stage_cost(b: float, a: Action, config: ModelConfig) -> float:
    return expected_distortion(b, config.distortion) + (
        config.alpha if Action(a) != Action.IDLE else 0.0
    )
