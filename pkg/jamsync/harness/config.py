import json
from os import PathLike
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import attr

from .. import settings
from ..airlink.structs import JammerSpec
from ..detector.structs import DEFAULT_SEQUENCE_SEED, DetectorConfig, SyncSequence
from ..fxp import ConfigurationError


METHODS = ("jass", "unmitigated")


class ExperimentIOError(OSError):
    pass


def _reject_unknown(cls, values: Mapping[str, Any], section: str) -> None:
    unknown = set(values) - {a.name for a in attr.fields(cls)}
    if unknown:
        raise ConfigurationError(f"Unknown {section} option(s): {', '.join(sorted(unknown))}")


@attr.s(frozen=True, slots=True)
class ScenarioTemplate:
    """Per-trial scenario ranges: the true delay L is uniform on [margin, length - K - margin]."""

    snr_db: float = attr.ib(default=5.0, converter=float)
    length: int = attr.ib(default=64)
    margin: int = attr.ib(default=8)
    K: int = attr.ib(default=16)

    def __attrs_post_init__(self):
        if self.margin < 1 or self.l_low > self.l_high:
            raise ConfigurationError(
                f"stream length {self.length} leaves no room for L with margin {self.margin} and K = {self.K}"
            )

    @property
    def l_low(self) -> int:
        return self.margin

    @property
    def l_high(self) -> int:
        return self.length - self.K - self.margin

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "ScenarioTemplate":
        _reject_unknown(cls, values, "scenario")
        return cls(**values)


def _tau_grid(values) -> Tuple[float, ...]:
    return tuple(float(t) for t in values)


def _to_detector(value: Union[DetectorConfig, Mapping[str, Any]]) -> DetectorConfig:
    if isinstance(value, DetectorConfig):
        return value
    return DetectorConfig.from_dict(value)


def _to_jammer(value: Union[JammerSpec, Mapping[str, Any]]) -> JammerSpec:
    if isinstance(value, JammerSpec):
        return value
    return JammerSpec.from_dict(value)


def _to_scenario(value: Union[ScenarioTemplate, Mapping[str, Any]]) -> ScenarioTemplate:
    if isinstance(value, ScenarioTemplate):
        return value
    return ScenarioTemplate.from_dict(value)


DEFAULT_TAU_GRID = tuple(float(t) for t in range(1, 17))


@attr.s(frozen=True, slots=True)
class ExperimentConfig:
    detector: DetectorConfig = attr.ib(factory=DetectorConfig, converter=_to_detector)
    scenario: ScenarioTemplate = attr.ib(factory=ScenarioTemplate, converter=_to_scenario)
    jammer: JammerSpec = attr.ib(factory=JammerSpec, converter=_to_jammer)
    trials: int = attr.ib(default=2000)
    tau_grid: Tuple[float, ...] = attr.ib(default=DEFAULT_TAU_GRID, converter=_tau_grid)
    master_seed: int = attr.ib(default=settings.MASTER_SEED)
    method: str = attr.ib(default="jass")
    sequence: Optional[Tuple[int, ...]] = attr.ib(default=None, converter=attr.converters.optional(tuple))

    @trials.validator
    def _check_trials(self, attribute, value):
        if value < 1:
            raise ConfigurationError(f"trials must be at least 1, got {value}")

    @tau_grid.validator
    def _check_grid(self, attribute, value):
        if not value:
            raise ConfigurationError("tau_grid must not be empty")
        if value[0] < 0 or any(b <= a for a, b in zip(value, value[1:])):
            raise ConfigurationError("tau_grid must be non-negative and strictly increasing")

    @method.validator
    def _check_method(self, attribute, value):
        if value not in METHODS:
            raise ConfigurationError(f"method must be one of {', '.join(METHODS)}, got {value!r}")

    def __attrs_post_init__(self):
        if self.scenario.K != self.detector.K:
            raise ConfigurationError(f"scenario K = {self.scenario.K} differs from detector K = {self.detector.K}")

    @property
    def ell_max(self) -> int:
        if self.detector.ell_max is not None:
            return self.detector.ell_max
        return self.scenario.length - self.detector.K - 1

    def detector_config(self) -> DetectorConfig:
        return attr.evolve(self.detector, ell_max=self.ell_max)

    def sync_sequence(self) -> SyncSequence:
        if self.sequence is None:
            return SyncSequence.from_seed(DEFAULT_SEQUENCE_SEED, self.detector.K)
        return SyncSequence(self.sequence)

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "ExperimentConfig":
        values = dict(values)
        formats = values.pop("formats", None)
        _reject_unknown(cls, values, "experiment")
        if formats is not None:
            detector = dict(values.get("detector", {}))
            detector["formats"] = formats
            values["detector"] = detector
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "detector": self.detector.to_dict(),
            "scenario": attr.asdict(self.scenario),
            "jammer": attr.asdict(self.jammer),
            "trials": self.trials,
            "tau_grid": list(self.tau_grid),
            "master_seed": self.master_seed,
            "method": self.method,
            "sequence": None if self.sequence is None else list(self.sequence),
        }


def load_config(path: Union[str, "PathLike[str]"]) -> ExperimentConfig:
    try:
        with open(path) as f:
            values = json.load(f)
    except OSError as e:
        raise ExperimentIOError(f"cannot read experiment config {path}: {e}")
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path}: invalid JSON ({e})")
    if not isinstance(values, dict):
        raise ConfigurationError(f"{path}: experiment config must be a JSON object")
    return ExperimentConfig.from_dict(values)
