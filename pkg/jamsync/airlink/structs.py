import math
from typing import Any, Mapping, NamedTuple

import attr
import numpy as np

from ..fxp import ConfigurationError


JAMMER_KINDS = ("none", "barrage", "erratic", "antenna-switching", "delayed-spoofing")


@attr.s(frozen=True, slots=True, eq=False)
class ChannelRealization:
    h: np.ndarray = attr.ib()  # B, legitimate transmitter
    J: np.ndarray = attr.ib()  # B x I, jammer antennas

    @J.validator
    def _check_dims(self, attribute, value):
        if self.h.ndim != 1 or value.ndim != 2 or value.shape[0] != self.h.shape[0]:
            raise ConfigurationError(f"channel shapes do not match: h {self.h.shape}, J {value.shape}")

    @property
    def B(self) -> int:
        return self.h.shape[0]

    @property
    def I(self) -> int:  # noqa: E743
        return self.J.shape[1]


def _probability(instance, attribute, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ConfigurationError(f"{attribute.name} must be within [0, 1], got {value}")


@attr.s(frozen=True, slots=True)
class JammerSpec:
    kind: str = attr.ib(default="barrage")
    I: int = attr.ib(default=2)  # noqa: E741
    rho_db: float = attr.ib(default=30.0, converter=float)
    duty: float = attr.ib(default=0.5, converter=float, validator=_probability)
    switch_prob: float = attr.ib(default=0.1, converter=float, validator=_probability)
    spoof_delay: int = attr.ib(default=1)

    @kind.validator
    def _check_kind(self, attribute, value):
        if value not in JAMMER_KINDS:
            raise ConfigurationError(f"jammer kind must be one of {', '.join(JAMMER_KINDS)}, got {value!r}")

    @I.validator
    def _check_antennas(self, attribute, value):
        if value not in (0, 1, 2):
            raise ConfigurationError(f"jammer antenna count must be 0, 1 or 2, got {value}")
        if value == 0 and self.kind != "none":
            raise ConfigurationError(f"{self.kind} jammer needs at least one antenna")

    @spoof_delay.validator
    def _check_delay(self, attribute, value):
        if value < 1:
            raise ConfigurationError(f"spoof_delay must be at least 1, got {value}")

    @property
    def silent(self) -> bool:
        return self.kind == "none" or self.I == 0 or self.rho_db == -math.inf

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "JammerSpec":
        unknown = set(values) - {a.name for a in attr.fields(cls)}
        if unknown:
            raise ConfigurationError(f"Unknown jammer option(s): {', '.join(sorted(unknown))}")
        return cls(**values)


NO_JAMMER = JammerSpec(kind="none", I=0, rho_db=-math.inf)


@attr.s(frozen=True, slots=True)
class TrialScenario:
    L: int = attr.ib()
    snr_db: float = attr.ib(converter=float)
    seed: int = attr.ib()
    length: int = attr.ib(default=64)
    K: int = attr.ib(default=16)

    def __attrs_post_init__(self):
        if not 0 <= self.L <= self.length - self.K - 1:
            raise ConfigurationError(f"L = {self.L} outside [0, {self.length - self.K - 1}] for length {self.length}")

    @property
    def N0(self) -> float:
        return 10.0 ** (-self.snr_db / 10.0)


class Calibration(NamedTuple):
    signal_scale: float
    jammer_scale: float
    N0: float


class PowerReport(NamedTuple):
    snr_db: float
    rho_db: float
