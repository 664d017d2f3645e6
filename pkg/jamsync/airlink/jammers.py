"""Jammer behaviours. Every waveform carries unit total power on its active samples."""
from abc import ABC, abstractmethod
from typing import Dict, Type

import numpy as np

from ..detector.structs import SyncSequence
from .structs import JammerSpec, TrialScenario


def complex_gaussian(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * np.sqrt(variance / 2)


class Jammer(ABC):
    short_name = "jammer"

    def __init__(self, spec: JammerSpec):
        self.spec = spec

    @abstractmethod
    def waveform(
        self, rng: np.random.Generator, sequence: SyncSequence, scenario: TrialScenario
    ) -> np.ndarray:
        """length x I transmit samples w[k]."""


class Silent(Jammer):
    short_name = "none"

    def waveform(self, rng, sequence, scenario):
        return np.zeros((scenario.length, self.spec.I), dtype=np.complex128)


class Barrage(Jammer):
    short_name = "barrage"

    def waveform(self, rng, sequence, scenario):
        return complex_gaussian(rng, (scenario.length, self.spec.I), 1.0 / self.spec.I)


class Erratic(Jammer):
    """Gaussian bursts: each sample is active with probability duty."""

    short_name = "erratic"

    def waveform(self, rng, sequence, scenario):
        active = rng.random(scenario.length) < self.spec.duty
        w = complex_gaussian(rng, (scenario.length, self.spec.I), 1.0 / self.spec.I)
        return w * active[:, None]


class AntennaSwitching(Jammer):
    short_name = "antenna-switching"

    def waveform(self, rng, sequence, scenario):
        n, I = scenario.length, self.spec.I  # noqa: E741
        switches = rng.random(n) < self.spec.switch_prob
        antenna = (rng.integers(I) + np.cumsum(switches)) % I
        w = np.zeros((n, I), dtype=np.complex128)
        w[np.arange(n), antenna] = complex_gaussian(rng, n)
        return w


class DelayedSpoofing(Jammer):
    """Replays the synchronization sequence spoof_delay samples late on every antenna."""

    short_name = "delayed-spoofing"

    def waveform(self, rng, sequence, scenario):
        start = scenario.L + self.spec.spoof_delay
        # causal: w[k] only uses symbol k - start <= k - L - 1
        s = np.zeros(scenario.length, dtype=np.complex128)
        stop = min(start + len(sequence), scenario.length)
        if start < stop:
            s[start:stop] = sequence.as_array()[: stop - start]
        return np.repeat(s[:, None], self.spec.I, axis=1) / np.sqrt(self.spec.I)


def get_jammer_map() -> Dict[str, Type[Jammer]]:
    return {
        cls.short_name: cls  # type: ignore
        for cls in (Silent, Barrage, Erratic, AntennaSwitching, DelayedSpoofing)
    }


def get_jammer(spec: JammerSpec) -> Jammer:
    return get_jammer_map()[spec.kind](spec)
