import math
from typing import NamedTuple, Optional, Tuple

import numpy as np

from ..detector.structs import SyncSequence
from ..fxp import ConfigurationError
from .jammers import complex_gaussian, get_jammer
from .structs import Calibration, ChannelRealization, JammerSpec, PowerReport, TrialScenario


def draw_channel(seed, B: int = 16, I: int = 2) -> ChannelRealization:  # noqa: E741
    """i.i.d. Rayleigh fading: unit-variance circular complex Gaussian entries for h and J."""
    rng = np.random.default_rng(seed)
    return ChannelRealization(complex_gaussian(rng, B), complex_gaussian(rng, (B, I)))


def calibrate(
    snr_db: float, rho_db: float, channel: Optional[ChannelRealization] = None, per_realization: bool = False
) -> Calibration:
    """Scales for SNR = E||hs||^2 / (B N0) and rho = E||Jw||^2 / E||hs||^2.

    Expectations are over the fading ensemble (E||h||^2 = B) unless per_realization is set,
    in which case the drawn channel's own powers are used.
    """
    if math.isnan(snr_db) or math.isnan(rho_db) or snr_db == -math.inf or rho_db == math.inf:
        raise ConfigurationError(f"cannot calibrate SNR {snr_db} dB, rho {rho_db} dB")
    snr, rho = 10.0 ** (snr_db / 10.0), 10.0 ** (rho_db / 10.0)
    if not per_realization:
        return Calibration(1.0, math.sqrt(rho), 1.0 / snr)
    if channel is None:
        raise ConfigurationError("per-realization calibration needs a channel")
    h_power = float(np.sum(np.abs(channel.h) ** 2))
    jammer_scale = 0.0
    if channel.I and rho > 0:
        j_power = float(np.sum(np.abs(channel.J) ** 2)) / channel.I
        jammer_scale = math.sqrt(rho * h_power / j_power)
    return Calibration(1.0, jammer_scale, h_power / (channel.B * snr))


def sequence_signal(sequence: SyncSequence, L: int, length: int) -> np.ndarray:
    """s[k]: zero before L, the sequence on [L, L + K), zero afterwards."""
    s = np.zeros(length)
    s[L : L + len(sequence)] = sequence.as_array()
    return s


def _stream_rngs(scenario: TrialScenario) -> Tuple[np.random.Generator, np.random.Generator]:
    jammer_seq, noise_seq = np.random.SeedSequence(scenario.seed).spawn(2)
    return np.random.default_rng(jammer_seq), np.random.default_rng(noise_seq)


def jammer_stream(spec: JammerSpec, sequence: SyncSequence, scenario: TrialScenario) -> np.ndarray:
    jammer_rng, _ = _stream_rngs(scenario)
    return get_jammer(spec).waveform(jammer_rng, sequence, scenario)


def jammer_waveform(spec: JammerSpec, sequence: SyncSequence, scenario: TrialScenario, k: int) -> np.ndarray:
    return jammer_stream(spec, sequence, scenario)[k]


class SynthComponents(NamedTuple):
    signal: np.ndarray
    jammer: np.ndarray
    noise: np.ndarray

    @property
    def receive(self) -> np.ndarray:
        return self.signal + self.jammer + self.noise


def synth_components(
    scenario: TrialScenario,
    channel: ChannelRealization,
    spec: JammerSpec,
    sequence: SyncSequence,
    per_realization: bool = False,
) -> SynthComponents:
    if spec.I != channel.I and not spec.silent:
        raise ConfigurationError(f"jammer has {spec.I} antennas but the channel has {channel.I}")
    cal = calibrate(scenario.snr_db, spec.rho_db, channel, per_realization)
    jammer_rng, noise_rng = _stream_rngs(scenario)
    signal = cal.signal_scale * np.outer(sequence_signal(sequence, scenario.L, scenario.length), channel.h)
    if spec.silent:
        jammer = np.zeros_like(signal)
    else:
        w = get_jammer(spec).waveform(jammer_rng, sequence, scenario)
        jammer = cal.jammer_scale * (w @ channel.J.T)
    noise = complex_gaussian(noise_rng, signal.shape, cal.N0)
    return SynthComponents(signal, jammer, noise)


def synth_receive(
    scenario: TrialScenario, channel: ChannelRealization, spec: JammerSpec, sequence: SyncSequence
) -> np.ndarray:
    """length x B receive stream y[k] = h s[k] + J w[k] + n[k]."""
    return synth_components(scenario, channel, spec, sequence).receive


def _db(ratio: float) -> float:
    return 10.0 * math.log10(ratio) if ratio > 0 else -math.inf


def measure_powers(components: SynthComponents, scenario: TrialScenario) -> PowerReport:
    """Empirical SNR and rho; jammer power is averaged over its active samples only."""
    rows = components.signal[scenario.L : scenario.L + scenario.K]
    signal_power = float(np.mean(np.sum(np.abs(rows) ** 2, axis=1)))
    jammer_rows = np.sum(np.abs(components.jammer) ** 2, axis=1)
    active = jammer_rows > 0
    jammer_power = float(np.mean(jammer_rows[active])) if active.any() else 0.0
    noise_power = float(np.mean(np.abs(components.noise) ** 2))
    B = components.signal.shape[1]
    snr = signal_power / (B * noise_power) if noise_power > 0 else math.inf
    return PowerReport(_db(snr) if snr != math.inf else math.inf, _db(jammer_power / signal_power))
