from .iq import IQFormatError, read_iq, write_iq
from .jammers import Jammer, get_jammer, get_jammer_map
from .structs import NO_JAMMER, Calibration, ChannelRealization, JammerSpec, PowerReport, TrialScenario
from .synth import (
    SynthComponents,
    calibrate,
    draw_channel,
    jammer_stream,
    jammer_waveform,
    measure_powers,
    sequence_signal,
    synth_components,
    synth_receive,
)


__all__ = (
    "Calibration",
    "ChannelRealization",
    "IQFormatError",
    "Jammer",
    "JammerSpec",
    "NO_JAMMER",
    "PowerReport",
    "SynthComponents",
    "TrialScenario",
    "calibrate",
    "draw_channel",
    "get_jammer",
    "get_jammer_map",
    "jammer_stream",
    "jammer_waveform",
    "measure_powers",
    "read_iq",
    "sequence_signal",
    "synth_components",
    "synth_receive",
    "write_iq",
)
