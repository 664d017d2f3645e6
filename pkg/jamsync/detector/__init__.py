from .backends import Backend, get_backend, get_backend_map
from .cycles import DEFAULT_SCHEDULE, CycleModel, ScheduleEntry, cycles_per_index, throughput
from .frontend import agc_gain
from .jass import Detector, baseline_unmitigated
from .structs import (
    Decision,
    DetectorConfig,
    IndexScore,
    ScoreTerms,
    SubspaceEstimate,
    SyncSequence,
    WindowState,
)
from .trace import write_trace_csv


__all__ = (
    "Backend",
    "CycleModel",
    "DEFAULT_SCHEDULE",
    "Decision",
    "Detector",
    "DetectorConfig",
    "IndexScore",
    "ScheduleEntry",
    "ScoreTerms",
    "SubspaceEstimate",
    "SyncSequence",
    "WindowState",
    "agc_gain",
    "baseline_unmitigated",
    "cycles_per_index",
    "get_backend",
    "get_backend_map",
    "throughput",
    "write_trace_csv",
)
