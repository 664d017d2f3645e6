from .config import ExperimentConfig, ExperimentIOError, ScenarioTemplate, load_config
from .report import SerPoint, emit_csv, read_csv, run_sweep
from .selftest import CheckResult, run_selftest
from .trials import TrialOutcome, run_trial, sweep_outcomes, trial_decisions, trial_setup


__all__ = (
    "CheckResult",
    "ExperimentConfig",
    "ExperimentIOError",
    "ScenarioTemplate",
    "SerPoint",
    "TrialOutcome",
    "emit_csv",
    "load_config",
    "read_csv",
    "run_selftest",
    "run_sweep",
    "run_trial",
    "sweep_outcomes",
    "trial_decisions",
    "trial_setup",
)
