import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, NamedTuple, Optional, Sequence, Tuple

import attr
import numpy as np

from .. import settings
from ..airlink.structs import TrialScenario
from ..airlink.synth import draw_channel, synth_receive
from ..detector.jass import Detector
from .config import ExperimentConfig


logger = logging.getLogger(__name__)

SUCCESS = "success"
FALSE_ALARM = "false-alarm"
MISS = "miss"


@attr.s(frozen=True, slots=True)
class TrialOutcome:
    L: int = attr.ib()
    declared: Optional[int] = attr.ib()

    @property
    def classification(self) -> str:
        if self.declared is None:
            return MISS
        return SUCCESS if self.declared == self.L else FALSE_ALARM


class TrialSetup(NamedTuple):
    scenario: TrialScenario
    stream: np.ndarray


def trial_setup(config: ExperimentConfig, index: int) -> TrialSetup:
    """Synthesizes trial `index`; its seeds depend only on (master_seed, index)."""
    channel_seq, stream_seq, delay_seq = np.random.SeedSequence([config.master_seed, index]).spawn(3)
    template = config.scenario
    L = int(np.random.default_rng(delay_seq).integers(template.l_low, template.l_high + 1))
    scenario = TrialScenario(
        L=L,
        snr_db=template.snr_db,
        seed=int(stream_seq.generate_state(1)[0]),
        length=template.length,
        K=config.detector.K,
    )
    channel = draw_channel(channel_seq, config.detector.B, config.jammer.I)
    stream = synth_receive(scenario, channel, config.jammer, config.sync_sequence())
    return TrialSetup(scenario, stream)


def make_detector(config: ExperimentConfig) -> Detector:
    return Detector(config.detector_config(), config.sync_sequence(), mitigate=config.method == "jass")


def run_trial(config: ExperimentConfig, index: int, tau: Optional[float] = None) -> TrialOutcome:
    setup = trial_setup(config, index)
    decision = make_detector(config).run(setup.stream, tau)
    return TrialOutcome(setup.scenario.L, decision.declared)


def trial_decisions(config: ExperimentConfig, index: int) -> Tuple[int, List[Optional[int]]]:
    """One (N, D) trace per trial; the declaration for every tau of the grid is read off it."""
    setup = trial_setup(config, index)
    detector = make_detector(config)
    scores = detector.trace(setup.stream)
    return setup.scenario.L, [detector.first_acceptance(scores, tau) for tau in config.tau_grid]


def _trial_job(args: Tuple[ExperimentConfig, int]) -> Tuple[int, List[Optional[int]]]:
    return trial_decisions(*args)


def sweep_outcomes(config: ExperimentConfig, workers: Optional[int] = None) -> List[List[TrialOutcome]]:
    workers = settings.WORKERS if workers is None else workers
    jobs = [(config, index) for index in range(config.trials)]
    results: Sequence[Tuple[int, List[Optional[int]]]]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_job, jobs, chunksize=max(1, config.trials // (4 * workers))))
    else:
        results = []
        for index, job in enumerate(jobs):
            results.append(_trial_job(job))
            if (index + 1) % 100 == 0:
                logger.info("%d / %d trials done", index + 1, config.trials)
    return [[TrialOutcome(L, declared[t]) for L, declared in results] for t in range(len(config.tau_grid))]
