import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..fxp import ConfigurationError
from ..kernels.prng import XorshiftPair, reseed_chain
from .backends import Backend, get_backend
from .structs import Decision, DetectorConfig, IndexScore, Sample, ScoreTerms, SyncSequence, WindowState


logger = logging.getLogger(__name__)


class Detector:
    """Streaming frame-synchronization detector with jammer-subspace mitigation.

    One instance owns one stream at a time; run/trace rebuild the window state on each call.
    With mitigate=False the subspace is never estimated and the score reduces to plain correlation.
    """

    def __init__(
        self,
        config: Optional[DetectorConfig] = None,
        sequence: Optional[SyncSequence] = None,
        mitigate: bool = True,
    ):
        self.config = config or DetectorConfig()
        self.sequence = sequence or SyncSequence.from_seed(length=self.config.K)
        self.mitigate = mitigate
        self.backend: Backend = get_backend(self.config, self.sequence)

    def phi_init(self, window: Sequence[Sample]) -> WindowState:
        K = self.config.K
        if len(window) != K:
            raise ConfigurationError(f"initial window needs exactly {K} receive vectors, got {len(window)}")
        state = WindowState.empty(self.config.ring_capacity)
        for y in window:
            state.push(y)
        state.phi = self.backend.phi_init(window)
        return state

    def evaluate(self, state: WindowState, prng: XorshiftPair) -> Tuple[ScoreTerms, XorshiftPair]:
        backend = self.backend
        c = backend.correlate(state.window(state.ell, self.config.K))
        if self.mitigate and self.config.i_max > 0:
            lam = backend.lambda_build(state.phi, c)
            subspace, prng = backend.power_subspace(lam, prng)
        else:
            subspace = backend.empty_subspace()
        return backend.score_terms(subspace, state.phi, c), prng

    def slide(self, state: WindowState, y_in: Sample) -> WindowState:
        y_out = state.sample(state.ell)
        state.push(y_in)
        state.phi = self.backend.phi_slide(state.phi, y_out, y_in)
        state.ell += 1
        return state

    def step(
        self, state: WindowState, prng: XorshiftPair, y_in: Optional[Sample], tau: Optional[float]
    ) -> Tuple[IndexScore, bool, XorshiftPair]:
        """Evaluates index state.ell; slides the window onto y_in unless the index is accepted.

        tau=None never accepts. The returned PRNG state is already reseeded for the next index.
        """
        terms, prng = self.evaluate(state, prng)
        score = IndexScore(state.ell, terms.numerator, terms.denominator)
        accepted = tau is not None and self.backend.decide(terms, tau)
        if not accepted and y_in is not None:
            self.slide(state, y_in)
        return score, accepted, reseed_chain(prng)

    def _walk(self, stream: np.ndarray, tau: Optional[float]) -> Iterator[Tuple[IndexScore, bool]]:
        samples = self.backend.ingest(stream)
        K = self.config.K
        if len(samples) < K:
            raise ConfigurationError(f"stream holds {len(samples)} samples, fewer than K = {K}")
        last = len(samples) - K
        if self.config.ell_max is not None:
            last = min(last, self.config.ell_max)
        state = self.phi_init(samples[:K])
        prng = self.config.prng_seed
        for ell in range(last + 1):
            y_in = samples[ell + K] if ell < last else None
            score, accepted, prng = self.step(state, prng, y_in, tau)
            logger.debug("l=%d N=%.6g D=%.6g", ell, float(score.numerator), float(score.denominator))
            yield score, accepted
            if accepted:
                return

    def run(self, stream: np.ndarray, tau: Optional[float] = None) -> Decision:
        tau = self.config.tau if tau is None else tau
        scores: List[IndexScore] = []
        for score, accepted in self._walk(stream, tau):
            scores.append(score)
            if accepted:
                logger.info("Declared synchronization at index %d (score %.3f)", score.ell, score.score)
                return Decision(score.ell, scores)
        logger.info("No synchronization declared within %d indices", len(scores))
        return Decision(None, scores)

    def trace(self, stream: np.ndarray) -> List[IndexScore]:
        return [score for score, _ in self._walk(stream, None)]

    def first_acceptance(self, scores: Sequence[IndexScore], tau: float) -> Optional[int]:
        for score in scores:
            if self.backend.decide(score, tau):
                return score.ell
        return None


def baseline_unmitigated(
    stream: np.ndarray, sequence: SyncSequence, tau: float, config: Optional[DetectorConfig] = None
) -> Decision:
    return Detector(config, sequence, mitigate=False).run(stream, tau)
