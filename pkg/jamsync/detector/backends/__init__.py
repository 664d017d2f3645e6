from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence, Tuple, Type, Union

import numpy as np

from ...fxp import ConfigurationError
from ...kernels.prng import XorshiftPair
from ..structs import DetectorConfig, ScoreTerms, Sample, SubspaceEstimate, SyncSequence


# 1 - |b~|^2 below this means a1 and a2 span the same direction; a2 is dropped
COLLINEAR_GAP_LOG2 = 16


class Backend(ABC):
    """Arithmetic of one detector realization; every stage shares the same call shape across backends."""

    short_name = "backend"

    def __init__(self, config: DetectorConfig, sequence: SyncSequence):
        if len(sequence) != config.K:
            raise ConfigurationError(f"synchronization sequence has {len(sequence)} symbols, expected {config.K}")
        self.config = config
        self.sequence = sequence

    @abstractmethod
    def ingest(self, stream: np.ndarray) -> List[Sample]:
        ...

    @abstractmethod
    def phi_init(self, window: Sequence[Sample]) -> Any:
        ...

    @abstractmethod
    def correlate(self, window: Sequence[Sample]) -> Any:
        ...

    @abstractmethod
    def lambda_build(self, phi: Any, c: Any) -> Any:
        ...

    @abstractmethod
    def power_subspace(self, lam: Any, prng: XorshiftPair) -> Tuple[SubspaceEstimate, XorshiftPair]:
        ...

    @abstractmethod
    def empty_subspace(self) -> SubspaceEstimate:
        ...

    @abstractmethod
    def score_terms(self, subspace: SubspaceEstimate, phi: Any, c: Any) -> ScoreTerms:
        ...

    @abstractmethod
    def accepts(self, numerator: Any, denominator: Any, tau: float) -> bool:
        ...

    @abstractmethod
    def phi_slide(self, phi: Any, y_out: Sample, y_in: Sample) -> Any:
        ...

    def decide(self, terms: Union[ScoreTerms, Any], tau: float) -> bool:
        # D <= 0: nothing left in the window after projection, no evidence either way
        if float(terms.denominator) <= 0:
            return False
        return self.accepts(terms.numerator, terms.denominator, tau)


def get_backend_map() -> Dict[str, Type[Backend]]:
    from .fixed import FixedBackend
    from .floating import FloatBackend

    return {cls.short_name: cls for cls in (FloatBackend, FixedBackend)}  # type: ignore


def get_backend(config: DetectorConfig, sequence: SyncSequence) -> Backend:
    return get_backend_map()[config.backend](config, sequence)
