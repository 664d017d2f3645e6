from collections import deque
from typing import Any, Deque, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import attr
import numpy as np

from ..fxp import DEFAULT_LEDGER, ConfigurationError, FxReal, WidthLedger
from ..kernels.prng import DEFAULT_SEED, XorshiftPair, iter_words


SUPPORTED_DIM = 16
MAX_JAMMER_ANTENNAS = 2
DEFAULT_RING_CAPACITY = 1024
DEFAULT_SEQUENCE_SEED = 0x5EED5EED
BACKENDS = ("float", "fixed")
SUBSPACE_METHODS = ("power", "eigh")


def _check_dim(instance, attribute, value: int) -> None:
    if value != SUPPORTED_DIM:
        raise ConfigurationError(f"{attribute.name} must be {SUPPORTED_DIM}, got {value}")


def _check_choice(choices: Sequence[str]):
    def check(instance, attribute, value: str) -> None:
        if value not in choices:
            raise ConfigurationError(f"{attribute.name} must be one of {', '.join(choices)}, got {value!r}")

    return check


def _check_non_negative(instance, attribute, value) -> None:
    if value is not None and value < 0:
        raise ConfigurationError(f"{attribute.name} must be non-negative, got {value}")


def _to_ledger(value: Union[WidthLedger, Mapping[str, Any], None]) -> WidthLedger:
    if value is None:
        return DEFAULT_LEDGER
    if isinstance(value, WidthLedger):
        return value
    return WidthLedger.from_dict(value)


@attr.s(frozen=True, slots=True)
class SyncSequence:
    symbols: Tuple[int, ...] = attr.ib(converter=lambda s: tuple(int(x) for x in s))

    @symbols.validator
    def _check_symbols(self, attribute, value):
        if any(x not in (1, -1) for x in value):
            raise ConfigurationError("synchronization symbols must be +1 or -1")

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def energy(self) -> int:
        return len(self.symbols)

    def as_array(self) -> np.ndarray:
        return np.array(self.symbols, dtype=np.int64)

    @classmethod
    def from_seed(cls, seed: int = DEFAULT_SEQUENCE_SEED, length: int = SUPPORTED_DIM) -> "SyncSequence":
        words = iter_words(seed)
        return cls(1 if next(words) >> 31 else -1 for _ in range(length))

    @classmethod
    def parse(cls, text: str) -> "SyncSequence":
        tokens = text.replace(",", " ").split()
        try:
            return cls(int(tok) for tok in tokens)
        except ValueError:
            raise ConfigurationError(f"cannot parse synchronization sequence {text!r}")

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.symbols)


@attr.s(frozen=True, slots=True)
class DetectorConfig:
    B: int = attr.ib(default=SUPPORTED_DIM, validator=_check_dim)
    K: int = attr.ib(default=SUPPORTED_DIM, validator=_check_dim)
    i_max: int = attr.ib(default=MAX_JAMMER_ANTENNAS)
    t_max: int = attr.ib(default=2)
    tau: float = attr.ib(default=8.0, converter=float, validator=_check_non_negative)
    ell_max: Optional[int] = attr.ib(default=None, validator=_check_non_negative)
    backend: str = attr.ib(default="float", validator=_check_choice(BACKENDS))
    prng_seed: XorshiftPair = attr.ib(default=DEFAULT_SEED, converter=XorshiftPair.from_value)
    formats: WidthLedger = attr.ib(default=DEFAULT_LEDGER, converter=_to_ledger)
    ring_capacity: int = attr.ib(default=DEFAULT_RING_CAPACITY)
    subspace: str = attr.ib(default="power", validator=_check_choice(SUBSPACE_METHODS))
    agc_rms: Optional[float] = attr.ib(default=1.0)

    @i_max.validator
    def _check_i_max(self, attribute, value):
        if not 0 <= value <= MAX_JAMMER_ANTENNAS or value >= self.B:
            raise ConfigurationError(f"i_max must be within [0, {MAX_JAMMER_ANTENNAS}], got {value}")

    @t_max.validator
    def _check_t_max(self, attribute, value):
        if value < 1:
            raise ConfigurationError(f"t_max must be at least 1, got {value}")

    @ring_capacity.validator
    def _check_ring(self, attribute, value):
        if value < self.K + 1:
            raise ConfigurationError(f"ring_capacity must hold at least K + 1 = {self.K + 1} samples")

    def __attrs_post_init__(self):
        if self.subspace == "eigh" and self.backend != "float":
            raise ConfigurationError("exact eigendecomposition is only available on the float backend")

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "DetectorConfig":
        unknown = set(values) - {a.name for a in attr.fields(cls)}
        if unknown:
            raise ConfigurationError(f"Unknown detector option(s): {', '.join(sorted(unknown))}")
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        values = attr.asdict(self, recurse=False)
        values["prng_seed"] = [self.prng_seed.s1, self.prng_seed.s2]
        values["formats"] = self.formats.to_dict()
        return values


Sample = Any  # backend-native receive vector


@attr.s(slots=True)
class WindowState:
    """Sliding detector state: recent receive vectors and the Gram matrix of the current window."""

    ring: Deque[Sample] = attr.ib()
    phi: Any = attr.ib()
    ell: int = attr.ib(default=0)
    pushed: int = attr.ib(default=0)

    @classmethod
    def empty(cls, capacity: int) -> "WindowState":
        return cls(ring=deque(maxlen=capacity), phi=None)

    @property
    def first(self) -> int:
        return self.pushed - len(self.ring)

    def push(self, y: Sample) -> None:
        self.ring.append(y)
        self.pushed += 1

    def sample(self, k: int) -> Sample:
        if not self.first <= k < self.pushed:
            raise IndexError(f"sample {k} is not held in the ring")
        return self.ring[k - self.first]

    def window(self, ell: int, K: int) -> List[Sample]:
        return [self.sample(ell + k) for k in range(K)]


@attr.s(frozen=True, slots=True)
class SubspaceEstimate:
    vectors: Tuple[Any, ...] = attr.ib(converter=tuple)  # normalized a_i
    raw: Tuple[Any, ...] = attr.ib(converter=tuple)  # last unnormalized a_i' = Lambda a_i
    active: Tuple[bool, ...] = attr.ib(converter=tuple)
    b_tilde: Any = attr.ib(default=0.0)

    @property
    def a1(self):
        return self.vectors[0]

    @property
    def a2(self):
        return self.vectors[1]

    @property
    def a1_raw(self):
        return self.raw[0]

    @property
    def a2_raw(self):
        return self.raw[1]

    @property
    def dimension(self) -> int:
        return sum(self.active)


@attr.s(frozen=True, slots=True)
class ScoreTerms:
    c: Any = attr.ib()
    v: Any = attr.ib()
    W: Any = attr.ib()
    numerator: Union[float, FxReal] = attr.ib()
    denominator: Union[float, FxReal] = attr.ib()

    @property
    def score(self) -> float:
        return score_ratio(self.numerator, self.denominator)


class IndexScore(NamedTuple):
    ell: int
    numerator: Union[float, FxReal]
    denominator: Union[float, FxReal]

    @property
    def score(self) -> float:
        return score_ratio(self.numerator, self.denominator)


def score_ratio(numerator: Union[float, FxReal], denominator: Union[float, FxReal]) -> float:
    d = float(denominator)
    return float(numerator) / d if d > 0 else 0.0


@attr.s(frozen=True, slots=True)
class Decision:
    declared: Optional[int] = attr.ib()
    scores: Tuple[IndexScore, ...] = attr.ib(converter=tuple, factory=tuple)

    @property
    def is_miss(self) -> bool:
        return self.declared is None
