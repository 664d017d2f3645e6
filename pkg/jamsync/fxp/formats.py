from enum import Enum
from typing import Any, Dict, Mapping, Union

import attr


class ConfigurationError(ValueError):
    pass


class Overflow(str, Enum):
    SATURATE = "saturate"
    WRAP = "wrap"


class Rounding(str, Enum):
    TRUNCATE = "truncate"  # toward negative infinity
    NEAREST_EVEN = "nearest-even"


def _check_total_bits(instance, attribute, value: int) -> None:
    if not 2 <= value <= 64:
        raise ConfigurationError(f"{attribute.name} must be within [2, 64], got {value}")


def _check_frac_bits(instance, attribute, value: int) -> None:
    if not 0 <= value < instance.total_bits:
        raise ConfigurationError(f"{attribute.name} must be within [0, {instance.total_bits}), got {value}")


@attr.s(frozen=True, slots=True)
class FxFormat:
    """Signed two's-complement Q-format: total_bits including the sign, frac_bits fractional."""

    total_bits: int = attr.ib(validator=_check_total_bits)
    frac_bits: int = attr.ib(validator=_check_frac_bits)
    overflow: Overflow = attr.ib(default=Overflow.SATURATE, converter=Overflow)
    rounding: Rounding = attr.ib(default=Rounding.TRUNCATE, converter=Rounding)

    @property
    def min_code(self) -> int:
        return -(1 << (self.total_bits - 1))

    @property
    def max_code(self) -> int:
        return (1 << (self.total_bits - 1)) - 1

    @property
    def lsb(self) -> float:
        return 2.0 ** -self.frac_bits

    @property
    def min_value(self) -> float:
        return self.min_code * self.lsb

    @property
    def max_value(self) -> float:
        return self.max_code * self.lsb

    def __str__(self) -> str:
        return f"Q({self.total_bits},{self.frac_bits},{self.overflow.value},{self.rounding.value})"

    @classmethod
    def from_value(cls, value: Union["FxFormat", Mapping[str, Any], list, tuple]) -> "FxFormat":
        if isinstance(value, FxFormat):
            return value
        if isinstance(value, Mapping):
            return cls(**value)
        return cls(*value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total_bits": self.total_bits,
            "frac_bits": self.frac_bits,
            "overflow": self.overflow.value,
            "rounding": self.rounding.value,
        }


@attr.s(frozen=True, slots=True)
class WidthLedger:
    """Per-stage datapath formats. Every fixed-point operation of the detector reads its output format here."""

    # receive samples; q(-y) = -q(y)
    input: FxFormat = attr.ib(
        default=FxFormat(14, 10, rounding=Rounding.NEAREST_EVEN), converter=FxFormat.from_value
    )
    corr: FxFormat = attr.ib(default=FxFormat(18, 10), converter=FxFormat.from_value)  # c = Y s*
    phi: FxFormat = attr.ib(default=FxFormat(34, 20), converter=FxFormat.from_value)  # Gram matrix
    lam: FxFormat = attr.ib(default=FxFormat(34, 18), converter=FxFormat.from_value)  # Lambda and a'
    norm: FxFormat = attr.ib(default=FxFormat(21, 19), converter=FxFormat.from_value)  # normalized vectors
    norm_sq: FxFormat = attr.ib(default=FxFormat(34, 26), converter=FxFormat.from_value)
    isqrt: FxFormat = attr.ib(default=FxFormat(24, 22), converter=FxFormat.from_value)
    lut: FxFormat = attr.ib(
        default=FxFormat(18, 15, rounding=Rounding.NEAREST_EVEN), converter=FxFormat.from_value
    )
    coef: FxFormat = attr.ib(default=FxFormat(24, 22), converter=FxFormat.from_value)  # b~
    proj: FxFormat = attr.ib(default=FxFormat(34, 20), converter=FxFormat.from_value)  # v, W, WA
    score: FxFormat = attr.ib(default=FxFormat(48, 20), converter=FxFormat.from_value)  # N, D
    tau: FxFormat = attr.ib(
        default=FxFormat(16, 10, rounding=Rounding.NEAREST_EVEN), converter=FxFormat.from_value
    )

    def __attrs_post_init__(self):
        if self.norm.frac_bits + 1 > 32:
            raise ConfigurationError("norm format needs at most 31 fractional bits to be fed by the PRNG")
        if self.phi.frac_bits != 2 * self.input.frac_bits:
            raise ConfigurationError("phi.frac_bits must be twice input.frac_bits for lossless Gram updates")

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> "WidthLedger":
        unknown = set(values) - {a.name for a in attr.fields(cls)}
        if unknown:
            raise ConfigurationError(f"Unknown format stage(s): {', '.join(sorted(unknown))}")
        return cls(**values)

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        return {a.name: getattr(self, a.name).to_dict() for a in attr.fields(WidthLedger)}

    def table(self) -> str:
        return "\n".join(f"{a.name:>8}: {getattr(self, a.name)}" for a in attr.fields(WidthLedger))


DEFAULT_LEDGER = WidthLedger()
