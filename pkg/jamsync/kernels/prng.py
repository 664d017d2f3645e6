"""Complex-valued PRNG built from two cascaded 32-bit xorshift blocks."""
from typing import Iterator, List, Tuple

import attr

from ..fxp import FxArray, FxComplex, FxFormat, FxReal


MASK32 = 0xFFFFFFFF
SHIFTS = (13, 17, 5)  # left, right, left


def xorshift32_step(s: int) -> int:
    if s == 0:
        raise ValueError("xorshift state must be nonzero")
    a, b, c = SHIFTS
    s ^= (s << a) & MASK32
    s ^= s >> b
    s ^= (s << c) & MASK32
    return s


def _check_state(instance, attribute, value: int) -> None:
    if not 0 < value <= MASK32:
        raise ValueError(f"{attribute.name} must be a nonzero 32-bit word, got {value:#x}")


@attr.s(frozen=True, slots=True)
class XorshiftPair:
    s1: int = attr.ib(validator=_check_state)
    s2: int = attr.ib(validator=_check_state)

    @classmethod
    def from_value(cls, value) -> "XorshiftPair":
        if isinstance(value, XorshiftPair):
            return value
        return cls(*value)


DEFAULT_SEED = XorshiftPair(0x2545F491, 0x9E3779B9)


def _advance_blocks(p: XorshiftPair) -> XorshiftPair:
    # Cascade: block 2 consumes block 1's fresh output. The parallel reading would be
    # XorshiftPair(xorshift32_step(p.s1), xorshift32_step(p.s2)).
    s1 = xorshift32_step(p.s1)
    return XorshiftPair(s1, xorshift32_step(s1))


def word_to_raw(word: int, fmt: FxFormat) -> int:
    """Top frac_bits + 1 bits of the word as a two's-complement mantissa, i.e. a value in [-1, 1)."""
    width = fmt.frac_bits + 1
    top = word >> (32 - width)
    return top - (1 << width) if top >> (width - 1) else top


def prng_complex(p: XorshiftPair, fmt: FxFormat) -> Tuple[FxComplex, XorshiftPair]:
    p = _advance_blocks(p)
    return FxComplex(FxReal(word_to_raw(p.s1, fmt), fmt), FxReal(word_to_raw(p.s2, fmt), fmt)), p


def prng_vector(p: XorshiftPair, n: int, fmt: FxFormat) -> Tuple[FxArray, XorshiftPair]:
    values: List[FxComplex] = []
    for _ in range(n):
        value, p = prng_complex(p, fmt)
        values.append(value)
    return FxArray.from_values(values), p


def reseed_chain(p: XorshiftPair) -> XorshiftPair:
    return XorshiftPair(p.s2, p.s2)


def iter_words(seed: int) -> Iterator[int]:
    s = seed
    while True:
        s = xorshift32_step(s)
        yield s
