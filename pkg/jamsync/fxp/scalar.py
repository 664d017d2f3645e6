import math

import attr

from .formats import FxFormat, Overflow, Rounding


def _shift_right(raw: int, shift: int, rounding: Rounding) -> int:
    if rounding is Rounding.TRUNCATE:
        return raw >> shift
    q, r = divmod(raw, 1 << shift)
    half = 1 << (shift - 1)
    if r > half or (r == half and q & 1):
        q += 1
    return q


def apply_overflow(raw: int, fmt: FxFormat) -> int:
    if fmt.min_code <= raw <= fmt.max_code:
        return raw
    if fmt.overflow is Overflow.SATURATE:
        return fmt.max_code if raw > 0 else fmt.min_code
    return ((raw - fmt.min_code) & ((1 << fmt.total_bits) - 1)) + fmt.min_code


def requantize(raw: int, frac_in: int, fmt: FxFormat) -> int:
    """Moves an exact mantissa with frac_in fractional bits into fmt: one rounding, then the overflow policy."""
    shift = frac_in - fmt.frac_bits
    if shift > 0:
        raw = _shift_right(raw, shift, fmt.rounding)
    elif shift < 0:
        raw <<= -shift
    return apply_overflow(raw, fmt)


def _check_raw(instance, attribute, value: int) -> None:
    fmt = instance.fmt
    if not fmt.min_code <= value <= fmt.max_code:
        raise ValueError(f"mantissa {value} does not fit in {fmt}")


@attr.s(frozen=True, slots=True)
class FxReal:
    raw: int = attr.ib(converter=int, validator=_check_raw)
    fmt: FxFormat = attr.ib()

    def __float__(self) -> float:
        return math.ldexp(self.raw, -self.fmt.frac_bits)

    def __neg__(self) -> "FxReal":
        return FxReal(apply_overflow(-self.raw, self.fmt), self.fmt)


def _check_same_fmt(instance, attribute, value: FxReal) -> None:
    if value.fmt != instance.re.fmt:
        raise ValueError(f"re and im formats differ: {instance.re.fmt} != {value.fmt}")


@attr.s(frozen=True, slots=True)
class FxComplex:
    re: FxReal = attr.ib()
    im: FxReal = attr.ib(validator=_check_same_fmt)

    @property
    def fmt(self) -> FxFormat:
        return self.re.fmt

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    @classmethod
    def from_raw(cls, re: int, im: int, fmt: FxFormat) -> "FxComplex":
        return cls(FxReal(re, fmt), FxReal(im, fmt))


def quantize(x: float, fmt: FxFormat) -> FxReal:
    if not math.isfinite(x):
        raise ValueError(f"cannot quantize non-finite value {x}")
    scaled = math.ldexp(x, fmt.frac_bits)  # exact: power-of-two scaling
    if fmt.rounding is Rounding.TRUNCATE:
        raw = math.floor(scaled)
    else:
        raw = round(scaled)  # half to even
    return FxReal(apply_overflow(raw, fmt), fmt)


def fx_add(a: FxReal, b: FxReal, out_fmt: FxFormat) -> FxReal:
    if a.fmt != b.fmt:
        raise ValueError(f"operand formats differ: {a.fmt} != {b.fmt}")
    return FxReal(requantize(a.raw + b.raw, a.fmt.frac_bits, out_fmt), out_fmt)


def fx_mul(a: FxReal, b: FxReal, out_fmt: FxFormat) -> FxReal:
    return FxReal(requantize(a.raw * b.raw, a.fmt.frac_bits + b.fmt.frac_bits, out_fmt), out_fmt)


def fx_cmul(a: FxComplex, b: FxComplex, out_fmt: FxFormat) -> FxComplex:
    frac = a.fmt.frac_bits + b.fmt.frac_bits
    re = a.re.raw * b.re.raw - a.im.raw * b.im.raw
    im = a.re.raw * b.im.raw + a.im.raw * b.re.raw
    return FxComplex.from_raw(requantize(re, frac, out_fmt), requantize(im, frac, out_fmt), out_fmt)


def fx_shift(a: FxReal, n: int) -> FxReal:
    # right shifts floor
    if abs(n) >= a.fmt.total_bits:
        raise ValueError(f"shift {n} out of range for {a.fmt}")
    if n >= 0:
        return FxReal(apply_overflow(a.raw << n, a.fmt), a.fmt)
    return FxReal(a.raw >> -n, a.fmt)
