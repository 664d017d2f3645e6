"""Inverse square root: base-4 leading-one range reduction, LUT seed, one Newton-Raphson step."""
import csv
import math
from os import PathLike
from typing import Optional, Tuple, Union

import attr

from ..fxp import FxFormat, FxReal, quantize, requantize


OCTAVE_BITS = 1


class InvSqrtDomainError(ValueError):
    pass


@attr.s(frozen=True, slots=True)
class InvSqrtLut:
    entries: Tuple[int, ...] = attr.ib(converter=tuple)
    addr_bits: int = attr.ib()
    entry_fmt: FxFormat = attr.ib()

    @property
    def mant_bits(self) -> int:
        return self.addr_bits - OCTAVE_BITS

    def __len__(self) -> int:
        return len(self.entries)


def bin_midpoint(addr: int, addr_bits: int) -> float:
    mant_bits = addr_bits - OCTAVE_BITS
    octave, mant = addr >> mant_bits, addr & ((1 << mant_bits) - 1)
    base = 0.5 if octave else 0.25
    width = base / (1 << mant_bits)
    return base + (mant + 0.5) * width


def build_lut(addr_bits: int = 6, entry_fmt: FxFormat = FxFormat(18, 15, rounding="nearest-even")) -> InvSqrtLut:
    entries = [quantize(1 / math.sqrt(bin_midpoint(addr, addr_bits)), entry_fmt).raw for addr in range(1 << addr_bits)]
    return InvSqrtLut(entries, addr_bits, entry_fmt)


def lod4_decompose(x: FxReal) -> Tuple[int, int, int]:
    """Returns (alpha, raw, frac) with x' = raw * 2^-frac = x / 4^alpha in [0.25, 1)."""
    if x.raw <= 0:
        raise InvSqrtDomainError(f"inverse square root of non-positive value {float(x)}")
    e = x.raw.bit_length() - x.fmt.frac_bits  # x in [2^(e-1), 2^e)
    alpha = -((-e) // 2)  # ceil(e / 2)
    return alpha, x.raw, x.fmt.frac_bits + 2 * alpha


def lut_address(raw: int, frac: int, mant_bits: int) -> int:
    width = raw.bit_length()
    octave = 1 if frac == width else 0
    below = width - 1 - mant_bits
    mant = (raw >> below if below >= 0 else raw << -below) & ((1 << mant_bits) - 1)
    return (octave << mant_bits) | mant


def inv_sqrt(x: FxReal, out_fmt: FxFormat, lut: Optional[InvSqrtLut] = None) -> FxReal:
    lut = lut or DEFAULT_LUT
    alpha, raw, frac = lod4_decompose(x)
    y0 = lut.entries[lut_address(raw, frac, lut.mant_bits)]
    fy = lut.entry_fmt.frac_bits
    # y = y0 (3 - y0^2 x') / 2, exact in integers: y0^2 x' carries 2 fy + frac fractional bits
    t = (3 << (2 * fy + frac)) - y0 * y0 * raw
    y = y0 * t
    # 1/sqrt(x) = y * 2^-alpha, and /2 is one more fractional bit
    return FxReal(requantize(y, 3 * fy + frac + 1 + alpha, out_fmt), out_fmt)


def export_lut_csv(lut: InvSqrtLut, path: Union[str, "PathLike[str]"]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["index", "entry"])
        for index, entry in enumerate(lut.entries):
            writer.writerow([index, entry])


DEFAULT_LUT = build_lut()
