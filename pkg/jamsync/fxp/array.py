from typing import Iterator, Sequence, Tuple, Union

import attr
import numpy as np

from .formats import FxFormat, Overflow, Rounding
from .scalar import FxComplex, FxReal


# Widest intermediate kept in int64; anything wider falls back to exact Python integers.
INT64_BITS = 62


def raw_dtype(bits: int) -> type:
    return np.int64 if bits <= INT64_BITS else object


def as_raw(raw: np.ndarray, bits: int) -> np.ndarray:
    dtype = raw_dtype(bits)
    if raw.dtype == dtype:
        return raw
    if dtype is object:
        return np.array([int(v) for v in raw.ravel()], dtype=object).reshape(raw.shape)
    return raw.astype(np.int64)


def requantize_array(raw: np.ndarray, frac_in: int, fmt: FxFormat) -> np.ndarray:
    """Array form of scalar.requantize; bit-identical element by element."""
    shift = frac_in - fmt.frac_bits
    if shift > 0:
        q = raw >> shift
        if fmt.rounding is Rounding.NEAREST_EVEN:
            r = raw - (q << shift)
            half = 1 << (shift - 1)
            up = (r > half) | ((r == half) & ((q & 1) == 1))
            q = np.where(up, q + 1, q)
        raw = q
    elif shift < 0:
        raw = as_raw(raw, _bit_span(raw) - shift) << -shift
    if fmt.overflow is Overflow.SATURATE:
        raw = np.minimum(np.maximum(raw, fmt.min_code), fmt.max_code)
    else:
        raw = ((raw - fmt.min_code) & ((1 << fmt.total_bits) - 1)) + fmt.min_code
    return as_raw(np.asarray(raw), fmt.total_bits)


def _bit_span(raw: np.ndarray) -> int:
    if raw.size == 0:
        return 1
    return max(int(abs(int(v))).bit_length() for v in (raw.max(), raw.min())) + 1


def quantize_array(x: np.ndarray, fmt: FxFormat) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("cannot quantize non-finite values")
    scaled = np.ldexp(x, fmt.frac_bits)
    scaled = np.floor(scaled) if fmt.rounding is Rounding.TRUNCATE else np.rint(scaled)
    if fmt.overflow is Overflow.SATURATE:
        scaled = np.clip(scaled, fmt.min_code, fmt.max_code)
        if raw_dtype(fmt.total_bits) is np.int64:
            # float clip bounds may round up past max_code for wide formats
            return np.minimum(np.maximum(scaled.astype(np.int64), fmt.min_code), fmt.max_code)
        return np.array([int(v) for v in scaled.ravel()], dtype=object).reshape(x.shape)
    raw = np.array([int(v) for v in scaled.ravel()], dtype=object).reshape(x.shape)
    return requantize_array(raw, fmt.frac_bits, fmt)


@attr.s(frozen=True, slots=True, eq=False)
class FxArray:
    """Array of FxComplex values sharing one format, stored as separate re/im mantissa arrays."""

    re: np.ndarray = attr.ib()
    im: np.ndarray = attr.ib()
    fmt: FxFormat = attr.ib()

    @re.validator
    def _check_shape(self, attribute, value):
        if value.shape != self.im.shape:
            raise ValueError(f"re/im shapes differ: {value.shape} != {self.im.shape}")

    @classmethod
    def quantize(cls, z: np.ndarray, fmt: FxFormat) -> "FxArray":
        z = np.asarray(z, dtype=np.complex128)
        return cls(quantize_array(z.real, fmt), quantize_array(z.imag, fmt), fmt)

    @classmethod
    def from_raw(cls, re: np.ndarray, im: np.ndarray, frac_in: int, fmt: FxFormat) -> "FxArray":
        return cls(requantize_array(re, frac_in, fmt), requantize_array(im, frac_in, fmt), fmt)

    @classmethod
    def zeros(cls, shape: Union[int, Tuple[int, ...]], fmt: FxFormat) -> "FxArray":
        dtype = raw_dtype(fmt.total_bits)
        return cls(np.zeros(shape, dtype=dtype), np.zeros(shape, dtype=dtype), fmt)

    @classmethod
    def from_values(cls, values: Sequence[FxComplex]) -> "FxArray":
        fmt = values[0].fmt
        dtype = raw_dtype(fmt.total_bits)
        return cls(
            np.array([v.re.raw for v in values], dtype=dtype), np.array([v.im.raw for v in values], dtype=dtype), fmt
        )

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.re.shape

    def __len__(self) -> int:
        return len(self.re)

    def __getitem__(self, key) -> "FxArray":
        return FxArray(np.asarray(self.re[key]), np.asarray(self.im[key]), self.fmt)

    def __iter__(self) -> Iterator[FxComplex]:
        for re, im in zip(self.re.ravel(), self.im.ravel()):
            yield FxComplex.from_raw(int(re), int(im), self.fmt)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FxArray):
            return NotImplemented
        return self.fmt == other.fmt and np.array_equal(self.re, other.re) and np.array_equal(self.im, other.im)

    def to_complex(self) -> np.ndarray:
        scale = 2.0 ** -self.fmt.frac_bits
        return self.re.astype(np.float64) * scale + 1j * (self.im.astype(np.float64) * scale)

    @property
    def T(self) -> "FxArray":
        return FxArray(self.re.T, self.im.T, self.fmt)

    def conj(self) -> "FxArray":
        return FxArray(self.re, -self.im, self.fmt)

    def requantize(self, fmt: FxFormat) -> "FxArray":
        return FxArray.from_raw(self.re, self.im, self.fmt.frac_bits, fmt)


def fx_matmul(a: FxArray, b: FxArray, out_fmt: FxFormat, conj_a: bool = False) -> FxArray:
    """Complex product a @ b (or a^H @ b) with exact integer accumulation and a single rounding point."""
    inner = a.shape[0] if conj_a else a.shape[-1]
    bits = a.fmt.total_bits + b.fmt.total_bits + 1 + max(inner - 1, 1).bit_length()
    ar, ai = as_raw(a.re, bits), as_raw(a.im, bits)
    br, bi = as_raw(b.re, bits), as_raw(b.im, bits)
    if conj_a:
        ar, ai = ar.T, -ai.T
    re = ar @ br - ai @ bi
    im = ar @ bi + ai @ br
    return FxArray.from_raw(re, im, a.fmt.frac_bits + b.fmt.frac_bits, out_fmt)


def fx_outer(a: FxArray, b: FxArray) -> Tuple[np.ndarray, np.ndarray, int]:
    """Exact a b^H as raw mantissas plus their fractional bit count (caller picks the rounding point)."""
    bits = a.fmt.total_bits + b.fmt.total_bits + 1
    ar, ai = as_raw(a.re, bits), as_raw(a.im, bits)
    br, bi = as_raw(b.re, bits), as_raw(b.im, bits)
    re = np.multiply.outer(ar, br) + np.multiply.outer(ai, bi)
    im = np.multiply.outer(ai, br) - np.multiply.outer(ar, bi)
    return re, im, a.fmt.frac_bits + b.fmt.frac_bits


def fx_scale(a: FxArray, r: FxReal, out_fmt: FxFormat) -> FxArray:
    bits = a.fmt.total_bits + r.fmt.total_bits
    return FxArray.from_raw(
        as_raw(a.re, bits) * r.raw, as_raw(a.im, bits) * r.raw, a.fmt.frac_bits + r.fmt.frac_bits, out_fmt
    )


def hermitize(m: FxArray) -> FxArray:
    """Keeps the lower triangle, mirrors its conjugate into the upper one, and zeroes diagonal imaginary parts."""
    lower = np.tril(np.ones(m.shape, dtype=bool), -1)
    re = np.where(lower, m.re, m.re.T)
    im = np.where(lower, m.im, -m.im.T)
    np.fill_diagonal(re, np.diag(m.re))
    np.fill_diagonal(im, 0)
    return FxArray(re, im, m.fmt)
