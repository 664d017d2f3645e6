from functools import reduce
from operator import or_

import numpy as np

from ..fxp import FxArray, FxFormat


class DegenerateVectorError(ArithmeticError):
    pass


def pseudonorm_exponent(v: FxArray) -> int:
    """n = floor(log2(max |Re|, |Im|)) from an OR-tree over absolute mantissas and a base-2 leading-one detector."""
    combined = reduce(or_, (abs(int(x)) for x in np.concatenate([v.re.ravel(), v.im.ravel()])), 0)
    if combined == 0:
        raise DegenerateVectorError("pseudonormalization of an all-zero vector")
    return combined.bit_length() - 1 - v.fmt.frac_bits


def pseudonorm_apply(v: FxArray, n: int, out_fmt: FxFormat) -> FxArray:
    # value * 2^-n == raw * 2^-(frac + n): move the fractional point, then truncate once
    frac_in = v.fmt.frac_bits + n
    out = FxArray.from_raw(v.re, v.im, frac_in, out_fmt)
    # symmetric clamp keeps |component| < 2 when the truncated negative peak hits the min code
    lo = -out_fmt.max_code
    return FxArray(np.maximum(out.re, lo), np.maximum(out.im, lo), out_fmt)
