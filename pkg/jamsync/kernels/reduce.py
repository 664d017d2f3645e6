from typing import Sequence

import numpy as np

from ..fxp import FxFormat, FxReal, fx_add


TREE_WIDTH = 16


def tree_reduce(v: Sequence[FxReal], out_fmt: FxFormat) -> FxReal:
    """Balanced adder tree ((0+1)+(2+3))+...; each level grows by one bit so only the output is rounded."""
    if len(v) != TREE_WIDTH:
        raise ValueError(f"adder tree takes exactly {TREE_WIDTH} inputs, got {len(v)}")
    level = list(v)
    while len(level) > 1:
        fmt = level[0].fmt
        wider = FxFormat(min(fmt.total_bits + 1, 64), fmt.frac_bits, fmt.overflow, fmt.rounding)
        level = [fx_add(a, b, wider) for a, b in zip(level[0::2], level[1::2])]
    total = level[0]
    return fx_add(total, FxReal(0, total.fmt), out_fmt)


def tree_sum(x: np.ndarray, axis: int = -1) -> np.ndarray:
    x = np.moveaxis(np.asarray(x), axis, -1)
    n = x.shape[-1]
    if n & (n - 1):
        raise ValueError(f"tree reduction needs a power-of-two length, got {n}")
    while x.shape[-1] > 1:
        x = x[..., 0::2] + x[..., 1::2]
    return x[..., 0]
