from .array import FxArray, fx_matmul, fx_outer, fx_scale, hermitize, quantize_array, requantize_array
from .formats import DEFAULT_LEDGER, ConfigurationError, FxFormat, Overflow, Rounding, WidthLedger
from .scalar import (
    FxComplex,
    FxReal,
    apply_overflow,
    fx_add,
    fx_cmul,
    fx_mul,
    fx_shift,
    quantize,
    requantize,
)


__all__ = (
    "ConfigurationError",
    "DEFAULT_LEDGER",
    "FxArray",
    "FxComplex",
    "FxFormat",
    "FxReal",
    "Overflow",
    "Rounding",
    "WidthLedger",
    "apply_overflow",
    "fx_add",
    "fx_cmul",
    "fx_matmul",
    "fx_mul",
    "fx_outer",
    "fx_scale",
    "fx_shift",
    "hermitize",
    "quantize",
    "quantize_array",
    "requantize",
    "requantize_array",
)
