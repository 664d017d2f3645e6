from .inv_sqrt import (
    DEFAULT_LUT,
    InvSqrtDomainError,
    InvSqrtLut,
    build_lut,
    export_lut_csv,
    inv_sqrt,
    lod4_decompose,
)
from .prng import XorshiftPair, prng_complex, prng_vector, reseed_chain, xorshift32_step
from .pseudonorm import DegenerateVectorError, pseudonorm_apply, pseudonorm_exponent
from .reduce import tree_reduce, tree_sum


__all__ = (
    "DEFAULT_LUT",
    "DegenerateVectorError",
    "InvSqrtDomainError",
    "InvSqrtLut",
    "XorshiftPair",
    "build_lut",
    "export_lut_csv",
    "inv_sqrt",
    "lod4_decompose",
    "prng_complex",
    "prng_vector",
    "pseudonorm_apply",
    "pseudonorm_exponent",
    "reseed_chain",
    "tree_reduce",
    "tree_sum",
    "xorshift32_step",
)
