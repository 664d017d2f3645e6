import csv
import math
from fractions import Fraction

import numpy as np
import pytest

from jamsync.fxp import DEFAULT_LEDGER, FxArray, FxFormat, FxReal, quantize
from jamsync.harness.selftest import exact_requantize
from jamsync.kernels import (
    DEFAULT_LUT,
    DegenerateVectorError,
    InvSqrtDomainError,
    XorshiftPair,
    build_lut,
    export_lut_csv,
    inv_sqrt,
    lod4_decompose,
    prng_complex,
    prng_vector,
    pseudonorm_apply,
    pseudonorm_exponent,
    reseed_chain,
    tree_reduce,
    tree_sum,
    xorshift32_step,
)
from jamsync.kernels.prng import iter_words, word_to_raw


def test_xorshift_step():
    assert xorshift32_step(1) == 270369
    with pytest.raises(ValueError):
        xorshift32_step(0)


def test_xorshift_no_short_cycle():
    seen = set()
    words = iter_words(0xDEADBEEF)
    for _ in range(100_000):
        word = next(words)
        assert 0 < word <= 0xFFFFFFFF
        assert word not in seen
        seen.add(word)


def test_seed_pair_validation():
    with pytest.raises(ValueError):
        XorshiftPair(0, 1)
    with pytest.raises(ValueError):
        XorshiftPair(1, 1 << 32)
    assert XorshiftPair.from_value([3, 4]) == XorshiftPair(3, 4)


def test_prng_blocks_are_cascaded():
    p = XorshiftPair(1, 99)
    _, nxt = prng_complex(p, DEFAULT_LEDGER.norm)
    assert nxt.s1 == xorshift32_step(1)
    assert nxt.s2 == xorshift32_step(nxt.s1)


def test_reseed_chain():
    assert reseed_chain(XorshiftPair(5, 7)) == XorshiftPair(7, 7)



def scripted_draws(s1, s2, n, frac_bits):
    def step(s):
        s ^= (s << 13) & 0xFFFFFFFF
        s ^= s >> 17
        return s ^ ((s << 5) & 0xFFFFFFFF)

    def signed_top(word):
        top = word >> (31 - frac_bits)
        return top - (2 << frac_bits) if top >= (1 << frac_bits) else top

    draws = []
    for _ in range(n):
        s1 = step(s1)
        s2 = step(s1)
        draws.append((signed_top(s1), signed_top(s2)))
    return draws, (s1, s2)


def test_prng_complex_matches_scripted_xorshift():
    fmt = DEFAULT_LEDGER.norm
    expected, state = scripted_draws(1, 1, 16, fmt.frac_bits)
    p = XorshiftPair(1, 1)
    for re, im in expected:
        value, p = prng_complex(p, fmt)
        assert (value.re.raw, value.im.raw) == (re, im)
    assert (p.s1, p.s2) == state


def test_reseeded_vectors_match_scripted_xorshift():
    fmt = DEFAULT_LEDGER.norm
    first, (_, s2) = scripted_draws(1, 1, 16, fmt.frac_bits)
    second, (_, s2_next) = scripted_draws(s2, s2, 16, fmt.frac_bits)
    third, _ = scripted_draws(s2_next, s2_next, 16, fmt.frac_bits)
    p = XorshiftPair(1, 1)
    for expected in (first, second, third):
        v, p = prng_vector(p, 16, fmt)
        assert list(zip(v.re.tolist(), v.im.tolist())) == expected
        p = reseed_chain(p)


def test_reseed_never_zeroes_state():
    p = XorshiftPair(1, 1)
    for _ in range(2000):
        _, p = prng_complex(p, DEFAULT_LEDGER.norm)
        p = reseed_chain(p)
        assert p.s1 == p.s2 != 0


def test_word_to_raw():
    fmt = DEFAULT_LEDGER.norm
    assert word_to_raw(0x80000000, fmt) == -(1 << 19)
    assert word_to_raw(0x7FFFFFFF, fmt) == (1 << 19) - 1
    assert word_to_raw(0, fmt) == 0


def test_prng_vector():
    v, p = prng_vector(XorshiftPair(0x1234, 0x5678), 16, DEFAULT_LEDGER.norm)
    assert v.shape == (16,)
    z = v.to_complex()
    assert np.all((z.real >= -1) & (z.real < 1))
    assert np.all((z.imag >= -1) & (z.imag < 1))
    again, q = prng_vector(XorshiftPair(0x1234, 0x5678), 16, DEFAULT_LEDGER.norm)
    assert again == v and q == p


def test_pseudonorm_exponent():
    fmt = FxFormat(24, 18)
    assert pseudonorm_exponent(FxArray.quantize(np.array([3.0 + 0j, 0.5j]), fmt)) == 1
    assert pseudonorm_exponent(FxArray.quantize(np.array([0.25 - 0.125j]), fmt)) == -2
    with pytest.raises(DegenerateVectorError):
        pseudonorm_exponent(FxArray.zeros(4, fmt))


def test_pseudonorm_apply():
    v = FxArray.quantize(np.array([3.0 + 0j, -1.0 + 0.5j]), FxFormat(24, 18))
    out = pseudonorm_apply(v, pseudonorm_exponent(v), DEFAULT_LEDGER.norm)
    np.testing.assert_array_equal(out.to_complex(), [1.5 + 0j, -0.5 + 0.25j])


def test_pseudonorm_lands_in_unit_octave():
    rng = np.random.default_rng(4)
    fmt = DEFAULT_LEDGER.lam
    for _ in range(200):
        scale = 2.0 ** rng.integers(-10, 10)
        v = FxArray.quantize(scale * (rng.normal(size=16) + 1j * rng.normal(size=16)), fmt)
        out = pseudonorm_apply(v, pseudonorm_exponent(v), DEFAULT_LEDGER.norm).to_complex()
        peak = max(np.abs(out.real).max(), np.abs(out.imag).max())
        assert 1.0 <= peak < 2.0


def test_lod4_decompose():
    fmt = DEFAULT_LEDGER.norm_sq
    for x in (1.0, 0.3, 5.0, 0.01, 1000.0):
        alpha, raw, frac = lod4_decompose(quantize(x, fmt))
        reduced = math.ldexp(raw, -frac)
        assert 0.25 <= reduced < 1.0
        assert reduced * 4 ** alpha == pytest.approx(x, rel=1e-5)
    assert lod4_decompose(quantize(1.0, fmt))[0] == 1
    assert lod4_decompose(quantize(0.3, fmt))[0] == 0
    with pytest.raises(InvSqrtDomainError):
        lod4_decompose(FxReal(0, fmt))


@pytest.mark.parametrize("x", np.geomspace(0.25, 16.0, 97))
def test_inv_sqrt_accuracy(x):
    fmt = DEFAULT_LEDGER.norm_sq
    q = quantize(float(x), fmt)
    y = float(inv_sqrt(q, DEFAULT_LEDGER.isqrt))
    assert abs(y * math.sqrt(float(q)) - 1.0) <= 2.0 ** -12


def test_inv_sqrt_exact_powers():
    fmt = DEFAULT_LEDGER.norm_sq
    assert float(inv_sqrt(quantize(4.0, fmt), DEFAULT_LEDGER.isqrt)) == pytest.approx(0.5, abs=2.0 ** -12)
    assert float(inv_sqrt(quantize(0.25, fmt), DEFAULT_LEDGER.isqrt)) == pytest.approx(2.0, abs=2.0 ** -11)
    with pytest.raises(InvSqrtDomainError):
        inv_sqrt(quantize(-1.0, fmt), DEFAULT_LEDGER.isqrt)


def test_lut_layout(tmp_path):
    assert len(DEFAULT_LUT) == 64
    assert DEFAULT_LUT.mant_bits == 5
    first = math.ldexp(DEFAULT_LUT.entries[0], -15)
    assert first == pytest.approx(1 / math.sqrt(0.25 + 0.25 / 64), abs=2.0 ** -15)
    assert build_lut(4).entries != DEFAULT_LUT.entries

    path = tmp_path / "lut.csv"
    export_lut_csv(DEFAULT_LUT, path)
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["index", "entry"]
    assert len(rows) == 65
    assert int(rows[1][1]) == DEFAULT_LUT.entries[0]


def test_tree_reduce():
    fmt = FxFormat(16, 4)
    values = [quantize(v, fmt) for v in range(-8, 8)]
    assert float(tree_reduce(values, FxFormat(20, 4))) == -8.0
    with pytest.raises(ValueError):
        tree_reduce(values[:8], fmt)



def tree_oracle(raws):
    level = list(raws)
    while len(level) > 1:
        level = [a + b for a, b in zip(level[0::2], level[1::2])]
    return level[0]


@pytest.mark.parametrize("out_fmt", [FxFormat(18, 2), FxFormat(14, 2, overflow="wrap", rounding="nearest-even")])
def test_tree_reduce_matches_exact_sum(out_fmt):
    fmt = FxFormat(16, 4)
    rng = np.random.default_rng(7)
    for raws in rng.integers(fmt.min_code, fmt.max_code + 1, size=(200, 16)).tolist():
        result = tree_reduce([FxReal(r, fmt) for r in raws], out_fmt)
        assert result.fmt == out_fmt
        assert result.raw == exact_requantize(Fraction(tree_oracle(raws), 1 << fmt.frac_bits), out_fmt)


def test_tree_reduce_one_hot_and_zeros():
    fmt = FxFormat(16, 4)
    zero = FxReal(0, fmt)
    for i in range(16):
        values = [zero] * 16
        values[i] = FxReal(fmt.max_code, fmt)
        assert tree_reduce(values, FxFormat(20, 4)).raw == fmt.max_code
    assert tree_reduce([zero] * 16, FxFormat(20, 4)).raw == 0


def test_tree_sum():
    x = np.arange(32).reshape(2, 16)
    np.testing.assert_array_equal(tree_sum(x, axis=1), x.sum(axis=1))
    np.testing.assert_array_equal(tree_sum(x.T, axis=0), x.sum(axis=1))
    with pytest.raises(ValueError):
        tree_sum(np.ones(6))


def test_inv_sqrt_scaling_by_four():
    fmt = DEFAULT_LEDGER.norm_sq
    for x in (0.375, 1.6875, 3.9375):
        alpha, raw, frac = lod4_decompose(quantize(x, fmt))
        alpha4, raw4, frac4 = lod4_decompose(quantize(4 * x, fmt))
        assert alpha4 == alpha + 1
        assert math.ldexp(raw4, -frac4) == math.ldexp(raw, -frac)
        half = float(inv_sqrt(quantize(x, fmt), DEFAULT_LEDGER.isqrt)) / 2
        assert float(inv_sqrt(quantize(4 * x, fmt), DEFAULT_LEDGER.isqrt)) == pytest.approx(half, abs=2.0 ** -22)
