"""Bit-accurate detector datapath.

Every stage output is quantized exactly once into its width-ledger format; products and sums
feeding a stage are accumulated exactly in integers. Gram updates are lossless, so sliding
Phi is bit-identical to recomputing it from the window.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ...fxp import FxArray, FxComplex, FxReal, fx_matmul, fx_outer, fx_scale, hermitize, quantize, requantize
from ...fxp.array import as_raw
from ...kernels.inv_sqrt import build_lut, inv_sqrt
from ...kernels.prng import XorshiftPair, prng_vector
from ...kernels.pseudonorm import DegenerateVectorError, pseudonorm_apply, pseudonorm_exponent
from ..frontend import agc_gain
from ..structs import ScoreTerms, SubspaceEstimate
from . import COLLINEAR_GAP_LOG2, Backend


logger = logging.getLogger(__name__)


def _lift(raw: np.ndarray, frac: int, to_frac: int, bits: int) -> np.ndarray:
    shift = to_frac - frac
    return as_raw(raw, bits + shift) << shift


def _sq_norm(x: FxArray) -> int:
    return sum(int(v) * int(v) for v in np.concatenate([x.re.ravel(), x.im.ravel()]))


def _inner(a: FxArray, b: FxArray) -> Tuple[int, int]:
    ar, ai, br, bi = (as_raw(x, 2 * a.fmt.total_bits + 5) for x in (a.re, a.im, b.re, b.im))
    return int(ar @ br + ai @ bi), int(ar @ bi - ai @ br)


class FixedBackend(Backend):
    short_name = "fixed"

    def __init__(self, config, sequence):
        super().__init__(config, sequence)
        self.formats = config.formats
        self.lut = build_lut(entry_fmt=self.formats.lut)
        self.k_shift = sequence.energy.bit_length() - 1

    def ingest(self, stream: np.ndarray) -> List[FxArray]:
        stream = np.asarray(stream, dtype=np.complex128)
        if stream.ndim != 2 or stream.shape[1] != self.config.B:
            raise ValueError(f"receive stream must be N x {self.config.B}, got shape {stream.shape}")
        if self.config.agc_rms is not None:
            stream = stream * agc_gain(stream, self.config.agc_rms)
        quantized = FxArray.quantize(stream, self.formats.input)
        return [quantized[k] for k in range(len(quantized))]

    @staticmethod
    def _stack(window: Sequence[FxArray]) -> FxArray:
        return FxArray(
            np.stack([y.re for y in window], axis=1), np.stack([y.im for y in window], axis=1), window[0].fmt
        )

    def phi_init(self, window: Sequence[FxArray]) -> FxArray:
        Y = self._stack(window)
        return hermitize(fx_matmul(Y, Y.conj().T, self.formats.phi))

    def correlate(self, window: Sequence[FxArray]) -> FxArray:
        # BPSK: column sign adjustment and accumulation, no multiplier
        Y = self._stack(window)
        s = self.sequence.as_array()
        return FxArray.from_raw(Y.re @ s, Y.im @ s, Y.fmt.frac_bits, self.formats.corr)

    def lambda_build(self, phi: FxArray, c: FxArray) -> FxArray:
        cc_re, cc_im, cc_frac = fx_outer(c, c)
        frac = max(phi.fmt.frac_bits, cc_frac)
        bits = phi.fmt.total_bits + self.k_shift + 1
        # K * Phi is a left shift by log2(K)
        re = (_lift(phi.re, phi.fmt.frac_bits, frac, bits) << self.k_shift) - _lift(cc_re, cc_frac, frac, bits)
        im = (_lift(phi.im, phi.fmt.frac_bits, frac, bits) << self.k_shift) - _lift(cc_im, cc_frac, frac, bits)
        return hermitize(FxArray.from_raw(re, im, frac, self.formats.lam))

    def normalize(self, v: FxArray) -> Optional[FxArray]:
        """Pseudonormalize, then scale by the inverse square root of the squared norm; None for a zero vector."""
        norm = self.formats.norm
        try:
            n = pseudonorm_exponent(v)
        except DegenerateVectorError:
            return None
        pn = pseudonorm_apply(v, n, norm)
        sq = _sq_norm(pn)  # ||v||^2 = sq * 2^(2n - 2 frac)
        if sq == 0 or (sq << max(2 * n, 0)) < (1 << (norm.frac_bits + max(-2 * n, 0))):
            return None
        nsq = FxReal(requantize(sq, 2 * norm.frac_bits, self.formats.norm_sq), self.formats.norm_sq)
        r = inv_sqrt(nsq, self.formats.isqrt, self.lut)
        return fx_scale(pn, r, norm)

    def _deflate(self, lam: FxArray, a_raw: FxArray, a: FxArray) -> FxArray:
        out_re, out_im, frac = fx_outer(a_raw, a)
        bits = lam.fmt.total_bits + 1
        re = _lift(lam.re, lam.fmt.frac_bits, frac, bits) - out_re
        im = _lift(lam.im, lam.fmt.frac_bits, frac, bits) - out_im
        return hermitize(FxArray.from_raw(re, im, frac, self.formats.lam))

    def power_subspace(self, lam: FxArray, prng: XorshiftPair) -> Tuple[SubspaceEstimate, XorshiftPair]:
        cfg = self.config
        vectors: List[FxArray] = []
        raws: List[FxArray] = []
        active: List[bool] = []
        for i in range(cfg.i_max):
            seed, prng = prng_vector(prng, cfg.B, self.formats.norm)
            a: Optional[FxArray] = seed
            a_raw = None
            for _ in range(cfg.t_max):
                a_raw = fx_matmul(lam, a, self.formats.lam)
                a = self.normalize(a_raw)
                if a is None:
                    break
            if a is None or a_raw is None:
                logger.debug("Subspace column %d degenerate, keeping the PRNG direction", i)
                start = self.normalize(seed)
                vectors.append(seed if start is None else start)
                raws.append(FxArray.zeros(cfg.B, self.formats.lam))
                active.append(False)
                continue
            vectors.append(a)
            raws.append(a_raw)
            active.append(True)
            lam = self._deflate(lam, a_raw, a)
        return self._pair(vectors, raws, active), prng

    def _pair(self, vectors: List[FxArray], raws: List[FxArray], active: List[bool]) -> SubspaceEstimate:
        coef = self.formats.coef
        b_tilde = FxComplex.from_raw(0, 0, coef)
        if len(vectors) == 2 and all(active):
            br, bi = _inner(vectors[0], vectors[1])
            # 1 - |b~|^2 on the quantized columns, i.e. normalized by |a1|^2 |a2|^2
            scale = _sq_norm(vectors[0]) * _sq_norm(vectors[1])
            if (scale - br * br - bi * bi) << COLLINEAR_GAP_LOG2 < scale:
                b_abs = math.sqrt((br * br + bi * bi) / scale)
                logger.debug("Subspace columns collinear (|b~| = %.6f), dropping a2", b_abs)
                active[1] = False
            else:
                two_f = 2 * self.formats.norm.frac_bits
                b_tilde = FxComplex.from_raw(requantize(br, two_f, coef), requantize(bi, two_f, coef), coef)
        return SubspaceEstimate(vectors, raws, active, b_tilde)

    def empty_subspace(self) -> SubspaceEstimate:
        return SubspaceEstimate((), (), (), FxComplex.from_raw(0, 0, self.formats.coef))

    def _columns(self, subspace: SubspaceEstimate) -> FxArray:
        norm = self.formats.norm
        cols = [FxArray.zeros(self.config.B, norm), FxArray.zeros(self.config.B, norm)]
        for i, (vec, on) in enumerate(zip(subspace.vectors, subspace.active)):
            if on:
                cols[i] = vec
        return FxArray(np.stack([c.re for c in cols], axis=1), np.stack([c.im for c in cols], axis=1), norm)

    def _gram(self, subspace: SubspaceEstimate) -> Tuple[int, int, int, int]:
        """Exact A^H A of the quantized columns as (|a1|^2, |a2|^2, Re b, Im b) at 2 norm.frac_bits.

        An inactive column counts as a unit vector orthogonal to the other one.
        """
        one = 1 << (2 * self.formats.norm.frac_bits)
        on = list(subspace.active) + [False] * (2 - len(subspace.active))
        n1, n2 = (_sq_norm(subspace.vectors[i]) if on[i] else one for i in range(2))
        br, bi = _inner(subspace.vectors[0], subspace.vectors[1]) if all(on) else (0, 0)
        return n1, n2, br, bi

    def score_terms(self, subspace: SubspaceEstimate, phi: FxArray, c: FxArray) -> ScoreTerms:
        fmts = self.formats
        A = self._columns(subspace)
        v = fx_matmul(A, c, fmts.proj, conj_a=True)
        W = fx_matmul(A, phi, fmts.proj, conj_a=True)
        G = fx_matmul(W, A, fmts.proj)

        # N and D are formed exactly against the Gram matrix of the quantized columns and rounded
        # once into the score format. Both carry the factor det(A^H A), which is gamma for unit columns.
        # The unit-column form gamma = 1 - |b~|^2 assumes ||a_i|| = 1 exactly; with the ~2^-12 error of
        # the inverse square root it leaked jammer energy past the projector and drove D negative at 30 dB.
        fg, fv, fc, fp = 2 * fmts.norm.frac_bits, fmts.proj.frac_bits, c.fmt.frac_bits, phi.fmt.frac_bits
        n1, n2, br, bi = self._gram(subspace)
        det = n1 * n2 - br * br - bi * bi
        v1r, v1i, v2r, v2i = (int(x) for x in (v.re[0], v.im[0], v.re[1], v.im[1]))
        c_sq = _sq_norm(c)
        trace = sum(int(x) for x in np.diag(phi.re))
        v_sq = n2 * (v1r * v1r + v1i * v1i) + n1 * (v2r * v2r + v2i * v2i)
        cross_v = br * (v1r * v2r + v1i * v2i) - bi * (v1r * v2i - v1i * v2r)
        g_diag = n2 * int(G.re[0, 0]) + n1 * int(G.re[1, 1])
        cross_g = br * int(G.re[1, 0]) - bi * int(G.im[1, 0])

        f_n = max(2 * fg + 2 * fc, fg + 2 * fv)
        numerator = (det * c_sq << (f_n - 2 * fg - 2 * fc)) - ((v_sq - 2 * cross_v) << (f_n - fg - 2 * fv))
        f_d = max(2 * fg + fp, fg + fv)
        denominator = (det * trace << (f_d - 2 * fg - fp)) - ((g_diag - 2 * cross_g) << (f_d - fg - fv))
        score = fmts.score
        return ScoreTerms(
            c,
            v,
            W,
            FxReal(requantize(numerator, f_n, score), score),
            FxReal(requantize(denominator, f_d, score), score),
        )

    def accepts(self, numerator: FxReal, denominator: FxReal, tau: float) -> bool:
        t = quantize(tau, self.formats.tau)
        return (numerator.raw << t.fmt.frac_bits) - denominator.raw * t.raw >= 0

    def phi_slide(self, phi: FxArray, y_out: FxArray, y_in: FxArray) -> FxArray:
        out_re, out_im, frac = fx_outer(y_out, y_out)
        in_re, in_im, _ = fx_outer(y_in, y_in)
        to_frac = max(frac, phi.fmt.frac_bits)
        bits = max(phi.fmt.total_bits, 2 * y_in.fmt.total_bits + 1) + 2
        re = _lift(phi.re, phi.fmt.frac_bits, to_frac, bits) - _lift(out_re, frac, to_frac, bits)
        im = _lift(phi.im, phi.fmt.frac_bits, to_frac, bits) - _lift(out_im, frac, to_frac, bits)
        re = re + _lift(in_re, frac, to_frac, bits)
        im = im + _lift(in_im, frac, to_frac, bits)
        return hermitize(FxArray.from_raw(re, im, to_frac, self.formats.phi))
