import logging
from typing import List, Sequence, Tuple

import numpy as np

from ...kernels.prng import XorshiftPair, prng_vector
from ...kernels.reduce import tree_sum
from ..structs import ScoreTerms, SubspaceEstimate
from . import COLLINEAR_GAP_LOG2, Backend


logger = logging.getLogger(__name__)

# ||a'|| at or below 2^-40 trace(Lambda) is numerically zero
DEGENERATE_REL = 2.0 ** -40
# D at or below 2^-40 gamma trace(Phi): the projection left no energy in the window
EMPTY_WINDOW_REL = 2.0 ** -40


def hermitian(m: np.ndarray) -> np.ndarray:
    lower = np.tril(m, -1)
    return lower + lower.conj().T + np.diag(np.diag(m).real)


def unit(v: np.ndarray) -> np.ndarray:
    n = np.sqrt(tree_sum(np.abs(v) ** 2))
    if n == 0:
        e = np.zeros_like(v)
        e[0] = 1
        return e
    return v / n


class FloatBackend(Backend):
    short_name = "float"

    def ingest(self, stream: np.ndarray) -> List[np.ndarray]:
        stream = np.asarray(stream, dtype=np.complex128)
        if stream.ndim != 2 or stream.shape[1] != self.config.B:
            raise ValueError(f"receive stream must be N x {self.config.B}, got shape {stream.shape}")
        return list(stream)

    @staticmethod
    def _stack(window: Sequence[np.ndarray]) -> np.ndarray:
        return np.stack(window, axis=1)

    def phi_init(self, window: Sequence[np.ndarray]) -> np.ndarray:
        Y = self._stack(window)
        return hermitian(tree_sum(Y[:, None, :] * Y.conj()[None, :, :]))

    def correlate(self, window: Sequence[np.ndarray]) -> np.ndarray:
        Y = self._stack(window)
        return tree_sum(Y * self.sequence.as_array()[None, :])

    def lambda_build(self, phi: np.ndarray, c: np.ndarray) -> np.ndarray:
        return hermitian(self.sequence.energy * phi - np.outer(c, c.conj()))

    def _seed_vector(self, prng: XorshiftPair) -> Tuple[np.ndarray, XorshiftPair]:
        seed, prng = prng_vector(prng, self.config.B, self.config.formats.norm)
        return unit(seed.to_complex()), prng

    def power_subspace(self, lam: np.ndarray, prng: XorshiftPair) -> Tuple[SubspaceEstimate, XorshiftPair]:
        cfg = self.config
        floor = DEGENERATE_REL * max(float(np.trace(lam).real), 0.0)
        if cfg.subspace == "eigh":
            return self._eigh_subspace(lam, floor), prng

        vectors: List[np.ndarray] = []
        raws: List[np.ndarray] = []
        active: List[bool] = []
        for i in range(cfg.i_max):
            a, prng = self._seed_vector(prng)
            start = a
            a_raw = None
            for _ in range(cfg.t_max):
                a_raw = lam @ a
                norm = float(np.sqrt(tree_sum(np.abs(a_raw) ** 2)))
                if norm == 0 or norm <= floor:
                    a_raw = None
                    break
                a = a_raw / norm
            if a_raw is None:
                logger.debug("Subspace column %d degenerate, keeping the PRNG direction", i)
                vectors.append(start)
                raws.append(np.zeros(cfg.B, dtype=np.complex128))
                active.append(False)
                continue
            vectors.append(a)
            raws.append(a_raw)
            active.append(True)
            lam = hermitian(lam - np.outer(a_raw, a.conj()))
        return self._pair(vectors, raws, active), prng

    def _eigh_subspace(self, lam: np.ndarray, floor: float) -> SubspaceEstimate:
        w, V = np.linalg.eigh(lam)
        vectors, raws, active = [], [], []
        for i in range(self.config.i_max):
            vec = V[:, -1 - i]
            vectors.append(vec)
            raws.append(w[-1 - i] * vec)
            active.append(bool(w[-1 - i] > floor and w[-1 - i] > 0))
        return self._pair(vectors, raws, active)

    def _pair(self, vectors: List[np.ndarray], raws: List[np.ndarray], active: List[bool]) -> SubspaceEstimate:
        b_tilde = 0j
        if len(vectors) == 2 and all(active):
            b_tilde = complex(tree_sum(vectors[0].conj() * vectors[1]))
            if 1 - abs(b_tilde) ** 2 < 2.0 ** -COLLINEAR_GAP_LOG2:
                logger.debug("Subspace columns collinear (|b~| = %.6f), dropping a2", abs(b_tilde))
                active[1] = False
                b_tilde = 0j
        return SubspaceEstimate(vectors, raws, active, b_tilde)

    def empty_subspace(self) -> SubspaceEstimate:
        return SubspaceEstimate((), (), (), 0j)

    def _columns(self, subspace: SubspaceEstimate) -> np.ndarray:
        A = np.zeros((self.config.B, 2), dtype=np.complex128)
        for i, (vec, on) in enumerate(zip(subspace.vectors, subspace.active)):
            if on:
                A[:, i] = vec
        return A

    def score_terms(self, subspace: SubspaceEstimate, phi: np.ndarray, c: np.ndarray) -> ScoreTerms:
        A = self._columns(subspace)
        v = tree_sum(A.conj() * c[:, None], axis=0)
        W = tree_sum(A.conj().T[:, :, None] * phi[None, :, :], axis=1)
        G = tree_sum(W[:, :, None] * A[None, :, :], axis=1)
        b = complex(subspace.b_tilde)
        gamma = 1 - abs(b) ** 2
        c_sq = float(tree_sum(np.abs(c) ** 2))
        trace = float(tree_sum(np.diag(phi).real))
        vbv = abs(v[0]) ** 2 + abs(v[1]) ** 2 - 2 * (b * v[0].conjugate() * v[1]).real
        tr_bwa = G[0, 0].real + G[1, 1].real - 2 * (b * G[1, 0]).real
        numerator, denominator = float(gamma * c_sq - vbv), float(gamma * trace - tr_bwa)
        if denominator <= EMPTY_WINDOW_REL * gamma * trace:
            numerator = denominator = 0.0
        return ScoreTerms(c, v, W, numerator, denominator)

    def accepts(self, numerator: float, denominator: float, tau: float) -> bool:
        return float(numerator) - float(denominator) * tau >= 0

    def phi_slide(self, phi: np.ndarray, y_out: np.ndarray, y_in: np.ndarray) -> np.ndarray:
        return hermitian(phi - np.outer(y_out, y_out.conj()) + np.outer(y_in, y_in.conj()))
