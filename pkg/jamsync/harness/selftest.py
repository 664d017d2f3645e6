"""Oracle-equivalence and invariant checks, runnable at a configurable scale."""
import logging
import math
from fractions import Fraction
from typing import Callable, List, NamedTuple, Sequence, Tuple

import attr
import numpy as np

from ..airlink.jammers import complex_gaussian
from ..airlink.structs import JammerSpec
from ..detector.backends import Backend, get_backend
from ..detector.cycles import CycleModel, cycles_per_index
from ..detector.structs import DetectorConfig, SubspaceEstimate, SyncSequence
from ..fxp import (
    DEFAULT_LEDGER,
    FxArray,
    FxComplex,
    FxFormat,
    FxReal,
    Overflow,
    Rounding,
    fx_add,
    fx_cmul,
    quantize,
    quantize_array,
)
from ..kernels.inv_sqrt import inv_sqrt
from ..kernels.prng import XorshiftPair
from ..kernels.pseudonorm import pseudonorm_apply, pseudonorm_exponent
from .config import ExperimentConfig, ScenarioTemplate
from .report import SerPoint
from .trials import sweep_outcomes


logger = logging.getLogger(__name__)

B = K = 16
# fixed-point N/D is compared on dequantized values
FIXED_BOUND_SLACK = 1e-3


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str

    def __str__(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def random_sequence(rng: np.random.Generator) -> SyncSequence:
    return SyncSequence(rng.choice([-1, 1], size=K))


def random_seed_pair(rng: np.random.Generator) -> XorshiftPair:
    s1, s2 = rng.integers(1, 1 << 32, size=2)
    return XorshiftPair(int(s1), int(s2))


def random_unit(rng: np.random.Generator, n: int = B) -> np.ndarray:
    v = complex_gaussian(rng, n)
    return v / np.linalg.norm(v)


def projected_score(Y: np.ndarray, s: np.ndarray, A: np.ndarray) -> float:
    """||P Y s||^2 / ||P Y||_F^2 with the projector P = I - A (A^H A)^-1 A^H formed explicitly."""
    P = np.eye(Y.shape[0]) - A @ np.linalg.inv(A.conj().T @ A) @ A.conj().T
    PY = P @ Y
    return float(np.linalg.norm(PY @ s) ** 2 / np.linalg.norm(PY) ** 2)


def window_terms(backend: Backend, stream: np.ndarray, prng: XorshiftPair):
    samples = backend.ingest(stream)
    phi = backend.phi_init(samples)
    c = backend.correlate(samples)
    subspace, _ = backend.power_subspace(backend.lambda_build(phi, c), prng)
    return backend.score_terms(subspace, phi, c)


def check_score_identity(rng: np.random.Generator, n: int) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        sequence = random_sequence(rng)
        backend = get_backend(DetectorConfig(), sequence)
        Y = complex_gaussian(rng, (B, K))
        a1, a2 = random_unit(rng), random_unit(rng)
        b_tilde = complex(np.vdot(a1, a2))
        subspace = SubspaceEstimate([a1, a2], [a1, a2], [True, True], b_tilde)
        window = list(Y.T)
        terms = backend.score_terms(subspace, backend.phi_init(window), backend.correlate(window))
        expected = projected_score(Y, sequence.as_array(), np.stack([a1, a2], axis=1))
        worst = max(worst, abs(terms.score - expected) / expected)
    return CheckResult("score identity", worst <= 1e-9, f"max relative error {worst:.3g} over {n} windows")


def check_slide_equivalence(rng: np.random.Generator, n: int) -> CheckResult:
    stream = complex_gaussian(rng, (n + K, B))
    sequence = random_sequence(rng)
    details = []
    passed = True
    for name in ("float", "fixed"):
        backend = get_backend(DetectorConfig(backend=name), sequence)
        samples = backend.ingest(stream)
        phi = backend.phi_init(samples[:K])
        mismatches = 0
        worst = 0.0
        for ell in range(n):
            phi = backend.phi_slide(phi, samples[ell], samples[ell + K])
            fresh = backend.phi_init(samples[ell + 1 : ell + 1 + K])
            if name == "fixed":
                mismatches += phi != fresh
            else:
                worst = max(worst, float(np.linalg.norm(phi - fresh) / np.linalg.norm(fresh)))
        if name == "fixed":
            passed &= mismatches == 0
            details.append(f"fixed {mismatches} mismatches")
        else:
            passed &= worst <= 1e-10
            details.append(f"float max relative error {worst:.3g}")
    return CheckResult("sliding equivalence", passed, f"{n} slides: " + ", ".join(details))


def check_score_bound(rng: np.random.Generator, n: int) -> CheckResult:
    lowest, highest = math.inf, -math.inf
    passed = True
    for name, slack in (("float", 1e-6), ("fixed", FIXED_BOUND_SLACK * K)):
        for _ in range(n):
            backend = get_backend(DetectorConfig(backend=name), random_sequence(rng))
            terms = window_terms(backend, complex_gaussian(rng, (K, B)), random_seed_pair(rng))
            ratio = terms.score
            lowest, highest = min(lowest, ratio), max(highest, ratio)
            passed &= -slack <= ratio <= K + slack and float(terms.denominator) > 0
    return CheckResult("score bound", passed, f"N/D within [{lowest:.4f}, {highest:.4f}] over {n} windows per backend")


def check_lambda_psd(rng: np.random.Generator, n: int) -> CheckResult:
    worst = math.inf
    for _ in range(n):
        sequence = random_sequence(rng)
        backend = get_backend(DetectorConfig(), sequence)
        window = list(complex_gaussian(rng, (K, B)))
        lam = backend.lambda_build(backend.phi_init(window), backend.correlate(window))
        worst = min(worst, float(np.linalg.eigvalsh(lam)[0] / np.trace(lam).real))
    return CheckResult("lambda PSD", worst >= -1e-9, f"min eigenvalue / trace {worst:.3g} over {n} instances")


def gapped_psd(rng: np.random.Generator, gap: float = 4.0) -> Tuple[np.ndarray, np.ndarray]:
    Q, _ = np.linalg.qr(complex_gaussian(rng, (B, B)))
    eigenvalues = np.concatenate([[1.0], (1.0 / gap) * 0.5 ** np.arange(B - 1)])
    return (Q * eigenvalues) @ Q.conj().T, Q[:, 0]


def power_alignment(rng: np.random.Generator, n: int, t_max: int) -> float:
    config = DetectorConfig(i_max=1, t_max=t_max)
    backend = get_backend(config, SyncSequence([1] * K))
    aligned = 0
    threshold = 0.9 if t_max <= 2 else 0.999
    for _ in range(n):
        lam, u1 = gapped_psd(rng)
        subspace, _ = backend.power_subspace(lam, random_seed_pair(rng))
        aligned += abs(np.vdot(u1, subspace.a1)) >= threshold
    return aligned / n


def check_power_quality(rng: np.random.Generator, n: int) -> CheckResult:
    two_step = power_alignment(rng, n, 2)
    converged = power_alignment(rng, max(n // 10, 1), 100)
    return CheckResult(
        "power method",
        two_step >= 0.95 and converged == 1.0,
        f"t=2 alignment>=0.9 in {two_step:.1%}, t=100 alignment>=0.999 in {converged:.1%}",
    )


def check_cycles(rng: np.random.Generator, n: int) -> CheckResult:
    total = cycles_per_index(CycleModel())
    return CheckResult("cycle model", total == 268, f"{total} cycles per delay index")


def check_inv_sqrt(rng: np.random.Generator, n: int) -> CheckResult:
    fmt, out = DEFAULT_LEDGER.norm_sq, DEFAULT_LEDGER.isqrt
    worst = 0.0
    for x in np.geomspace(0.25, 16.0, n, endpoint=False):
        xq = quantize(float(x), fmt)
        worst = max(worst, abs(float(inv_sqrt(xq, out)) * math.sqrt(float(xq)) - 1.0))
    return CheckResult("inverse square root", worst <= 2.0 ** -12, f"max relative error {worst:.3g} over {n} points")


def check_pseudonorm(rng: np.random.Generator, n: int) -> CheckResult:
    in_fmt: FxFormat = DEFAULT_LEDGER.lam
    out_fmt = DEFAULT_LEDGER.norm
    passed = True
    for _ in range(n):
        shift = int(rng.integers(0, in_fmt.total_bits - 2))
        re, im = (rng.integers(in_fmt.min_code, in_fmt.max_code + 1, size=B) >> shift for _ in range(2))
        if not (re.any() or im.any()):
            continue
        v = FxArray(re, im, in_fmt)
        out = pseudonorm_apply(v, pseudonorm_exponent(v), out_fmt)
        values = np.concatenate([out.re, out.im]) * out_fmt.lsb
        peak = np.max(np.abs(values))
        passed &= out.fmt == out_fmt and values.min() >= -2 and values.max() < 2 and 1 <= peak < 2
    return CheckResult("pseudonormalization", bool(passed), f"{n} random vectors")


JAMMER_CASES = (("delayed-spoofing", 0.0), ("antenna-switching", 10.0), ("erratic", 20.0), ("barrage", 30.0))


def check_backend_agreement(rng: np.random.Generator, n: int) -> CheckResult:
    tolerance = max(0.03, 3 / n)
    passed = True
    details = []
    for kind, rho_db in JAMMER_CASES:
        base = ExperimentConfig(
            scenario=ScenarioTemplate(snr_db=5.0),
            jammer=JammerSpec(kind=kind, rho_db=rho_db),
            trials=n,
            master_seed=int(rng.integers(1 << 31)),
        )
        fixed = attr.evolve(base, detector=attr.evolve(base.detector, backend="fixed"))
        float_grid, fixed_grid = sweep_outcomes(base, workers=1), sweep_outcomes(fixed, workers=1)
        pairs = [(a, b) for row_a, row_b in zip(float_grid, fixed_grid) for a, b in zip(row_a, row_b)]
        agree = sum(a.declared == b.declared for a, b in pairs) / len(pairs)
        gap = max(
            abs(SerPoint.aggregate(tau, row_a).ser - SerPoint.aggregate(tau, row_b).ser)
            for tau, row_a, row_b in zip(base.tau_grid, float_grid, fixed_grid)
        )
        passed &= agree >= 0.98 and gap <= tolerance
        details.append(f"{kind} {agree:.1%} / {gap:.3f}")
    detail = f"{n} trials, same declaration / max SER gap: " + ", ".join(details)
    return CheckResult("backend agreement", passed, detail)


def exact_requantize(value: Fraction, fmt: FxFormat) -> int:
    scaled = value * (1 << fmt.frac_bits)
    raw = math.floor(scaled) if fmt.rounding is Rounding.TRUNCATE else round(scaled)  # Fraction rounds half to even
    if fmt.overflow is Overflow.SATURATE:
        return min(max(raw, fmt.min_code), fmt.max_code)
    return (raw - fmt.min_code) % (1 << fmt.total_bits) + fmt.min_code


def random_format(rng: np.random.Generator, low: int = 4, high: int = 40) -> FxFormat:
    total = int(rng.integers(low, high + 1))
    return FxFormat(
        total,
        int(rng.integers(0, total)),
        overflow=list(Overflow)[int(rng.integers(2))],
        rounding=list(Rounding)[int(rng.integers(2))],
    )


def random_fx(rng: np.random.Generator, fmt: FxFormat) -> FxReal:
    return FxReal(int(rng.integers(fmt.min_code, fmt.max_code + 1)), fmt)


def check_fx_oracle(rng: np.random.Generator, n: int) -> CheckResult:
    mismatches = 0
    for _ in range(n):
        in_fmt, out_fmt = random_format(rng), random_format(rng, high=64)
        a, b = random_fx(rng, in_fmt), random_fx(rng, in_fmt)
        exact = Fraction(a.raw, 1 << in_fmt.frac_bits) + Fraction(b.raw, 1 << in_fmt.frac_bits)
        mismatches += fx_add(a, b, out_fmt).raw != exact_requantize(exact, out_fmt)

        x = FxComplex(random_fx(rng, in_fmt), random_fx(rng, in_fmt))
        y = FxComplex(random_fx(rng, in_fmt), random_fx(rng, in_fmt))
        xr, xi, yr, yi = (Fraction(v.raw, 1 << in_fmt.frac_bits) for v in (x.re, x.im, y.re, y.im))
        product = fx_cmul(x, y, out_fmt)
        mismatches += product.re.raw != exact_requantize(xr * yr - xi * yi, out_fmt)
        mismatches += product.im.raw != exact_requantize(xr * yi + xi * yr, out_fmt)
    return CheckResult("fixed-point oracle", mismatches == 0, f"{mismatches} mismatches over {n} add/cmul pairs")


def check_quantize_monotone(rng: np.random.Generator, n: int) -> CheckResult:
    passed = True
    for _ in range(8):
        fmt = attr.evolve(random_format(rng, high=48), overflow=Overflow.SATURATE)
        x = np.sort(rng.uniform(2 * fmt.min_value, 2 * fmt.max_value, size=n))
        raws = np.array([quantize(float(v), fmt).raw for v in x], dtype=object)
        passed &= bool(np.all(np.diff(raws) >= 0)) and [int(v) for v in quantize_array(x, fmt)] == list(raws)
    return CheckResult("quantizer monotonicity", passed, f"{n} sorted values over 8 saturating formats")


CHECKS: Sequence[Tuple[Callable[[np.random.Generator, int], CheckResult], int]] = (
    (check_score_identity, 10_000),
    (check_slide_equivalence, 1_000),
    (check_score_bound, 10_000),
    (check_lambda_psd, 1_000),
    (check_power_quality, 1_000),
    (check_cycles, 1),
    (check_inv_sqrt, 1 << 16),
    (check_pseudonorm, 10_000),
    (check_fx_oracle, 100_000),
    (check_quantize_monotone, 10_000),
    (check_backend_agreement, 100),
)


def run_selftest(scale: float = 1.0, seed: int = 0) -> List[CheckResult]:
    results = []
    for check, count in CHECKS:
        n = max(1, int(count * scale))
        result = check(np.random.default_rng([seed, len(results)]), n)
        logger.info("%s", result)
        results.append(result)
    return results
