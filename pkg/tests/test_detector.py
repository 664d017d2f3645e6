import csv

import numpy as np
import pytest

from jamsync.detector import (
    CycleModel,
    Detector,
    DetectorConfig,
    IndexScore,
    SubspaceEstimate,
    SyncSequence,
    WindowState,
    agc_gain,
    baseline_unmitigated,
    cycles_per_index,
    get_backend,
    throughput,
    write_trace_csv,
)
from jamsync.fxp import DEFAULT_LEDGER, ConfigurationError, FxArray, quantize
from jamsync.harness.selftest import (
    check_lambda_psd,
    check_power_quality,
    check_score_bound,
    check_score_identity,
    check_slide_equivalence,
    gapped_psd,
    projected_score,
)
from jamsync.kernels import XorshiftPair


# 13-symbol Barker code padded to 16: every partial overlap correlates to at most 4
LOW_SIDELOBE = SyncSequence([1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, -1, -1])
B = K = 16


def cn(rng, shape, variance=1.0):
    return np.sqrt(variance / 2) * (rng.normal(size=shape) + 1j * rng.normal(size=shape))


def clean_stream(L=7, length=40, noise=1e-6, seed=0):
    rng = np.random.default_rng(seed)
    h = cn(rng, B)
    stream = cn(rng, (length, B), noise)
    stream[L : L + K] += np.outer(LOW_SIDELOBE.as_array(), h)
    return stream


def jammed_stream(L=20, length=64, rho=1000.0, noise=0.1, seed=1):
    rng = np.random.default_rng(seed)
    stream = cn(rng, (length, B), noise)
    stream += np.sqrt(rho) * cn(rng, (length, 2), 0.5) @ cn(rng, (2, B))
    stream[L : L + K] += np.outer(LOW_SIDELOBE.as_array(), cn(rng, B))
    return stream


def test_sequence():
    assert len(LOW_SIDELOBE) == 16 and LOW_SIDELOBE.energy == 16
    assert SyncSequence.from_seed() == SyncSequence.from_seed()
    assert set(SyncSequence.from_seed(7).symbols) <= {1, -1}
    assert SyncSequence.parse(str(LOW_SIDELOBE)) == LOW_SIDELOBE
    with pytest.raises(ConfigurationError):
        SyncSequence([1, 0, -1])
    with pytest.raises(ConfigurationError):
        SyncSequence.parse("1, x")


@pytest.mark.parametrize(
    "options",
    [{"B": 8}, {"K": 32}, {"i_max": 3}, {"t_max": 0}, {"tau": -1}, {"ring_capacity": 16}, {"backend": "gpu"}],
)
def test_invalid_config(options):
    with pytest.raises(ConfigurationError):
        DetectorConfig(**options)


def test_config_dict():
    config = DetectorConfig(backend="fixed", tau=4.5, prng_seed=(1, 2))
    assert DetectorConfig.from_dict(config.to_dict()) == config
    with pytest.raises(ConfigurationError):
        DetectorConfig.from_dict({"nope": 1})
    with pytest.raises(ConfigurationError):
        DetectorConfig(backend="fixed", subspace="eigh")


def test_sequence_length_must_match():
    with pytest.raises(ConfigurationError):
        Detector(sequence=SyncSequence([1] * 8))


def test_window_state_ring():
    state = WindowState.empty(17)
    for k in range(20):
        state.push(k)
    assert state.first == 3
    assert state.window(3, 4) == [3, 4, 5, 6]
    with pytest.raises(IndexError):
        state.sample(2)


def test_float_phi_init_matches_loop():
    rng = np.random.default_rng(0)
    window = list(cn(rng, (K, B)))
    phi = get_backend(DetectorConfig(), LOW_SIDELOBE).phi_init(window)
    expected = np.zeros((B, B), dtype=complex)
    for y in window:
        for i in range(B):
            for j in range(B):
                expected[i, j] += y[i] * np.conj(y[j])
    np.testing.assert_allclose(phi, expected, atol=1e-12)
    np.testing.assert_array_equal(phi, phi.conj().T)


def test_correlate_and_lambda_on_rank_one_window():
    rng = np.random.default_rng(1)
    h = cn(rng, B)
    window = [s * h for s in LOW_SIDELOBE.symbols]
    backend = get_backend(DetectorConfig(), LOW_SIDELOBE)
    phi = backend.phi_init(window)
    c = backend.correlate(window)
    np.testing.assert_allclose(c, K * h)
    lam = backend.lambda_build(phi, c)
    assert np.abs(lam).max() <= 1e-9 * np.abs(phi).max()
    subspace, _ = backend.power_subspace(np.zeros((B, B), dtype=complex), XorshiftPair(3, 4))
    assert subspace.dimension == 0
    for a in subspace.vectors:
        assert np.linalg.norm(a) == pytest.approx(1.0)


def test_lambda_without_correlation_is_scaled_phi():
    rng = np.random.default_rng(2)
    backend = get_backend(DetectorConfig(), LOW_SIDELOBE)
    phi = backend.phi_init(list(cn(rng, (K, B))))
    np.testing.assert_allclose(backend.lambda_build(phi, np.zeros(B, dtype=complex)), K * phi)


def test_float_power_method_converges():
    lam = np.diag([10.0, 5.0] + [1.0] * (B - 2)).astype(complex)
    backend = get_backend(DetectorConfig(t_max=100), LOW_SIDELOBE)
    subspace, prng = backend.power_subspace(lam, XorshiftPair(11, 12))
    assert subspace.dimension == 2
    assert abs(subspace.a1[0]) >= 0.999
    assert abs(subspace.a2[1]) >= 0.999
    assert abs(subspace.b_tilde) <= 1e-3
    np.testing.assert_allclose(subspace.a1_raw, lam @ subspace.a1, atol=1e-3)
    assert prng != XorshiftPair(11, 12)


def test_fixed_power_method_converges():
    rng = np.random.default_rng(3)
    backend = get_backend(DetectorConfig(backend="fixed", i_max=1, t_max=8), LOW_SIDELOBE)
    for _ in range(50):
        lam, u1 = gapped_psd(rng)
        subspace, _ = backend.power_subspace(FxArray.quantize(lam, DEFAULT_LEDGER.lam), XorshiftPair(5, 6))
        a = subspace.a1.to_complex()
        assert subspace.dimension == 1
        assert abs(np.linalg.norm(a) - 1) <= 2.0 ** -10
        assert abs(np.vdot(u1, a)) / np.linalg.norm(a) >= 0.99


def test_fixed_normalize_rejects_zero():
    backend = get_backend(DetectorConfig(backend="fixed"), LOW_SIDELOBE)
    assert backend.normalize(FxArray.zeros(B, DEFAULT_LEDGER.lam)) is None
    subspace, _ = backend.power_subspace(FxArray.zeros((B, B), DEFAULT_LEDGER.lam), XorshiftPair(1, 2))
    assert subspace.active == (False, False)


def test_collinear_columns_drop_a2():
    backend = get_backend(DetectorConfig(), LOW_SIDELOBE)
    a = np.ones(B, dtype=complex) / 4
    subspace = backend._pair([a, a * 1j], [a, a], [True, True])
    assert subspace.active == (True, False)
    assert subspace.b_tilde == 0


def test_unmitigated_terms():
    rng = np.random.default_rng(4)
    backend = get_backend(DetectorConfig(), LOW_SIDELOBE)
    window = list(cn(rng, (K, B)))
    phi, c = backend.phi_init(window), backend.correlate(window)
    terms = backend.score_terms(backend.empty_subspace(), phi, c)
    assert terms.numerator == pytest.approx(np.linalg.norm(c) ** 2)
    assert terms.denominator == pytest.approx(np.trace(phi).real)


def test_score_matches_explicit_projector():
    rng = np.random.default_rng(5)
    backend = get_backend(DetectorConfig(), LOW_SIDELOBE)
    Y = cn(rng, (B, K))
    a1 = cn(rng, B)
    a1 /= np.linalg.norm(a1)
    subspace = SubspaceEstimate([a1, a1], [a1, a1], [True, False], 0j)
    window = list(Y.T)
    terms = backend.score_terms(subspace, backend.phi_init(window), backend.correlate(window))
    expected = projected_score(Y, LOW_SIDELOBE.as_array(), a1[:, None])
    assert terms.score == pytest.approx(expected, rel=1e-9)


def test_randomized_checks():
    rng = np.random.default_rng(6)
    assert check_score_identity(rng, 50).passed
    assert check_score_bound(rng, 10).passed
    assert check_slide_equivalence(rng, 20).passed
    assert check_lambda_psd(rng, 30).passed
    assert check_power_quality(rng, 200).passed


def test_accepts_boundary():
    float_backend = get_backend(DetectorConfig(), LOW_SIDELOBE)
    assert float_backend.accepts(8.0, 1.0, 8.0)
    assert not float_backend.accepts(7.999, 1.0, 8.0)

    fixed_backend = get_backend(DetectorConfig(backend="fixed"), LOW_SIDELOBE)
    score = DEFAULT_LEDGER.score
    n, d = quantize(8.0, score), quantize(1.0, score)
    assert fixed_backend.accepts(n, d, 8.0)
    assert not fixed_backend.accepts(type(n)(n.raw - 1, score), d, 8.0)


def test_empty_window_is_never_accepted():
    float_backend = get_backend(DetectorConfig(), LOW_SIDELOBE)
    assert float_backend.decide(IndexScore(0, 8.0, 1.0), 8.0)
    assert not float_backend.decide(IndexScore(0, 0.0, 0.0), 0.0)
    assert not float_backend.decide(IndexScore(0, 0.0, -2.8e-14), 8.0)

    fixed_backend = get_backend(DetectorConfig(backend="fixed"), LOW_SIDELOBE)
    score = DEFAULT_LEDGER.score
    minus_one = type(quantize(0.0, score))(-1, score)
    assert not fixed_backend.decide(IndexScore(0, quantize(0.0, score), quantize(0.0, score)), 0.0)
    assert not fixed_backend.decide(IndexScore(0, minus_one, minus_one), 8.0)


@pytest.mark.parametrize("backend", ["float", "fixed"])
def test_silent_stream_is_a_miss(backend):
    detector = Detector(DetectorConfig(backend=backend), LOW_SIDELOBE)
    decision = detector.run(np.zeros((40, B), dtype=np.complex128), tau=0.0)
    assert decision.is_miss
    assert all(s.score == 0.0 for s in decision.scores)


@pytest.mark.parametrize("backend", ["float", "fixed"])
def test_noise_free_stream_declares_true_delay(backend):
    rng = np.random.default_rng(9)
    stream = np.zeros((40, B), dtype=np.complex128)
    stream[7 : 7 + K] = np.outer(LOW_SIDELOBE.as_array(), cn(rng, B))
    detector = Detector(DetectorConfig(backend=backend), LOW_SIDELOBE)
    decision = detector.run(stream, tau=8.0)
    assert decision.declared == 7
    assert all(s.score == 0.0 for s in decision.scores[:7])
    assert decision.scores[-1].score == pytest.approx(K, rel=1e-3)


def test_fixed_slide_is_bit_exact():
    rng = np.random.default_rng(7)
    backend = get_backend(DetectorConfig(backend="fixed"), LOW_SIDELOBE)
    samples = backend.ingest(cn(rng, (K + 1, B)))
    phi = backend.phi_slide(backend.phi_init(samples[:K]), samples[0], samples[K])
    assert phi == backend.phi_init(samples[1:])
    assert backend.phi_slide(phi, samples[3], samples[3]) == phi


def test_fixed_phi_matches_integer_gram():
    rng = np.random.default_rng(8)
    backend = get_backend(DetectorConfig(backend="fixed", agc_rms=None), LOW_SIDELOBE)
    samples = backend.ingest(cn(rng, (K, B)))
    Y = np.stack([y.re for y in samples], axis=1) + 1j * np.stack([y.im for y in samples], axis=1)
    expected = Y @ Y.conj().T
    phi = backend.phi_init(samples)
    np.testing.assert_array_equal(phi.re, expected.real.astype(np.int64))
    np.testing.assert_array_equal(phi.im, expected.imag.astype(np.int64))


def test_ingest_rejects_bad_shape():
    with pytest.raises(ValueError):
        get_backend(DetectorConfig(), LOW_SIDELOBE).ingest(np.zeros((10, 8)))


def test_run_declares_true_delay():
    detector = Detector(sequence=LOW_SIDELOBE)
    stream = clean_stream(L=7)
    decision = detector.run(stream, tau=8.0)
    assert decision.declared == 7
    assert [s.ell for s in decision.scores] == list(range(8))
    assert detector.run(stream, tau=K + 1.0).is_miss
    assert detector.run(stream, tau=0.0).declared == 0


@pytest.mark.parametrize("backend, subspace", [("float", "power"), ("fixed", "power"), ("float", "eigh")])
def test_run_under_jamming(backend, subspace):
    detector = Detector(DetectorConfig(backend=backend, subspace=subspace), LOW_SIDELOBE)
    assert detector.run(jammed_stream(L=20), tau=6.0).declared == 20


def test_unmitigated_baseline_fails_under_jamming():
    decision = baseline_unmitigated(jammed_stream(L=20), LOW_SIDELOBE, tau=6.0)
    assert decision.declared != 20


def test_no_subspace_equals_unmitigated():
    stream = jammed_stream(seed=2)
    plain = Detector(DetectorConfig(i_max=0), LOW_SIDELOBE).trace(stream)
    baseline = Detector(sequence=LOW_SIDELOBE, mitigate=False).trace(stream)
    assert [s.numerator for s in plain] == pytest.approx([s.numerator for s in baseline])


def test_trace_and_first_acceptance():
    detector = Detector(DetectorConfig(ell_max=10), LOW_SIDELOBE)
    stream = clean_stream(L=7)
    scores = detector.trace(stream)
    assert [s.ell for s in scores] == list(range(11))
    assert detector.first_acceptance(scores, 8.0) == 7
    assert scores[7].score == pytest.approx(K, rel=1e-3)
    assert len(Detector(sequence=LOW_SIDELOBE).trace(stream)) == len(stream) - K + 1


def test_short_stream_rejected():
    with pytest.raises(ConfigurationError):
        Detector(sequence=LOW_SIDELOBE).run(np.zeros((K - 1, B)))


def test_step_slides_until_accepted():
    detector = Detector(sequence=LOW_SIDELOBE)
    samples = detector.backend.ingest(clean_stream(L=0))
    state = detector.phi_init(samples[:K])
    score, accepted, prng = detector.step(state, detector.config.prng_seed, samples[K], 8.0)
    assert accepted and score.ell == 0 and state.ell == 0
    score, accepted, _ = detector.step(state, prng, samples[K], None)
    assert not accepted and state.ell == 1


def test_cycle_model():
    assert cycles_per_index(CycleModel()) == 268
    assert cycles_per_index(CycleModel.only(["power_matvec"])) == 76
    assert cycles_per_index(CycleModel.only([])) == 0
    assert throughput(CycleModel(), 268e6) == pytest.approx(1e6)
    assert throughput(CycleModel(), 268e6, instances=4) == pytest.approx(4e6)
    assert CycleModel().by_kind()["matvec"] == 95
    assert "per index" in CycleModel().table()
    with pytest.raises(ConfigurationError):
        throughput(CycleModel.only([]), 1e9)
    with pytest.raises(ConfigurationError):
        CycleModel([("bad", "matvec", -1)])


def test_agc_gain():
    assert agc_gain(np.full((4, 16), 2.0 + 0j)) == pytest.approx(0.5)
    assert agc_gain(np.zeros((4, 16))) == 1.0
    assert agc_gain(np.full((4, 16), 1j), target_rms=3.0) == pytest.approx(3.0)


def test_write_trace_csv(tmp_path):
    path = tmp_path / "trace.csv"
    write_trace_csv([IndexScore(0, 1.0, 2.0), IndexScore(1, 4.0, 0.0)], path, declared=1)
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    assert rows == [
        ["ell", "N", "D", "score", "declared"],
        ["0", "1.000000", "2.000000", "0.500000", "0"],
        ["1", "4.000000", "0.000000", "0.000000", "1"],
    ]


def test_fixed_trace_tracks_float():
    stream = jammed_stream(L=20, seed=3)
    exact = Detector(sequence=LOW_SIDELOBE).trace(stream)
    fixed = Detector(DetectorConfig(backend="fixed"), LOW_SIDELOBE).trace(stream)
    np.testing.assert_allclose([s.score for s in fixed], [s.score for s in exact], rtol=0.05, atol=0.2)
