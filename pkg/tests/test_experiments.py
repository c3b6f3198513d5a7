import json
import math
import wave

import numpy as np
import pytest

from multiwl1.core import RestrictedDctSynthesis, dct_inverse
from multiwl1.experiments import (
    AudioConfig,
    ResultTable,
    SyntheticConfig,
    draw_kept_samples,
    export_table,
    feasible_size1,
    gen_sparse_signal,
    import_table_json,
    load_audio,
    load_config,
    lowfreq_bins,
    recover_blocks,
    run_audio_experiment,
    run_synthetic_sweep,
    run_synthetic_trial,
    save_raw_f64,
    snr,
    speech_like_signal,
    verify_partial_support_recovery,
)
from multiwl1.solver import WeightedBPDNProblem, solve_weighted_bpdn

SMALL = dict(N=120, n=50, k=8, size=10, size1=5, trials=3, alpha_grid=(0.7,), omega_grid=(0.3,))


# --- snr and signals ---------------------------------------------------------

def test_snr_examples():
    x = np.array([3.0, 4.0])
    assert snr(x, np.zeros(2)) == 0.0
    e = np.array([1.0, 0.0]) * math.sqrt(2.5)  # ||e||^2 = ||x||^2 / 10
    assert snr(x, x - e) == pytest.approx(10.0)
    assert snr(x, x) == math.inf
    with pytest.raises(ValueError):
        snr(np.zeros(2), x)
    with pytest.raises(ValueError):
        snr(x, np.ones(3))


def test_snr_scale_invariant_and_monotone():
    x = np.array([1.0, -2.0, 0.5])
    xr = np.array([0.9, -2.1, 0.4])
    assert snr(7 * x, 7 * xr) == pytest.approx(snr(x, xr), abs=1e-12)
    assert snr(x, x + 0.1) > snr(x, x + 0.2)


def test_gaussian_signal():
    x = gen_sparse_signal(12, 12, "gaussian", 0)
    assert np.count_nonzero(x) == 12
    a = gen_sparse_signal(50, 5, "gaussian", 3)
    assert np.count_nonzero(a) == 5
    assert np.array_equal(a, gen_sparse_signal(50, 5, "gaussian", 3))
    with pytest.raises(ValueError):
        gen_sparse_signal(5, 6, "gaussian", 0)


def test_power_law_signal():
    x = gen_sparse_signal(200, 10, "power-law", 1, c=1.0, p=1.3)
    mags = np.sort(np.abs(x))[::-1]
    assert np.allclose(mags, np.arange(1, 201) ** -1.3, rtol=1e-14)
    assert (x > 0).any() and (x < 0).any()
    with pytest.raises(ValueError):
        gen_sparse_signal(10, 2, "power-law", 0, p=1.0)
    with pytest.raises(ValueError):
        gen_sparse_signal(10, 2, "laplace", 0)


def test_speech_like_signal_deterministic_and_bounded():
    a = speech_like_signal(4096)
    assert np.array_equal(a, speech_like_signal(4096))
    assert np.max(np.abs(a)) == pytest.approx(1.0)


# --- tables and configs --------------------------------------------------------

def test_one_row_csv(tmp_path):
    t = ResultTable(("a", "b"), [(1, 0.5)])
    export_table(t, tmp_path / "t.csv")
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines == ["a,b", "1,0.5"]


def test_json_round_trip_and_inf(tmp_path):
    t = ResultTable(("omega", "snr", "status"), [(0.1, math.inf, "converged"), (1 / 3, 12.3456789012345, "x")])
    export_table(t, tmp_path / "t.json", "json")
    assert '"inf"' in (tmp_path / "t.json").read_text()
    back = import_table_json(tmp_path / "t.json")
    assert back == t.rounded()
    assert back.rounded() == back
    export_table(t, tmp_path / "t.csv", "csv")
    assert ",inf," in (tmp_path / "t.csv").read_text()


def test_export_errors(tmp_path):
    with pytest.raises(ValueError):
        export_table(ResultTable(("a",), []), tmp_path / "x.csv")
    with pytest.raises(ValueError):
        export_table(ResultTable(("a",), [(1,)]), tmp_path / "x.txt", "xml")
    with pytest.raises(OSError):
        export_table(ResultTable(("a",), [(1,)]), tmp_path / "missing" / "x.csv")


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        SyntheticConfig(k=60, n=50)
    with pytest.raises(ValueError):
        SyntheticConfig(alpha_grid=())
    with pytest.raises(ValueError):
        SyntheticConfig(size1=41)
    with pytest.raises(ValueError):
        AudioConfig(cutoff=30000)
    with pytest.raises(ValueError):
        AudioConfig(keep=0.0)
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"trials": 2, "omega_grid": [0.5]}))
    cfg = load_config(SyntheticConfig, p, seed=4)
    assert cfg.trials == 2 and cfg.omega_grid == (0.5,) and cfg.seed == 4
    p.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ValueError, match="bogus"):
        load_config(SyntheticConfig, p)


# --- synthetic ---------------------------------------------------------------

def test_feasible_size1():
    assert feasible_size1(20, 0.8, 28, 12) == 20
    assert feasible_size1(20, 0.8, 12, 28) == 15
    with pytest.raises(ValueError):
        feasible_size1(5, 1.0, 0, 10)


def test_trial_perfect_estimate_zero_weight():
    cfg = SyntheticConfig(**dict(SMALL, size=8, size1=4, alpha1=1.0))
    rec = run_synthetic_trial(cfg, 1.0, 0.0, 11)
    assert rec.snr_two >= 100.0
    assert rec.alpha_real == 1.0


def test_trial_all_ones_collapse():
    cfg = SyntheticConfig(**dict(SMALL, omega1=1.0))
    rec = run_synthetic_trial(cfg, 0.5, 1.0, 2)
    assert rec.snr_two == pytest.approx(rec.snr_plain, abs=1e-9)
    assert rec.snr_three == pytest.approx(rec.snr_plain, abs=1e-9)


def test_trial_full_scale_finite():
    rec = run_synthetic_trial(SyntheticConfig(), 0.7, 0.3, 0)
    assert all(math.isfinite(v) for v in (rec.snr_plain, rec.snr_two, rec.snr_three))
    assert (rec.alpha_real, rec.alpha1, rec.alpha2) == (0.7, 0.8, 0.6)


def test_sweep_single_cell_equals_trial():
    cfg = SyntheticConfig(**dict(SMALL, trials=1, seed=9))
    table = run_synthetic_sweep(cfg)
    rec = run_synthetic_trial(cfg, 0.7, 0.3, 9)
    row = table.records()[0]
    assert len(table) == 1
    for f in ("snr_plain", "snr_two", "snr_three", "alpha1", "alpha2"):
        assert row[f] == getattr(rec, f)


def test_sweep_shape_and_determinism():
    cfg = SyntheticConfig(**dict(SMALL, alpha_grid=(0.5, 0.7), omega_grid=(0.1, 0.5)))
    a = run_synthetic_sweep(cfg)
    assert len(a) == 4
    assert a == run_synthetic_sweep(cfg)
    raw = run_synthetic_sweep(cfg, raw=True)
    assert len(raw) == 4 * cfg.trials


def test_sweep_noise_flag():
    cfg = SyntheticConfig(**dict(SMALL, epsilon=0.01, noise=True, trials=1))
    rec = run_synthetic_sweep(cfg, raw=True).records()[0]
    assert rec["status_plain"] == "converged"
    assert math.isfinite(rec["snr_plain"])


# --- audio -------------------------------------------------------------------

AUDIO_SMALL = dict(N=256, blocks=3, fs=8000.0, cutoff=1000.0, omega_grid=(0.0, 0.5, 1.0), seed=2)


def test_lowfreq_bins_examples():
    bins = lowfreq_bins(2048, 44100.0, 4000.0)
    assert bins.indices == tuple(range(372))
    assert 371 * 44100 / 4096 <= 4000 < 372 * 44100 / 4096
    assert len(lowfreq_bins(16, 100.0, 100.0 * 15 / 32)) == 16
    assert lowfreq_bins(16, 100.0, 100.0 / 32 - 1e-9).indices == (0,)
    with pytest.raises(ValueError):
        lowfreq_bins(16, 100.0, 50.0)


def test_full_sampling_is_near_exact():
    cfg = AudioConfig(**dict(AUDIO_SMALL, keep=1.0))
    x = speech_like_signal(cfg.N * cfg.blocks, cfg.fs)
    table = run_audio_experiment(cfg, x)
    assert len(table) == 3
    for r in table.records():
        assert r["snr_two"] >= 100 and r["snr_three"] >= 100


def test_first_block_identity_and_parseval():
    cfg = AudioConfig(**AUDIO_SMALL)
    x = speech_like_signal(cfg.N * cfg.blocks, cfg.fs)
    kept = draw_kept_samples(cfg)
    two, _ = recover_blocks(cfg, x, 1.0, "two-set", kept)
    three, _ = recover_blocks(cfg, x, 1.0, "three-set", kept)
    op = RestrictedDctSynthesis(kept[0], cfg.N)
    y = x[kept[0]]
    plain = solve_weighted_bpdn(WeightedBPDNProblem(op, y, cfg.epsilon_rel * np.linalg.norm(y))).x
    assert np.allclose(two[0], plain, atol=1e-9) and np.allclose(three[0], plain, atol=1e-9)
    two_half, _ = recover_blocks(cfg, x, 0.5, "two-set", kept)
    three_half, _ = recover_blocks(cfg, x, 0.5, "three-set", kept)
    assert np.array_equal(two_half[0], three_half[0])
    for c in two:
        assert np.linalg.norm(dct_inverse(c)) == pytest.approx(np.linalg.norm(c), rel=1e-9)


def test_audio_errors():
    cfg = AudioConfig(**AUDIO_SMALL)
    with pytest.raises(ValueError):
        run_audio_experiment(cfg, np.zeros(cfg.N * cfg.blocks - 1))
    sparse = AudioConfig(**dict(AUDIO_SMALL, keep=1.0 / 700))
    with pytest.raises(ValueError, match="keeps no samples"):
        run_audio_experiment(sparse, speech_like_signal(sparse.N * sparse.blocks))
    with pytest.raises(ValueError):
        recover_blocks(cfg, speech_like_signal(cfg.N * cfg.blocks), 0.5, "four-set")


def _write_wav(path, frames, channels=1, width=2, rate=8000):
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(channels)
        fh.setsampwidth(width)
        fh.setframerate(rate)
        fh.writeframes(frames)


def test_load_wav(tmp_path):
    _write_wav(tmp_path / "z.wav", np.zeros(100, dtype="<i2").tobytes(), rate=16000)
    data, rate = load_audio(tmp_path / "z.wav")
    assert rate == 16000 and data.shape == (100,) and not data.any()
    _write_wav(tmp_path / "m.wav", np.array([-32768, 16384], dtype="<i2").tobytes())
    data, _ = load_audio(tmp_path / "m.wav")
    assert data.tolist() == [-1.0, 0.5]


def test_load_wav_rejects(tmp_path):
    _write_wav(tmp_path / "s.wav", np.zeros(8, dtype="<i2").tobytes(), channels=2)
    with pytest.raises(ValueError, match="mono"):
        load_audio(tmp_path / "s.wav")
    (tmp_path / "bad.wav").write_bytes(b"RIFX\x00\x00")
    with pytest.raises(ValueError, match="malformed"):
        load_audio(tmp_path / "bad.wav")


def test_raw_round_trip(tmp_path):
    x = np.random.default_rng(0).standard_normal(33)
    save_raw_f64(tmp_path / "x.f64", x)
    data, rate = load_audio(tmp_path / "x.f64", "raw-f64", rate=44100)
    assert np.array_equal(data, x) and rate == 44100
    with pytest.raises(ValueError):
        load_audio(tmp_path / "x.f64", "raw-f64")


# --- partial support recovery --------------------------------------------------

def test_partial_recovery_exactly_sparse():
    assert verify_partial_support_recovery(128, 64, 10, 5, 10, 0, tail=False) == 1.0
    assert verify_partial_support_recovery(128, 64, 10, 10, 10, 0, tail=False) == 1.0


def test_partial_recovery_validation():
    with pytest.raises(ValueError):
        verify_partial_support_recovery(128, 64, 10, 11, 5, 0)
    with pytest.raises(ValueError):
        verify_partial_support_recovery(128, 64, 10, 5, 0, 0)
