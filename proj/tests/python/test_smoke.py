import numpy as np
import pytest

import unitone as ut


def test_qft_operator_is_unitary_and_mirrors_dft():
    op = ut.Operator.qft(128)
    assert ut.unitarity_defect(op) < 1e-10
    u = op.matrix()
    n = np.arange(128)
    expected = np.exp(2j * np.pi * np.outer(n, n) / 128) / np.sqrt(128)
    assert np.max(np.abs(u - expected)) < 1e-12

    rng = np.random.default_rng(1)
    x = rng.uniform(-1, 1, 128)
    q = op.forward(x)
    d = np.fft.fft(x)
    assert np.allclose(q, d[(-n) % 128] / np.sqrt(128), atol=1e-12)
    assert np.allclose(ut.Operator.dft(128).forward(x), d, atol=1e-10)
    assert np.allclose(op.inverse(q).real, x, atol=1e-12)


def test_windows_and_framing():
    w = ut.make_window("hann", 8)
    assert w[0] == 0.0
    assert np.allclose(w, 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(8) / 8))
    frames = ut.frame_signal(np.ones(300), 128, 64, "rectangular")
    assert frames.shape == (ut.frame_count(300, 128, 64), 128)
    assert frames.shape[0] == 4


def test_gain_rules():
    assert ut.wiener_gain([2.0], [1.0])[0] == pytest.approx(0.5, abs=1e-9)
    g = ut.spectral_subtraction_gain([0.5, 10.0], [1.0, 1.0])
    assert g[0] == 0.02
    assert g[1] == pytest.approx(1 - 1.5 / 10.0)


def test_denoise_improves_tone_in_noise():
    clean = ut.gen_sinusoid(440, 1.0)
    mix = ut.mix_at_snr(clean, ut.gen_white_noise(2024, 1.0), 0.0)
    assert mix["achieved_snr_db"] == pytest.approx(0.0, abs=0.01)
    for rule in ("wiener", "ss"):
        out = {b: ut.denoise(mix["noisy"], mix["noise"], rule=rule, basis=b) for b in ("dft", "qft")}
        assert ut.delta_snr(mix["clean"], mix["noisy"], out["dft"]) > 3.0
        assert np.max(np.abs(out["dft"] - out["qft"])) < 1e-6


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(ValueError):
        ut.denoise(np.zeros(400), None)
    with pytest.raises(ValueError):
        ut.denoise(np.zeros(400), np.zeros(400), basis="bogus")
    with pytest.raises(ut.IoError):
        ut.read_wav(tmp_path / "missing.wav")
    bad = tmp_path / "bad.wav"
    bad.write_bytes(b"not a wav file at all, definitely")
    with pytest.raises(ut.UnsupportedFormat):
        ut.read_wav(bad)


def test_wav_round_trip(tmp_path):
    x = ut.gen_speech_like(3, 0.2)
    p = tmp_path / "s.wav"
    assert ut.write_wav(p, x) == 0
    y, rate = ut.read_wav(p)
    assert rate == 16000
    assert np.max(np.abs(x - y)) <= 1 / 32768


def test_small_experiment_is_deterministic():
    a = ut.experiment_csv(duration_s=0.25, snr_grid=[0.0], threads=2)
    b = ut.experiment_csv(duration_s=0.25, snr_grid=[0.0], threads=1)
    assert a == b
    lines = a.strip().splitlines()
    assert lines[0].startswith("mixture_id,clean_id")
    assert len(lines) == 1 + 18 * 4
