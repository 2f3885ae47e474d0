import math

import numpy as np
import pytest

from ris_subarray import kernels
from ris_subarray.channel import ChannelRealization, sample_realization
from ris_subarray.pilots import (
    _csi_ratios,
    csi_loss,
    estimate_channel,
    pilot_matrix,
    pilot_power_for_snr,
    pilot_snr,
    simulate_pilot_rx,
)
from ris_subarray.system import SystemParams


def test_pilot_matrix_two_point():
    np.testing.assert_allclose(pilot_matrix(1), [[1, 1], [1, -1]], atol=1e-15)


def test_pilot_matrix_structure():
    psi = pilot_matrix(3)
    assert psi.shape == (4, 4)
    assert np.all(psi[0] == 1) and np.all(psi[:, 0] == 1)
    np.testing.assert_allclose(np.abs(psi), 1.0, rtol=1e-15)
    gram = psi.conj().T @ psi
    assert np.max(np.abs(gram - 4 * np.eye(4))) < 1e-12


@pytest.mark.parametrize("n", list(range(1, 40)) + [63, 127, 255, 511, 1000, 1023, 1024])
def test_pilot_matrix_scaled_unitary(n):
    psi = pilot_matrix(n)
    gram = psi.conj().T @ psi
    assert np.max(np.abs(gram - (n + 1) * np.eye(n + 1))) < 1e-9


def test_pilot_matrix_is_the_fft():
    h = np.random.default_rng(0).standard_normal(17) + 1j
    np.testing.assert_allclose(pilot_matrix(16) @ h, np.fft.fft(h), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(pilot_matrix(16).conj().T @ h / 17, np.fft.ifft(h), rtol=1e-12, atol=1e-12)


def test_noiseless_rx():
    real = ChannelRealization(1.0 + 0j, np.array([0j]))
    y = simulate_pilot_rx(real, pilot_matrix(1), 4.0, 0.0, np.random.default_rng(0))
    np.testing.assert_allclose(y, [2, 2])

    real = sample_realization(SystemParams(1e-8, 1e-6, 1e-9, 64), 8, np.random.default_rng(1))
    y = simulate_pilot_rx(real, pilot_matrix(8), 3.0, 0.0, np.random.default_rng(0))
    np.testing.assert_array_equal(y, math.sqrt(3.0) * (pilot_matrix(8) @ real.as_vector()))


def test_rx_dimension_mismatch():
    real = ChannelRealization(1.0 + 0j, np.zeros(3, dtype=complex))
    with pytest.raises(ValueError):
        simulate_pilot_rx(real, pilot_matrix(2), 1.0, 1.0, np.random.default_rng(0))


def test_rx_pure_noise_variance():
    rng = np.random.default_rng(2)
    real = ChannelRealization(0j, np.zeros(3, dtype=complex))
    y = np.array([simulate_pilot_rx(real, pilot_matrix(3), 5.0, 0.7, rng) for _ in range(10_000)])
    np.testing.assert_allclose(np.mean(np.abs(y) ** 2, axis=0), 0.7, rtol=0.03)


@pytest.mark.parametrize("n", [1, 7, 31])
def test_noiseless_round_trip(n):
    rng = np.random.default_rng(n)
    psi = pilot_matrix(n)
    worst = 0.0
    for _ in range(100):
        h = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        real = ChannelRealization.from_vector(h)
        est = estimate_channel(simulate_pilot_rx(real, psi, 2.0, 0.0, rng), psi, 2.0).as_vector()
        worst = max(worst, np.max(np.abs(est - h)) / np.max(np.abs(h)))
    assert worst < 1e-10


def _error_samples(n, p_pilot, noise, trials, seed):
    rng = np.random.default_rng(seed)
    psi = pilot_matrix(n)
    real = ChannelRealization(0.3 - 0.1j, np.linspace(-1, 1, n) + 0.5j)
    h = real.as_vector()
    return np.array(
        [estimate_channel(simulate_pilot_rx(real, psi, p_pilot, noise, rng), psi, p_pilot).as_vector() - h for _ in range(trials)]
    )


def test_estimation_error_variance_and_scaling():
    n, noise = 7, 0.5
    err1 = _error_samples(n, 2.0, noise, 10_000, 3)
    err2 = _error_samples(n, 4.0, noise, 10_000, 4)
    v1 = np.mean(np.abs(err1) ** 2, axis=0)
    v2 = np.mean(np.abs(err2) ** 2, axis=0)
    np.testing.assert_allclose(v1, noise / ((n + 1) * 2.0), rtol=0.05)
    assert np.mean(v2) / np.mean(v1) == pytest.approx(0.5, rel=0.05)


def test_estimator_unbiased():
    err = _error_samples(3, 1.0, 1.0, 10_000, 5)
    se = np.sqrt(np.var(err.real, axis=0, ddof=1) / err.shape[0])
    assert np.all(np.abs(err.real.mean(axis=0)) < 3 * se)
    se = np.sqrt(np.var(err.imag, axis=0, ddof=1) / err.shape[0])
    assert np.all(np.abs(err.imag.mean(axis=0)) < 3 * se)


def test_estimate_rejects_zero_power():
    with pytest.raises(ValueError):
        estimate_channel(np.ones(2), pilot_matrix(1), 0.0)


def test_pilot_snr_symmetry_and_values():
    params = SystemParams(1e-8, 1e-6, 1e-14 * 1024 / 4, 1024)
    direct, ris = pilot_snr(params, 4, 2.0, 1.0)
    assert direct == pytest.approx(ris, rel=1e-14)
    ref_params = SystemParams(1e-8, 1e-6, 10**-9.5, 1024)
    assert pilot_snr(ref_params, 1024, 1e12, 1.0)[1] == pytest.approx(10.25, rel=1e-12)
    assert pilot_snr(ref_params, 16, pilot_power_for_snr(ref_params, 16, 55.0, 2.0), 2.0)[1] == pytest.approx(55.0, rel=1e-12)


def test_batched_pipeline_matches_matrix_pipeline():
    """The FFT-batched CSI loss reproduces simulate_pilot_rx + estimate_channel."""
    params = SystemParams(1e-8, 1e-6, 1e-12, 64)
    n, gamma = 16, 3.0
    keys = kernels.trial_keys(9, 77, np.arange(50))
    ratios = _csi_ratios(params, n, gamma, keys)
    psi = pilot_matrix(n)
    p_pilot = pilot_power_for_snr(params, n, gamma)
    h_all = np.empty((50, n + 1), dtype=complex)
    h_all[:, :1] = kernels.complex_normal_batch(keys, 0, 1, params.rho)
    h_all[:, 1:] = kernels.complex_normal_batch(keys, 2, n, params.cascaded_gain / n)
    w_all = kernels.complex_normal_batch(keys, 2 * (n + 1), n + 1, 1.0)
    for t in range(50):
        real = ChannelRealization.from_vector(h_all[t])
        y = simulate_pilot_rx(real, psi, p_pilot, 0.0, None) + w_all[t]
        est = estimate_channel(y, psi, p_pilot)
        c_hat = np.angle(est.subarrays) - np.angle(est.direct)
        achieved = abs(real.direct + np.sum(real.subarrays * np.exp(-1j * c_hat))) ** 2
        best = (abs(real.direct) + np.abs(real.subarrays).sum()) ** 2
        assert ratios[t] == pytest.approx(achieved / best, rel=1e-9)


def test_csi_loss_noiseless_is_perfect():
    params = SystemParams(1e-8, 1e-6, 0.0, 64)
    (est,) = csi_loss(params, 64, [math.inf], trials=200, seed=1)
    assert est.mean == pytest.approx(1.0, abs=1e-10)


def test_csi_loss_outputs_bounded_and_increasing():
    params = SystemParams(1e-8, 1e-6, 1e-12, 256)
    grid = [10 ** (g / 10) for g in range(-20, 41, 10)]
    est = csi_loss(params, 256, grid, trials=400, seed=2)
    for e in est:
        assert 0 < e.mean <= 1 + 1e-12
    for a, b in zip(est, est[1:]):
        assert b.mean >= a.mean - 3 * math.hypot(a.std_error, b.std_error)


def test_csi_loss_per_trial_never_exceeds_max():
    params = SystemParams(1e-8, 1e-6, 1e-12, 128)
    for gamma in (0.01, 1.0, 100.0):
        ratios = _csi_ratios(params, 128, gamma, kernels.trial_keys(3, 1, np.arange(500)))
        assert np.all(ratios > 0) and np.all(ratios <= 1 + 1e-10)


def test_csi_loss_starved_pilots():
    params = SystemParams(1e-8, 1e-6, 0.0, 1024)
    (est,) = csi_loss(params, 1024, [0.01], trials=1000, seed=3)
    assert est.mean < 0.5


def test_csi_loss_degrades_with_more_subarrays():
    # blocked direct path: all loss comes from misaligned reflected paths
    params = SystemParams(1e-8, 1e-6, 0.0, 1024)
    est = [csi_loss(params, n, [10.0], trials=4000, seed=4)[0] for n in (1, 4, 64, 1024)]
    assert est[0].mean == pytest.approx(1.0, abs=1e-12)
    for a, b in zip(est, est[1:]):
        assert b.mean <= a.mean + 3 * math.hypot(a.std_error, b.std_error)
    assert est[-1].mean < est[0].mean


def test_csi_loss_independent_of_workers():
    params = SystemParams(1e-8, 1e-6, 1e-12, 64)
    a = csi_loss(params, 64, [1.0, 100.0], trials=3000, seed=5, workers=1)
    b = csi_loss(params, 64, [1.0, 100.0], trials=3000, seed=5, workers=4)
    assert a == b


def test_csi_loss_rejects_bad_inputs():
    params = SystemParams(1e-8, 1e-6, 0.0, 64)
    with pytest.raises(ValueError):
        csi_loss(params, 64, [0.0], trials=10)
    with pytest.raises(ValueError):
        csi_loss(params, 64, [1.0], trials=0)
    with pytest.raises(ValueError):
        csi_loss(params, 5, [1.0], trials=10)
