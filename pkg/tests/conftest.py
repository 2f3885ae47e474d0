import mpmath
import pytest

from ris_subarray.system import LinkBudget, SystemParams, db_to_linear

REF_TX_SNR = db_to_linear(104)


@pytest.fixture
def ref_params():
    """alpha=-80 dB, beta=-60 dB, rho=-95 dB, M=1024."""
    return SystemParams(1e-8, 1e-6, 10**-9.5, 1024)


@pytest.fixture
def strong_direct():
    """rho=-90 dB, L=200, gamma_p=gamma_d=20 dB, B=1, sigma^2=1."""
    return SystemParams(1e-8, 1e-6, 1e-9, 1024), LinkBudget(1.0, 1.0, 100.0, 100.0, 200)


@pytest.fixture
def weak_direct():
    """rho=-110 dB, L=150000, gamma_p=gamma_d=20 dB, B=1, sigma^2=1."""
    return SystemParams(1e-8, 1e-6, 1e-11, 1024), LinkBudget(1.0, 1.0, 100.0, 100.0, 150_000)


# --- independent high-precision oracles written straight from the formulas ---


def mp_energy(params, link, n, variant, dps=50):
    with mpmath.workdps(dps):
        a, b, r = mpmath.mpf(params.alpha), mpmath.mpf(params.beta), mpmath.mpf(params.rho)
        m, n = mpmath.mpf(params.m_elements), mpmath.mpf(n)
        d = mpmath.pi / 4 * (mpmath.sqrt(r) + mpmath.sqrt(a * b * m * n)) ** 2
        if variant == "exact":
            d += (1 - mpmath.pi / 4) * (r + a * b * m)
        s2, B, L = mpmath.mpf(link.noise_power), mpmath.mpf(link.symbol_rate), link.payload_symbols
        return L / B * s2 * link.gamma_d / d + n / B * s2 * link.gamma_p / (a * b * m)


def mp_central_diff(params, link, n, variant, order=1, rel_step=1e-12):
    with mpmath.workdps(60):
        n = mpmath.mpf(n)
        h = n * mpmath.mpf(rel_step)
        f = lambda x: mp_energy(params, link, x, variant, dps=60)
        if order == 1:
            return float((f(n + h) - f(n - h)) / (2 * h))
        return float((f(n + h) - 2 * f(n) + f(n - h)) / h**2)
