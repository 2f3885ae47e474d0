"""Pure-numpy Monte Carlo kernels (fallback for ``_ckernels``).

Random numbers come from a counter-based SplitMix64 construction: every
trial owns a 64-bit key, and the i-th uniform of that trial is
``mix64(key + (i + 1) * GOLDEN)``. Any draw is addressable without touching
the others, so results do not depend on how trials are split across workers.

A complex normal with variance ``v`` at slot ``k`` (relative to ``start``)
consumes counters ``start + 2k`` (modulus) and ``start + 2k + 1`` (phase):
``sqrt(-v log u_a) * exp(2j pi u_b)``.
"""
import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
STREAM_MULT = 0xD1B54A32D192ED03
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(11)
_TWO_M53 = 2.0**-53
TWO_PI = 2.0 * np.pi


def mix64_int(z: int) -> int:
    """SplitMix64 finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix64(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> _S30)
    z = z * _M1
    z = z ^ (z >> _S27)
    z = z * _M2
    return z ^ (z >> _S31)


def trial_keys(seed: int, stream: int, trials) -> np.ndarray:
    """Per-trial keys for ``(seed, stream)``; ``trials`` is an index array."""
    base = mix64_int(mix64_int(seed) ^ ((stream * STREAM_MULT) & MASK64))
    t = np.asarray(trials, dtype=np.uint64)
    return mix64(np.uint64(base) + t * np.uint64(GOLDEN))


def uniforms(keys: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Open-interval uniforms; broadcasts ``keys[:, None]`` against ``counters``."""
    z = keys.astype(np.uint64)[:, None] + (counters.astype(np.uint64) + np.uint64(1)) * np.uint64(GOLDEN)
    bits = mix64(z) >> _S11
    return (bits.astype(np.float64) + 0.5) * _TWO_M53


def complex_normal_batch(keys, start: int, count: int, variance: float) -> np.ndarray:
    """``(len(keys), count)`` CN(0, variance) draws from slots ``start..``."""
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    slots = start + 2 * np.arange(count, dtype=np.uint64)
    mag = np.sqrt(-variance * np.log(uniforms(keys, slots)))
    theta = TWO_PI * uniforms(keys, slots + np.uint64(1))
    out = np.empty(mag.shape, dtype=np.complex128)
    out.real = mag * np.cos(theta)
    out.imag = mag * np.sin(theta)
    return out


def max_snr_batch(keys, direct_variance: float, path_variance: float, n_paths: int) -> np.ndarray:
    """Per-trial ``(|p| + sum_n |Z_n|)^2``.

    ``|p|`` uses slot 0 and ``|Z_n|`` slot ``2n``; only the modulus counters
    are evaluated since the phases cancel at the optimal configuration.
    """
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    direct = np.sqrt(-direct_variance * np.log(uniforms(keys, np.zeros(1, dtype=np.uint64))))[:, 0]
    slots = 2 * np.arange(1, n_paths + 1, dtype=np.uint64)
    paths = np.sqrt(-path_variance * np.log(uniforms(keys, slots)))
    total = direct + paths.sum(axis=1)
    return total * total
