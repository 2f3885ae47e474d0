"""Kernel dispatch: the Cython build when importable, numpy otherwise.

Both backends consume the same keys and counters, so they produce the same
draws up to last-ulp differences between libm and numpy's vectorized math.
"""
from . import _pykernels
from ._pykernels import trial_keys

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

BACKEND = "cython" if _ckernels is not None else "python"
_impl = BACKENDS[BACKEND]


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    if name is None:
        return _impl
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


def complex_normal_batch(keys, start, count, variance):
    return _impl.complex_normal_batch(keys, start, count, variance)


def max_snr_batch(keys, direct_variance, path_variance, n_paths):
    return _impl.max_snr_batch(keys, direct_variance, path_variance, n_paths)


__all__ = ["BACKEND", "BACKENDS", "get_backend", "trial_keys", "complex_normal_batch", "max_snr_batch"]
