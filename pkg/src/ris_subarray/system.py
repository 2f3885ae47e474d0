"""Physical parameters, unit conversion and the feasible subarray counts."""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

MAX_ELEMENTS = 10**6


class ValidationError(ValueError):
    """Raised when one or more parameter invariants are violated.

    ``errors`` holds ``(field, message)`` pairs, one per violated field.
    """

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = list(errors)
        super().__init__("; ".join(f"{name}: {msg}" for name, msg in self.errors))

    @property
    def fields(self) -> list[str]:
        return [name for name, _ in self.errors]


@dataclass(frozen=True)
class SystemParams:
    """Large-scale channel gains (linear) and RIS size.

    alpha is the BS-RIS gain per element, beta the UE-element gain, rho the
    direct UE-BS gain (0 means a blocked direct path).
    """

    alpha: float
    beta: float
    rho: float
    m_elements: int

    @classmethod
    def from_db(cls, alpha_db: float, beta_db: float, rho_db: float, m_elements: int) -> SystemParams:
        return cls(db_to_linear(alpha_db), db_to_linear(beta_db), db_to_linear(rho_db), m_elements)

    @property
    def cascaded_gain(self) -> float:
        """alpha * beta * M, the total average gain collected by the surface."""
        return self.alpha * self.beta * self.m_elements


@dataclass(frozen=True)
class LinkBudget:
    noise_power: float  # W
    symbol_rate: float  # symbols / s
    gamma_p: float  # required pilot SNR, linear
    gamma_d: float  # required data SNR, linear
    payload_symbols: int


def db_to_linear(x_db: float) -> float:
    if not math.isfinite(x_db):
        raise ValueError(f"dB value must be finite, got {x_db!r}")
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if not (x > 0 and math.isfinite(x)):
        raise ValueError(f"linear ratio must be positive and finite, got {x!r}")
    return 10.0 * math.log10(x)


def dbm_to_watts(x_dbm: float) -> float:
    return db_to_linear(x_dbm - 30.0)


def watts_to_dbm(x_w: float) -> float:
    return linear_to_db(x_w) + 30.0


def feasible_subarray_counts(m_elements: int) -> list[int]:
    """Divisors of ``m_elements`` in ascending order (trial division up to sqrt)."""
    m = _as_count(m_elements, "m_elements")
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def check_subarray_count(m_elements: int, n: int) -> int:
    """Return ``n`` if it is a feasible subarray count for ``m_elements``."""
    n = _as_count(n, "n")
    if n > m_elements or m_elements % n:
        raise ValueError(f"N={n} does not divide M={m_elements}")
    return n


def validate(params: SystemParams, link: LinkBudget | None = None):
    """Check every invariant and return the inputs unchanged.

    Raises ``ValidationError`` listing all violated fields at once.
    """
    errors: list[tuple[str, str]] = []

    def positive(obj, name):
        value = getattr(obj, name)
        if not _is_real(value) or not math.isfinite(value) or value <= 0:
            errors.append((name, f"must be a finite positive number, got {value!r}"))

    positive(params, "alpha")
    positive(params, "beta")
    rho = params.rho
    if not _is_real(rho) or not math.isfinite(rho) or rho < 0:
        errors.append(("rho", f"must be a finite non-negative number, got {rho!r}"))
    _check_count(params.m_elements, "m_elements", errors, upper=MAX_ELEMENTS)

    if link is not None:
        for name in ("noise_power", "symbol_rate", "gamma_p", "gamma_d"):
            positive(link, name)
        _check_count(link.payload_symbols, "payload_symbols", errors)

    if errors:
        raise ValidationError(errors)
    return (params, link) if link is not None else params


def _is_real(value) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _check_count(value, name, errors, upper=None):
    if not isinstance(value, numbers.Integral) or isinstance(value, bool) or value < 1:
        errors.append((name, f"must be a positive integer, got {value!r}"))
    elif upper is not None and value > upper:
        errors.append((name, f"must not exceed {upper}, got {value}"))


def _as_count(value, name) -> int:
    errors: list[tuple[str, str]] = []
    _check_count(value, name, errors)
    if errors:
        raise ValueError(errors[0][1])
    return int(value)
