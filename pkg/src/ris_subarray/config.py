"""Flat ``key = value`` experiment configuration files."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

from .montecarlo import DEFAULT_TRIALS
from .snr import SnrVariant
from .system import (
    LinkBudget,
    SystemParams,
    ValidationError,
    db_to_linear,
    dbm_to_watts,
    validate,
)

REQUIRED = (
    "alpha_db",
    "beta_db",
    "rho_db",
    "m_elements",
    "noise_dbm",
    "symbol_rate_hz",
    "gamma_p_db",
    "gamma_d_db",
    "payload_symbols",
)


@dataclass(frozen=True)
class ExperimentConfig:
    alpha_db: float
    beta_db: float
    rho_db: float  # -inf models a blocked direct path
    m_elements: int
    noise_dbm: float
    symbol_rate_hz: float
    gamma_p_db: float
    gamma_d_db: float
    payload_symbols: int
    seed: int = 0
    trials: int = DEFAULT_TRIALS
    variant: SnrVariant = SnrVariant.EXACT
    transmit_snr_db: float = 104.0
    csi_grid_db: tuple[float, ...] = tuple(float(x) for x in range(-20, 41, 2))
    csi_subarrays: int | None = None  # defaults to m_elements

    @property
    def params(self) -> SystemParams:
        rho = 0.0 if self.rho_db == -math.inf else db_to_linear(self.rho_db)
        return SystemParams(db_to_linear(self.alpha_db), db_to_linear(self.beta_db), rho, self.m_elements)

    @property
    def link(self) -> LinkBudget:
        return LinkBudget(
            dbm_to_watts(self.noise_dbm),
            self.symbol_rate_hz,
            db_to_linear(self.gamma_p_db),
            db_to_linear(self.gamma_d_db),
            self.payload_symbols,
        )

    @property
    def transmit_snr(self) -> float:
        return db_to_linear(self.transmit_snr_db)

    @property
    def csi_n(self) -> int:
        return self.m_elements if self.csi_subarrays is None else self.csi_subarrays

    def with_overrides(self, **kw) -> ExperimentConfig:
        kw = {k: v for k, v in kw.items() if v is not None}
        return load_mapping({**self.as_mapping(), **kw}) if kw else self

    def as_mapping(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _float(text):
    value = float(text)
    if math.isnan(value) or math.isinf(value):
        raise ValueError("must be a finite number")
    return value


def _rho(text):
    value = float(text)
    if value == -math.inf:
        return value
    if not math.isfinite(value):
        raise ValueError("must be a finite number or -inf")
    return value


def _int(text):
    if isinstance(text, int) and not isinstance(text, bool):
        return text
    s = str(text).strip()
    try:
        return int(s)
    except ValueError:
        raise ValueError(f"must be an integer, got {s!r}") from None


def _positive_int(text):
    value = _int(text)
    if value < 1:
        raise ValueError(f"must be a positive integer, got {value}")
    return value


def _seed(text):
    value = _int(text)
    if not 0 <= value < 2**64:
        raise ValueError("must be an integer in [0, 2**64)")
    return value


def _trials(text):
    value = _int(text)
    if value < 2:
        raise ValueError("must be at least 2")
    return value


def _grid(text):
    if isinstance(text, (tuple, list)):
        return tuple(_float(x) for x in text)
    s = str(text).strip()
    if ":" in s:
        start, stop, step = (_float(x) for x in s.split(":"))
        if step <= 0 or stop < start:
            raise ValueError("expected start:stop:step with step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(count))
    values = tuple(_float(x) for x in s.split(",") if x.strip())
    if not values:
        raise ValueError("empty grid")
    return values


def _optional_count(text):
    return None if text is None or str(text).strip().lower() in ("", "none") else _positive_int(text)


PARSERS = {
    "alpha_db": _float,
    "beta_db": _float,
    "rho_db": _rho,
    "m_elements": _positive_int,
    "noise_dbm": _float,
    "symbol_rate_hz": _float,
    "gamma_p_db": _float,
    "gamma_d_db": _float,
    "payload_symbols": _positive_int,
    "seed": _seed,
    "trials": _trials,
    "variant": SnrVariant,
    "transmit_snr_db": _float,
    "csi_grid_db": _grid,
    "csi_subarrays": _optional_count,
}


def parse_text(text: str) -> dict[str, str]:
    """Split ``key = value`` lines; ``#`` starts a comment."""
    raw: dict[str, str] = {}
    errors = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            errors.append((f"line {lineno}", f"expected 'key = value', got {line!r}"))
        elif key in raw:
            errors.append((key, f"duplicate key on line {lineno}"))
        else:
            raw[key] = value.strip()
    if errors:
        raise ValidationError(errors)
    return raw


def load_mapping(raw: dict) -> ExperimentConfig:
    errors = []
    values = {}
    for key in raw:
        if key not in PARSERS:
            errors.append((key, "unknown key"))
    for key in REQUIRED:
        if key not in raw:
            errors.append((key, "missing required key"))
    for key, parse in PARSERS.items():
        if key in raw:
            try:
                values[key] = parse(raw[key])
            except (TypeError, ValueError) as exc:
                errors.append((key, str(exc)))
    if errors:
        raise ValidationError(errors)

    cfg = ExperimentConfig(**values)
    try:
        validate(cfg.params, cfg.link)
    except ValidationError as exc:
        errors.extend(exc.errors)
    except (ValueError, OverflowError) as exc:
        errors.append(("config", str(exc)))
    if cfg.csi_subarrays is not None and cfg.m_elements % cfg.csi_subarrays:
        errors.append(("csi_subarrays", f"must divide m_elements={cfg.m_elements}"))
    if errors:
        raise ValidationError(errors)
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    return load_mapping(parse_text(Path(path).read_text()))


