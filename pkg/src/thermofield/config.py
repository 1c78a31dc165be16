"""Run configuration: flat key = value files, flag overrides, validation.

The file format is deliberately primitive — one ``key = value`` pair per
line, ``#`` comments, no sections — so any tool can write it.  Exactly one of
{nbar, temperature} may be given; the other is derived through the Planck
law.  Validation errors carry the offending field name.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

__all__ = ["ConfigError", "RunConfig", "parse_config", "read_config_file"]


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class RunConfig:
    scenario: str = "oscillator-nonunitary"
    omega: float = 1.0
    kappa: float = 0.5
    nbar: float | None = None
    temperature: float | None = None
    n0: float = 0.0
    m: float = 1.0
    nu: float = 0.5
    x0: float = 1.0
    p0: float = 0.0
    cutoff: int = 30
    guard: int = 3
    dt: float = 1e-3
    t_end: float | None = None
    ensemble: int = 10000
    seed: int = 7
    threads: int = 1
    out: str = "."

    def resolved_nbar(self) -> float:
        from .dynamics import planck_nbar

        if self.nbar is not None:
            return self.nbar
        if self.temperature is not None:
            return planck_nbar(self.omega, self.temperature)
        return 1.0

    def resolved_t_end(self) -> float:
        if self.t_end is not None:
            return self.t_end
        return 5.0 / self.kappa if self.kappa > 0 else 5.0


_FLOAT_FIELDS = {"omega", "kappa", "nbar", "temperature", "n0", "m", "nu", "x0", "p0", "dt", "t_end"}
_INT_FIELDS = {"cutoff", "guard", "ensemble", "seed", "threads"}
_STR_FIELDS = {"scenario", "out"}

_SCENARIOS = (
    "oscillator-nonunitary",
    "oscillator-unitary",
    "kramers-nonunitary",
    "kramers-unitary",
)


def read_config_file(path) -> dict:
    """Parse a flat key = value file with # comments into a raw dict."""
    raw = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}", f"expected key = value, got {line.strip()!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        raw[key] = value
    return raw


def _convert(key: str, value):
    if value is None:
        return None
    try:
        if key in _FLOAT_FIELDS:
            return float(value)
        if key in _INT_FIELDS:
            return int(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(key, f"cannot parse {value!r}") from None


def parse_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Build a validated RunConfig from an optional file plus overrides.

    Overrides (command-line flags) win over file entries; unknown keys and
    out-of-range values raise ConfigError with the field path.
    """
    merged: dict = {}
    if path is not None:
        merged.update(read_config_file(path))
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    known = {f.name for f in fields(RunConfig)}
    cfg_kwargs = {}
    for key, value in merged.items():
        if key not in known:
            raise ConfigError(key, "unknown configuration key")
        cfg_kwargs[key] = _convert(key, value)
    cfg = RunConfig(**cfg_kwargs)

    if cfg.nbar is not None and cfg.temperature is not None:
        raise ConfigError("nbar", "give exactly one of nbar and temperature")
    if cfg.scenario not in _SCENARIOS:
        raise ConfigError("scenario", f"must be one of {_SCENARIOS}")
    if cfg.omega <= 0:
        raise ConfigError("omega", "must be positive")
    if cfg.kappa < 0:
        raise ConfigError("kappa", "must be >= 0")
    if cfg.nbar is not None and cfg.nbar < 0:
        raise ConfigError("nbar", "must be >= 0")
    if cfg.temperature is not None and cfg.temperature <= 0:
        raise ConfigError("temperature", "must be positive")
    if cfg.n0 < 0:
        raise ConfigError("n0", "must be >= 0")
    if cfg.m <= 0:
        raise ConfigError("m", "must be positive")
    if not 0.0 <= cfg.nu <= 1.0:
        raise ConfigError("nu", "must lie in [0, 1]")
    if cfg.cutoff < 2 or cfg.guard < 0 or cfg.guard >= cfg.cutoff:
        raise ConfigError("cutoff", "need cutoff >= 2 and 0 <= guard < cutoff")
    if cfg.dt <= 0:
        raise ConfigError("dt", "must be positive")
    if cfg.t_end is not None and cfg.t_end <= 0:
        raise ConfigError("t_end", "must be positive")
    if cfg.ensemble < 1:
        raise ConfigError("ensemble", "must be >= 1")
    if cfg.threads < 1:
        raise ConfigError("threads", "must be >= 1")
    return cfg
