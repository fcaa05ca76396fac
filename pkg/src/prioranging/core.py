"""Configuration, validation and the HP/LP ranging-code partition."""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional


class InvalidConfig(ValueError):
    """Raised by :func:`validate` naming the first violated constraint."""


class Priority(enum.Enum):
    HIGH = "high"
    LOW = "low"


OVERFLOW_POLICIES = ("uniform", "first-k-by-code-index")
SUCCESS_AT = ("transmit", "response")
INITIAL_DEFER = ("window", "immediate")
DEFER_UNITS = ("opportunity", "frame")


@dataclass(frozen=True)
class SimConfig:
    """One experiment. Defaults are the Table 1 baseline with the p_a=0.1 optimum windows.

    Windows are counted in ranging opportunities. ``beta=None`` means no
    detection cap.
    """

    total_stations: int = 200
    arrival_prob: float = 0.1
    hp_fraction: float = 0.2
    opportunities_per_frame: int = 5
    n_codes: int = 32
    alpha: float = 0.25
    rssw_start_hp: int = 16
    rssw_start_lp: int = 128
    rssw_end: int = 1024
    frame_duration_ms: float = 5.0
    t3_ms: float = 20.0
    beta: Optional[int] = 4
    n_frames: int = 100
    max_retries: Optional[int] = None
    seed: int = 0
    # engine policy knobs
    overflow_policy: str = "uniform"
    t3_inclusive: bool = False
    success_at: str = "transmit"
    initial_defer: str = "window"
    defer_unit: str = "opportunity"

    @property
    def t3_frames(self) -> int:
        return int(round(self.t3_ms / self.frame_duration_ms))

    @property
    def n_hp(self) -> int:
        # ceil so that any positive fraction yields at least one HP station
        return min(self.total_stations, math.ceil(self.total_stations * self.hp_fraction - 1e-9))

    @property
    def n_lp(self) -> int:
        return self.total_stations - self.n_hp

    def rssw_start(self, priority: Priority) -> int:
        return self.rssw_start_hp if priority is Priority.HIGH else self.rssw_start_lp

    def priority_of(self, station_id: int) -> Priority:
        return Priority.HIGH if station_id < self.n_hp else Priority.LOW

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)


TABLE1 = SimConfig()


@dataclass(frozen=True)
class CodePartition:
    hp_codes: range
    lp_codes: range = field(default=range(0))

    @property
    def n_codes(self) -> int:
        return len(self.hp_codes) + len(self.lp_codes)

    def codes_for(self, priority: Priority) -> range:
        return self.hp_codes if priority is Priority.HIGH else self.lp_codes


def reserved_code_count(n_codes: int, alpha: float) -> int:
    """Number of initial-ranging codes reserved for HP stations, ``ceil(N * alpha)``."""
    # Fraction keeps 32 * 0.2 from landing a hair above 6.4 due to binary floats
    return math.ceil(Fraction(n_codes) * Fraction(str(alpha)))


def partition_codes(n_codes: int, alpha: float) -> CodePartition:
    r = reserved_code_count(n_codes, alpha)
    return CodePartition(hp_codes=range(0, r), lp_codes=range(r, n_codes))


def _is_pow2(n: int) -> bool:
    return isinstance(n, int) and n >= 1 and n & (n - 1) == 0


def rssw_ratio(config: SimConfig) -> Fraction:
    """HP/LP start-window ratio x/y in lowest terms."""
    return Fraction(config.rssw_start_hp, config.rssw_start_lp)


def validate(config: SimConfig, differentiated: bool = False) -> SimConfig:
    """Check every configuration constraint and return ``config`` unchanged.

    With ``differentiated=True`` the HP start window must also be strictly
    smaller than the LP one.
    """
    c = config
    checks = [
        (c.total_stations >= 1, "total_stations must be >= 1"),
        (0 < c.arrival_prob <= 1, "arrival_prob must be in (0, 1]"),
        (0 <= c.hp_fraction <= 1, "hp_fraction must be in [0, 1]"),
        (0 <= c.alpha <= 1, "alpha must be in [0, 1]"),
        (c.opportunities_per_frame >= 1, "opportunities_per_frame must be >= 1"),
        (c.n_codes >= 1, "n_codes must be >= 1"),
        (_is_pow2(c.rssw_start_hp), "rssw_start_hp must be a power of two >= 1"),
        (_is_pow2(c.rssw_start_lp), "rssw_start_lp must be a power of two >= 1"),
        (_is_pow2(c.rssw_end), "rssw_end must be a power of two >= 1"),
        (c.rssw_start_hp <= c.rssw_end, "rssw_start_hp must be <= rssw_end"),
        (c.rssw_start_lp <= c.rssw_end, "rssw_start_lp must be <= rssw_end"),
        (not differentiated or c.rssw_start_hp < c.rssw_start_lp,
         "rssw_start_hp must be < rssw_start_lp for a differentiated config"),
        (c.frame_duration_ms > 0, "frame_duration_ms must be > 0"),
        (c.t3_ms > 0 and math.isclose(c.t3_ms / c.frame_duration_ms,
                                      round(c.t3_ms / c.frame_duration_ms), abs_tol=1e-9),
         "t3_ms must be a positive integer multiple of frame_duration_ms"),
        (c.beta is None or 1 <= c.beta <= c.n_codes, "beta must be in [1, n_codes] or None"),
        (c.n_frames >= 1, "n_frames must be >= 1"),
        (c.max_retries is None or c.max_retries >= 0, "max_retries must be >= 0 or None"),
        (0 <= c.seed < 2**64, "seed must fit in 64 bits"),
        (c.hp_fraction == 0 or reserved_code_count(c.n_codes, c.alpha) >= 1,
         "alpha reserves no codes but HP stations exist"),
        (c.hp_fraction == 1 or c.n_codes - reserved_code_count(c.n_codes, c.alpha) >= 1,
         "alpha leaves no codes but LP stations exist"),
        (c.overflow_policy in OVERFLOW_POLICIES, f"overflow_policy must be one of {OVERFLOW_POLICIES}"),
        (c.success_at in SUCCESS_AT, f"success_at must be one of {SUCCESS_AT}"),
        (c.initial_defer in INITIAL_DEFER, f"initial_defer must be one of {INITIAL_DEFER}"),
        (c.defer_unit in DEFER_UNITS, f"defer_unit must be one of {DEFER_UNITS}"),
    ]
    for ok, message in checks:
        if not ok:
            raise InvalidConfig(message)
    return config


# ---------------------------------------------------------------------------
# key = value config files

_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(SimConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    if "Optional" in kind:
        if raw.lower() in ("none", "inf", "unbounded", ""):
            return None
        return int(raw)
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if kind == "bool":
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise InvalidConfig(f"{key}: not a boolean: {raw!r}")
    return raw


def parse_config_text(text: str, base: SimConfig = TABLE1, extra_keys=()) -> tuple[SimConfig, dict]:
    """Parse ``key = value`` lines on top of ``base``.

    Keys in ``extra_keys`` are returned separately (as strings) instead of
    being applied to the config. Unknown keys raise :class:`InvalidConfig`.
    """
    changes, extra = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfig(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in extra_keys:
            extra[key] = value
        elif key in _FIELD_TYPES:
            try:
                changes[key] = _coerce(key, value)
            except ValueError as exc:
                raise InvalidConfig(f"line {lineno}: {key}: {exc}") from None
        else:
            raise InvalidConfig(f"line {lineno}: unknown key {key!r}")
    return base.replace(**changes), extra


def load_config(path: str | Path, base: SimConfig = TABLE1) -> SimConfig:
    config, _ = parse_config_text(Path(path).read_text(), base)
    return config


def format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def dump_config(config: SimConfig) -> str:
    return "".join(
        f"{f.name} = {format_value(getattr(config, f.name))}\n" for f in dataclasses.fields(config)
    )
