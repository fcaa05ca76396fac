"""Modified UCD message: HP backoff windows and the HP code-reservation fraction.

Fixed 8-octet layout, network order::

    0  config_change_count
    1  ranging_backoff_start      (LP start window = 2**value)
    2  ranging_backoff_end
    3  request_backoff_start      (carried, unused by the simulator)
    4  request_backoff_end        (carried, unused)
    5  ranging_backoff_start_hp
    6  ranging_backoff_end_hp
    7  cdma_code_reservation_fraction_hp in bits 7..6, bits 5..0 reserved (zero)

This is a compact layout of the message fields, not the 802.16 TLV encoding.
"""
from __future__ import annotations

import math
import struct
from dataclasses import asdict, dataclass

from .core import SimConfig

UCD_LENGTH = 8
FRACTION_LEVELS = 4  # 2-bit field
_LAYOUT = struct.Struct(">8B")


class UcdError(ValueError):
    pass


class BadLength(UcdError):
    pass


class ReservedBitsSet(UcdError):
    pass


class InvalidField(UcdError):
    pass


@dataclass(frozen=True)
class UcdMessage:
    config_change_count: int = 0
    ranging_backoff_start: int = 0
    ranging_backoff_end: int = 0
    request_backoff_start: int = 0
    request_backoff_end: int = 0
    ranging_backoff_start_hp: int = 0
    ranging_backoff_end_hp: int = 0
    cdma_code_reservation_fraction_hp: int = 0

    def check(self) -> "UcdMessage":
        for name, value in asdict(self).items():
            limit = FRACTION_LEVELS if name == "cdma_code_reservation_fraction_hp" else 256
            if not isinstance(value, int) or not 0 <= value < limit:
                raise InvalidField(f"{name}={value!r} out of range [0, {limit - 1}]")
        for start, end in (("ranging_backoff_start", "ranging_backoff_end"),
                           ("request_backoff_start", "request_backoff_end"),
                           ("ranging_backoff_start_hp", "ranging_backoff_end_hp")):
            if getattr(self, start) > getattr(self, end):
                raise InvalidField(f"{start} exceeds {end}")
        return self


def encode_ucd(msg: UcdMessage) -> bytes:
    msg.check()
    return _LAYOUT.pack(
        msg.config_change_count,
        msg.ranging_backoff_start,
        msg.ranging_backoff_end,
        msg.request_backoff_start,
        msg.request_backoff_end,
        msg.ranging_backoff_start_hp,
        msg.ranging_backoff_end_hp,
        msg.cdma_code_reservation_fraction_hp << 6,
    )


def decode_ucd(data: bytes) -> UcdMessage:
    if len(data) != UCD_LENGTH:
        raise BadLength(f"UCD message is {UCD_LENGTH} octets, got {len(data)}")
    *octets, last = _LAYOUT.unpack(data)
    if last & 0x3F:
        raise ReservedBitsSet(f"reserved bits set in final octet 0x{last:02X}")
    return UcdMessage(*octets, last >> 6).check()


@dataclass(frozen=True)
class ContentionParams:
    rssw_start_hp: int
    rssw_start_lp: int
    rssw_end: int
    alpha: float
    n_hp_codes: int


def params_from_ucd(msg: UcdMessage, n_codes: int) -> ContentionParams:
    """Windows are ``2**exponent``; the shared end window is the smaller of the two ends."""
    msg.check()
    v = msg.cdma_code_reservation_fraction_hp
    return ContentionParams(
        rssw_start_hp=2 ** msg.ranging_backoff_start_hp,
        rssw_start_lp=2 ** msg.ranging_backoff_start,
        rssw_end=2 ** min(msg.ranging_backoff_end, msg.ranging_backoff_end_hp),
        alpha=v / FRACTION_LEVELS,
        n_hp_codes=math.ceil(n_codes * v / FRACTION_LEVELS),
    )


def quantize_fraction(alpha: float) -> int:
    """Wire value for a reservation fraction; only multiples of 1/4 below 1 are exact."""
    v = round(alpha * FRACTION_LEVELS)
    if not math.isclose(v / FRACTION_LEVELS, alpha) or not 0 <= v < FRACTION_LEVELS:
        raise InvalidField(f"alpha={alpha} is not representable in the 2-bit field")
    return v


def _exponent(window: int, name: str) -> int:
    if window < 1 or window & (window - 1):
        raise InvalidField(f"{name}={window} is not a power of two")
    return window.bit_length() - 1


def ucd_from_config(config: SimConfig, config_change_count: int = 0) -> UcdMessage:
    end = _exponent(config.rssw_end, "rssw_end")
    return UcdMessage(
        config_change_count=config_change_count,
        ranging_backoff_start=_exponent(config.rssw_start_lp, "rssw_start_lp"),
        ranging_backoff_end=end,
        ranging_backoff_start_hp=_exponent(config.rssw_start_hp, "rssw_start_hp"),
        ranging_backoff_end_hp=end,
        cdma_code_reservation_fraction_hp=quantize_fraction(config.alpha),
    ).check()


def apply_ucd(config: SimConfig, msg: UcdMessage) -> SimConfig:
    """Overlay the broadcast contention parameters on ``config``."""
    p = params_from_ucd(msg, config.n_codes)
    return config.replace(rssw_start_hp=p.rssw_start_hp, rssw_start_lp=p.rssw_start_lp,
                          rssw_end=p.rssw_end, alpha=p.alpha)
