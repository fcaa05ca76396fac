import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prioranging.core import TABLE1, partition_codes
from prioranging.ucd import (BadLength, InvalidField, ReservedBitsSet, UcdMessage, apply_ucd,
                             decode_ucd, encode_ucd, params_from_ucd, quantize_fraction,
                             ucd_from_config)

VECTOR = UcdMessage(0, 7, 10, 0, 0, 4, 10, 1)


def pack_oracle(fields):
    """Independent packer: shift fields into one 64-bit integer, MSB first."""
    widths = [8, 8, 8, 8, 8, 8, 8, 2]
    acc = 0
    for value, width in zip(fields, widths):
        acc = (acc << width) | value
    acc <<= 6  # reserved tail
    return acc.to_bytes(8, "big")


def test_all_zero():
    assert encode_ucd(UcdMessage()) == bytes(8)


def test_hand_packed_vector():
    assert encode_ucd(VECTOR).hex().upper() == "00070A0000040A40"
    assert pack_oracle(list(VECTOR.__dict__.values())) == encode_ucd(VECTOR)
    assert decode_ucd(bytes.fromhex("00070A0000040A40")) == VECTOR


def test_quarter_fraction_reserves_eight_of_32():
    p = params_from_ucd(decode_ucd(encode_ucd(VECTOR)), 32)
    assert p.n_hp_codes == 8
    assert len(partition_codes(32, p.alpha).hp_codes) == 8


def test_bad_length():
    with pytest.raises(BadLength):
        decode_ucd(bytes(7))
    with pytest.raises(BadLength):
        decode_ucd(bytes(9))


def test_reserved_bits():
    with pytest.raises(ReservedBitsSet):
        decode_ucd(bytes.fromhex("00070A0000040A41"))


@pytest.mark.parametrize("msg", [
    UcdMessage(ranging_backoff_start=5, ranging_backoff_end=4),
    UcdMessage(ranging_backoff_start_hp=9, ranging_backoff_end_hp=3),
    UcdMessage(request_backoff_start=2, request_backoff_end=1),
    UcdMessage(cdma_code_reservation_fraction_hp=4),
    UcdMessage(config_change_count=256),
])
def test_invalid_fields(msg):
    with pytest.raises(InvalidField):
        encode_ucd(msg)


def test_decode_rejects_inverted_exponents():
    with pytest.raises(InvalidField):
        decode_ucd(bytes.fromhex("0009020000000000"))


@st.composite
def messages(draw):
    def pair():
        a, b = draw(st.integers(0, 255)), draw(st.integers(0, 255))
        return min(a, b), max(a, b)
    cc = draw(st.integers(0, 255))
    (ls, le), (rs, re), (hs, he) = pair(), pair(), pair()
    return UcdMessage(cc, ls, le, rs, re, hs, he, draw(st.integers(0, 3)))


@given(messages())
def test_round_trip_property(msg):
    data = encode_ucd(msg)
    assert data == pack_oracle(list(msg.__dict__.values()))
    assert decode_ucd(data) == msg


def random_message(rng):
    def pair():
        a, b = rng.randrange(256), rng.randrange(256)
        return min(a, b), max(a, b)
    (ls, le), (rs, re), (hs, he) = pair(), pair(), pair()
    return UcdMessage(rng.randrange(256), ls, le, rs, re, hs, he, rng.randrange(4))


def test_round_trip_bulk():
    rng = random.Random(0)
    for _ in range(100_000):
        msg = random_message(rng)
        assert decode_ucd(encode_ucd(msg)) == msg


@pytest.mark.parametrize("v", range(4))
def test_fraction_field_sweep(v):
    msg = UcdMessage(cdma_code_reservation_fraction_hp=v)
    data = encode_ucd(msg)
    assert data[7] == v << 6
    assert decode_ucd(data) == msg
    assert quantize_fraction(params_from_ucd(msg, 32).alpha) == v


def test_params_windows():
    p = params_from_ucd(VECTOR, 32)
    assert (p.rssw_start_hp, p.rssw_start_lp, p.rssw_end) == (16, 128, 1024)


def test_half_split():
    assert params_from_ucd(UcdMessage(cdma_code_reservation_fraction_hp=2), 32).n_hp_codes == 16


def test_zero_fraction_is_rejected_downstream():
    from prioranging.core import InvalidConfig, validate
    p = params_from_ucd(UcdMessage(), 32)
    assert p.alpha == 0 and p.n_hp_codes == 0
    with pytest.raises(InvalidConfig):
        validate(apply_ucd(TABLE1, UcdMessage(ranging_backoff_end=10, ranging_backoff_end_hp=10)))


def test_end_window_takes_minimum():
    msg = UcdMessage(ranging_backoff_end=10, ranging_backoff_end_hp=8)
    assert params_from_ucd(msg, 32).rssw_end == 256


def test_config_round_trip_through_ucd():
    cfg = TABLE1.replace(rssw_start_hp=32, alpha=0.5)
    assert apply_ucd(TABLE1, ucd_from_config(cfg)) == cfg
    with pytest.raises(InvalidField):
        quantize_fraction(0.2)
