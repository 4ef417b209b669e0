import random

import numpy as np
import pytest

from conftest import make_cover, max_secret_bytes, random_keys
from rdhkit import pipeline
from rdhkit.errors import (
    BadCrc,
    BadMagic,
    BadPadding,
    BadVersion,
    CapacityExceeded,
    CoverTooSmall,
    HeaderChecksum,
    MissingSegment,
    NoZeroBin,
)
from rdhkit.pipeline import (
    PayloadFrame,
    SideHeader,
    StegoKeys,
    build_frames,
    frame_num_bits,
    hide,
    max_embeddable_bits,
    parse_frame,
    recover_original,
    recover_plane,
    reserve_room,
    reserve_room_plane,
    reveal,
)

KEYS = StegoKeys(data_key=bytes(range(16)), image_key=b"image key bytes", nonce=77)
IV = bytes(range(16, 32))


# --- payload frames -------------------------------------------------------


def test_frame_roundtrip():
    frame = PayloadFrame(2, 5, IV, b"cipher bytes here")
    parsed = parse_frame(frame.serialize())
    assert parsed == frame
    assert frame.num_bits == 8 * (33 + len(b"cipher bytes here"))


def test_frame_parse_ignores_trailing_bytes():
    frame = PayloadFrame(0, 1, IV, b"xyz")
    assert parse_frame(frame.serialize() + b"garbage after") == frame


def test_random_bits_never_parse():
    rng = random.Random(2001)
    for _ in range(10_000):
        with pytest.raises(BadMagic):
            parse_frame(rng.randbytes(64))


def test_flipped_bit_fails_crc():
    raw = bytearray(PayloadFrame(0, 1, IV, b"payload").serialize())
    raw[20] ^= 0x01
    with pytest.raises(BadCrc):
        parse_frame(bytes(raw))


def test_unsupported_version():
    raw = bytearray(PayloadFrame(0, 1, IV, b"").serialize())
    raw[4] = 9
    with pytest.raises(BadVersion):
        parse_frame(bytes(raw))


def test_truncated_frame_stream():
    raw = PayloadFrame(0, 1, IV, b"0123456789").serialize()
    with pytest.raises(BadCrc):
        parse_frame(raw[:-4])
    with pytest.raises(BadMagic):
        parse_frame(raw[:8])


# --- side header ----------------------------------------------------------


def test_side_header_roundtrip():
    header = SideHeader(peak=200, zero=17, region_a_bits=123456)
    packed = header.pack()
    assert len(packed) == 8
    assert SideHeader.unpack(packed) == header


def test_side_header_checksum_detects_damage():
    packed = bytearray(SideHeader(1, 2, 3).pack())
    packed[2] ^= 0x40
    with pytest.raises(HeaderChecksum):
        SideHeader.unpack(bytes(packed))


def test_side_header_rejects_equal_bins():
    body = bytes([9, 9]) + (50).to_bytes(4, "big")
    packed = body + pipeline._ones_complement_sum(body).to_bytes(2, "big")
    with pytest.raises(HeaderChecksum):
        SideHeader.unpack(packed)


# --- frame building -------------------------------------------------------


def test_single_unit_single_frame():
    frames = build_frames(b"hello", KEYS.data_key, IV, [10_000])
    assert len(frames) == 1
    assert frames[0].segment_index == 0
    assert frames[0].segment_count == 1
    assert frames[0].iv == IV


def test_empty_secret_is_one_padded_block():
    frames = build_frames(b"", KEYS.data_key, IV, [10_000])
    assert len(frames) == 1
    assert len(frames[0].ciphertext) == 16


def test_greedy_split_matches_packing_oracle():
    secret = bytes(random.Random(6).randbytes(60))
    capacities = [900, 2000]
    frames = build_frames(secret, KEYS.data_key, IV, capacities)
    ciphertext = b"".join(f.ciphertext for f in frames)

    # brute-force oracle: unit u takes the largest piece whose frame fits
    remaining = len(ciphertext)
    expect_sizes = []
    for cap in capacities:
        best = 0
        for take in range(remaining + 1):
            if frame_num_bits(take) <= cap:
                best = take
        expect_sizes.append(min(best, remaining))
        remaining -= expect_sizes[-1]
    assert remaining == 0
    assert [len(f.ciphertext) for f in frames] == expect_sizes
    assert [f.segment_index for f in frames] == list(range(len(expect_sizes)))
    assert all(f.segment_count == len(frames) for f in frames)


def test_build_frames_capacity_error_reports_numbers():
    with pytest.raises(CapacityExceeded) as info:
        build_frames(b"x" * 1000, KEYS.data_key, IV, [400])
    assert info.value.needed > info.value.available


# --- room reservation -----------------------------------------------------


def test_reserve_recover_plane_roundtrip():
    rng = np.random.default_rng(21)
    for _ in range(20):
        plane = (50 + rng.integers(0, 2, size=800)).astype(np.uint8)
        nbits = int(rng.integers(0, 120))
        reserved, side = reserve_room_plane(plane, nbits)
        assert side.payload_bits == 64 + nbits
        # region A untouched by reservation itself
        assert np.array_equal(reserved[:nbits], plane[:nbits])
        restored = recover_plane(reserved, nbits)
        assert np.array_equal(restored, plane)


def test_reserve_room_zero_length_region():
    rng = np.random.default_rng(22)
    plane = (9 + rng.integers(0, 2, size=300)).astype(np.uint8)
    reserved, _ = reserve_room_plane(plane, 0)
    assert not np.array_equal(reserved, plane)  # header still written
    assert np.array_equal(recover_plane(reserved, 0), plane)


def test_reserve_room_image_level_touches_only_red():
    rng = np.random.default_rng(23)
    img = make_cover(rng, 32, 32)
    reserved, _ = reserve_room(img, 100)
    assert np.array_equal(reserved[:, :, 1:], img[:, :, 1:])
    assert not np.array_equal(reserved[:, :, 0], img[:, :, 0])


def test_reserve_room_cover_too_small():
    plane = np.full(64, 5, dtype=np.uint8)  # an 8x8 red plane
    with pytest.raises(CoverTooSmall):
        reserve_room_plane(plane, 1)


def test_reserve_room_hs_capacity_exceeded():
    # region B exists but its peak bin is far too small for 64+L bits
    plane = np.arange(200, dtype=np.uint8)
    with pytest.raises(CapacityExceeded):
        reserve_room_plane(plane, 64)


def test_reserve_room_no_zero_bin():
    plane = np.tile(np.arange(256, dtype=np.uint8), 4)
    with pytest.raises(NoZeroBin):
        reserve_room_plane(plane, 8)


def test_max_embeddable_bits_is_the_exact_boundary():
    rng = np.random.default_rng(24)
    for _ in range(10):
        plane = (100 + rng.integers(0, 2, size=int(rng.integers(500, 2000)))).astype(np.uint8)
        limit = max_embeddable_bits(plane)
        reserve_room_plane(plane, limit)  # must succeed
        with pytest.raises((CapacityExceeded, CoverTooSmall)):
            reserve_room_plane(plane, limit + 1)
    assert max_embeddable_bits(np.arange(256, dtype=np.uint8)) is None


# --- hide / reveal --------------------------------------------------------


def test_hide_reveal_roundtrip():
    rng = np.random.default_rng(25)
    cover = make_cover(rng, 48, 48)
    secret = b"meet me at the usual place"
    result = hide(cover, secret, KEYS, iv=IV)
    got, original = reveal(result.image, KEYS)
    assert got == secret
    assert np.array_equal(original, cover)


def test_hide_is_deterministic_given_fixed_inputs():
    rng = np.random.default_rng(26)
    cover = make_cover(rng, 40, 40)
    a = hide(cover, b"abc", KEYS, iv=IV)
    b = hide(cover, b"abc", KEYS, iv=IV)
    assert np.array_equal(a.image, b.image)
    assert a.frame_bits == b.frame_bits


def test_hide_plain_domain_changes_only_red():
    rng = np.random.default_rng(27)
    cover = make_cover(rng, 40, 40)
    result = hide(cover, b"xyz", KEYS, iv=IV, skip_image_encryption=True)
    assert np.array_equal(result.image[:, :, 1:], cover[:, :, 1:])
    assert result.plain_psnr > 30


def test_skip_encryption_roundtrip():
    rng = np.random.default_rng(28)
    cover = make_cover(rng, 40, 40)
    result = hide(cover, b"plain domain", KEYS, iv=IV, skip_image_encryption=True)
    got, original = reveal(result.image, KEYS, skip_image_encryption=True)
    assert got == b"plain domain"
    assert np.array_equal(original, cover)


def test_reveal_needs_matching_nonce():
    rng = np.random.default_rng(29)
    cover = make_cover(rng, 40, 40)
    result = hide(cover, b"s", KEYS, iv=IV)
    wrong = StegoKeys(KEYS.data_key, KEYS.image_key, KEYS.nonce + 1)
    with pytest.raises(HeaderChecksum):
        reveal(result.image, wrong)


def test_wrong_data_key_raises_bad_padding_but_cover_recovers():
    rng = np.random.default_rng(30)
    cover = make_cover(rng, 48, 48)
    result = hide(cover, b"top secret", KEYS, iv=IV)
    wrong = StegoKeys(bytes(16), KEYS.image_key, KEYS.nonce)
    with pytest.raises(BadPadding):
        reveal(result.image, wrong)
    # image recovery is independent of the data key
    original = recover_original(result.image, KEYS.image_key, KEYS.nonce)
    assert np.array_equal(original, cover)


def test_wrong_image_key_raises_header_checksum():
    rng = np.random.default_rng(31)
    cover = make_cover(rng, 48, 48)
    result = hide(cover, b"top secret", KEYS, iv=IV)
    with pytest.raises(HeaderChecksum):
        recover_original(result.image, b"not the image key", KEYS.nonce)
    wrong = StegoKeys(KEYS.data_key, b"not the image key", KEYS.nonce)
    with pytest.raises(HeaderChecksum):
        reveal(result.image, wrong)


def test_reveal_on_unmarked_image():
    rng = np.random.default_rng(32)
    cover = make_cover(rng, 40, 40)
    with pytest.raises(BadMagic):
        reveal(cover, KEYS)


def test_recover_original_on_unmarked_image_fails_header_checksum():
    rng = np.random.default_rng(33)
    cover = make_cover(rng, 40, 40)
    with pytest.raises(HeaderChecksum):
        recover_original(cover, KEYS.image_key, KEYS.nonce)


def test_cover_too_small_for_any_frame():
    tiny = np.zeros((8, 8, 3), dtype=np.uint8)
    with pytest.raises(CoverTooSmall):
        hide(tiny, b"", KEYS, iv=IV)


def test_capacity_accounting_matches_oracle():
    rng = np.random.default_rng(34)
    cover = make_cover(rng, 32, 32, red_spread=2)
    n = 32 * 32
    red = cover[:, :, 0].reshape(-1)

    # brute-force oracle for the largest secret that must succeed:
    # frame bits <= n - 64 and histogram-shift capacity >= 64 + frame bits
    limit_bits = max_embeddable_bits(red)
    for secret_len in range(0, 200, 13):
        secret = rng.bytes(secret_len)
        frames = build_frames(secret, KEYS.data_key, IV, [10**9])
        bits = frames[0].num_bits
        should_fit = bits <= n - 64 and bits <= limit_bits
        if should_fit:
            result = hide(cover, secret, KEYS, iv=IV)
            assert result.frame_bits == bits
        else:
            with pytest.raises((CapacityExceeded, CoverTooSmall)):
                hide(cover, secret, KEYS, iv=IV)


def test_randomized_roundtrips_with_random_keys():
    rng = np.random.default_rng(35)
    for _ in range(15):
        keys = random_keys(rng)
        cover = make_cover(rng, int(rng.integers(32, 80)), int(rng.integers(32, 80)))
        bound = min(max_secret_bytes(cover), 120)
        secret = rng.bytes(int(rng.integers(0, bound + 1)))
        result = hide(cover, secret, keys, iv=rng.bytes(16))
        got, original = reveal(result.image, keys)
        assert got == secret
        assert np.array_equal(original, cover)
        assert np.array_equal(
            recover_original(result.image, keys.image_key, keys.nonce), cover
        )
