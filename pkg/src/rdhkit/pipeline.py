"""End-to-end hide/reveal: framing, room reservation, encrypted-domain embedding.

A host plane (the red channel of a cover, or a video frame's Y plane) is
split row-major into three regions::

    [0, L)       region A   payload frame, one bit per sample LSB
    [L, L+64)    header     side header, one bit per sample LSB
    [L+64, n)    region B   histogram-shift host for the 64+L original LSBs

Room is reserved before encryption: the original LSBs of region A and the
header slots are tucked reversibly into region B, the side header (peak,
zero, L, checksum) overwrites the header-slot LSBs, and only then is the
whole cover encrypted with the Blowfish counter keystream.  The payload
frame is finally substituted into region A's LSBs of the *encrypted* cover.

Decryption restores every bit the embedder did not touch after encrypting,
so the side header becomes readable again while region A stays garbled until
the histogram-shift backup puts the original LSBs back.  Data extraction
never needs the image key (frames are read straight from the encrypted
cover) and image recovery never needs the data key.

The payload frame is self-delimiting, all integers big-endian::

    "RDH1" | version u8 | segment_index u16 | segment_count u16 |
    ct_len u32 | iv 16B | ciphertext | crc32 u32 over everything before it
"""

from __future__ import annotations

import os
import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .aes import aes_cbc_decrypt, aes_cbc_encrypt
from .blowfish import BlowfishState, bf_ctr_transform, bf_key_schedule
from .errors import (
    BadCrc,
    BadMagic,
    BadVersion,
    CapacityExceeded,
    CoverTooSmall,
    DimensionMismatch,
    HeaderChecksum,
    MissingSegment,
    NoZeroBin,
    PayloadError,
)
from .histshift import HsSideInfo, hs_embed, hs_extract, lsb_read, plan_hs
from .huffman import huffman_compress, huffman_decompress
from .metrics import psnr

FRAME_MAGIC = b"RDH1"
FRAME_VERSION = 1
_FRAME_FIXED = struct.Struct(">4sBHHI")  # magic, version, index, count, ct_len
FRAME_OVERHEAD_BYTES = _FRAME_FIXED.size + 16 + 4  # + iv + crc = 33
HEADER_SLOTS = 64
MIN_CIPHERTEXT = 16  # an empty secret still encrypts to one padded block


def frame_num_bits(ct_len: int) -> int:
    return 8 * (FRAME_OVERHEAD_BYTES + ct_len)


@dataclass(frozen=True)
class StegoKeys:
    """Key material for one hide/reveal run."""

    data_key: bytes  # AES-128, 16 bytes
    image_key: bytes  # Blowfish, 4..56 bytes
    nonce: int = 0  # 64-bit counter base for the cover keystream


@dataclass(frozen=True)
class PayloadFrame:
    segment_index: int
    segment_count: int
    iv: bytes
    ciphertext: bytes

    def serialize(self) -> bytes:
        body = _FRAME_FIXED.pack(
            FRAME_MAGIC,
            FRAME_VERSION,
            self.segment_index,
            self.segment_count,
            len(self.ciphertext),
        )
        body += self.iv + self.ciphertext
        return body + struct.pack(">I", zlib.crc32(body))

    @property
    def num_bits(self) -> int:
        return frame_num_bits(len(self.ciphertext))


def parse_frame(data: bytes) -> PayloadFrame:
    """Parse one frame from the start of a packed bit stream; trailing bytes ignored."""
    if len(data) < _FRAME_FIXED.size:
        raise BadMagic(f"stream of {len(data)} bytes cannot hold a frame header")
    magic, version, index, count, ct_len = _FRAME_FIXED.unpack_from(data)
    if magic != FRAME_MAGIC:
        raise BadMagic(f"expected {FRAME_MAGIC!r}, got {magic!r}")
    if version != FRAME_VERSION:
        raise BadVersion(f"unsupported frame version {version}")
    total = FRAME_OVERHEAD_BYTES + ct_len
    if len(data) < total:
        raise BadCrc(f"frame declares {total} bytes, stream holds {len(data)}")
    (crc,) = struct.unpack_from(">I", data, total - 4)
    if crc != zlib.crc32(data[: total - 4]):
        raise BadCrc("frame CRC mismatch: corrupted payload")
    iv = data[_FRAME_FIXED.size : _FRAME_FIXED.size + 16]
    ciphertext = data[_FRAME_FIXED.size + 16 : total - 4]
    return PayloadFrame(index, count, iv, ciphertext)


def build_frames(
    secret: bytes, data_key: bytes, iv: bytes, capacities: list[int]
) -> list[PayloadFrame]:
    """Compress, encrypt and split the secret greedily across embedding units.

    Unit u receives the largest ciphertext slice whose whole frame fits
    capacities[u] bits.  All frames repeat the same IV; CBC runs once over
    the full ciphertext before splitting.
    """
    ciphertext = aes_cbc_encrypt(huffman_compress(secret), data_key, iv)
    pieces: list[bytes] = []
    offset = 0
    for cap in capacities:
        room = cap // 8 - FRAME_OVERHEAD_BYTES
        if room < 0:
            raise CapacityExceeded(
                needed=frame_num_bits(0),
                available=cap,
                detail=f"unit {len(pieces)} cannot hold even an empty frame",
            )
        take = min(room, len(ciphertext) - offset)
        pieces.append(ciphertext[offset : offset + take])
        offset += take
        if offset == len(ciphertext):
            break
    if offset < len(ciphertext):
        usable = 8 * sum(max(0, c // 8 - FRAME_OVERHEAD_BYTES) for c in capacities)
        raise CapacityExceeded(
            needed=8 * len(ciphertext),
            available=usable,
            detail="ciphertext bits vs room left after per-frame overhead",
        )
    count = len(pieces)
    return [PayloadFrame(i, count, iv, piece) for i, piece in enumerate(pieces)]


@dataclass(frozen=True)
class SideHeader:
    """Fixed 8-byte record written into the header-slot LSBs before encryption."""

    peak: int
    zero: int
    region_a_bits: int

    def pack(self) -> bytes:
        body = struct.pack(">BBI", self.peak, self.zero, self.region_a_bits)
        return body + struct.pack(">H", _ones_complement_sum(body))

    @classmethod
    def unpack(cls, data: bytes) -> "SideHeader":
        if len(data) != 8:
            raise HeaderChecksum(f"side header must be 8 bytes, got {len(data)}")
        peak, zero, region_a_bits = struct.unpack_from(">BBI", data)
        (checksum,) = struct.unpack_from(">H", data, 6)
        if checksum != _ones_complement_sum(data[:6]):
            raise HeaderChecksum("side header checksum mismatch: wrong image key or damaged cover")
        if peak == zero:
            raise HeaderChecksum("side header names identical peak and zero bins")
        return cls(peak, zero, region_a_bits)


def _ones_complement_sum(data: bytes) -> int:
    # big-endian 16-bit words with end-around carry, then complemented
    total = 0
    for i in range(0, len(data), 2):
        total += (data[i] << 8) | data[i + 1]
        total = (total & 0xFFFF) + (total >> 16)
    return (~total) & 0xFFFF


def reserve_room_plane(flat: np.ndarray, frame_bits: int) -> tuple[np.ndarray, HsSideInfo]:
    """Room-reserve a flat host plane for a frame_bits-long region A.

    Region A itself is left untouched; its original LSBs plus the header
    slots' original LSBs travel inside region B's histogram shift.
    """
    flat = np.asarray(flat, dtype=np.uint8).reshape(-1)
    n = flat.size
    if frame_bits > n - HEADER_SLOTS:
        raise CoverTooSmall(
            f"plane of {n} samples cannot hold {frame_bits} payload bits plus "
            f"{HEADER_SLOTS} header slots"
        )
    header_end = frame_bits + HEADER_SLOTS
    region_b = flat[header_end:]
    backup_bits = HEADER_SLOTS + frame_bits
    if region_b.size == 0:
        raise CapacityExceeded(needed=backup_bits, available=0, detail="region B is empty")
    peak, zero, capacity = plan_hs(region_b)
    if capacity < backup_bits:
        raise CapacityExceeded(
            needed=backup_bits, available=capacity, detail="histogram-shift capacity in region B"
        )
    backup = np.concatenate(
        [
            lsb_read(flat, frame_bits, HEADER_SLOTS),
            lsb_read(flat, 0, frame_bits),
        ]
    )
    out = flat.copy()
    out[header_end:] = hs_embed(region_b, backup, peak, zero)
    header = SideHeader(peak, zero, frame_bits).pack()
    out[frame_bits:header_end] = _with_lsbs(
        flat[frame_bits:header_end], np.unpackbits(np.frombuffer(header, np.uint8))
    )
    return out, HsSideInfo(peak, zero, backup_bits)


def recover_plane(flat: np.ndarray, frame_bits: int) -> np.ndarray:
    """Invert reserve_room_plane given the frame length in bits."""
    flat = np.asarray(flat, dtype=np.uint8).reshape(-1)
    n = flat.size
    if frame_bits > n - HEADER_SLOTS:
        raise HeaderChecksum(
            f"declared region of {frame_bits} bits does not fit a plane of {n} samples"
        )
    header_end = frame_bits + HEADER_SLOTS
    header_bytes = np.packbits(lsb_read(flat, frame_bits, HEADER_SLOTS)).tobytes()
    header = SideHeader.unpack(header_bytes)
    if header.region_a_bits != frame_bits:
        raise HeaderChecksum(
            f"side header claims a {header.region_a_bits}-bit region A, "
            f"the payload frame occupies {frame_bits} bits"
        )
    region_b, backup = hs_extract(
        flat[header_end:], HsSideInfo(header.peak, header.zero, HEADER_SLOTS + frame_bits)
    )
    out = flat.copy()
    out[header_end:] = region_b
    out[frame_bits:header_end] = _with_lsbs(flat[frame_bits:header_end], backup[:HEADER_SLOTS])
    out[:frame_bits] = _with_lsbs(flat[:frame_bits], backup[HEADER_SLOTS:])
    return out


def _with_lsbs(samples: np.ndarray, bits: np.ndarray) -> np.ndarray:
    return (samples & 0xFE) | bits


def reserve_room(img: np.ndarray, frame_bits: int) -> tuple[np.ndarray, HsSideInfo]:
    """Image-level room reservation on the red channel; G and B are untouched."""
    _check_rgb(img)
    flat = img.reshape(-1, 3)
    new_red, side = reserve_room_plane(flat[:, 0].copy(), frame_bits)
    out = img.copy()
    out.reshape(-1, 3)[:, 0] = new_red
    return out, side


@dataclass(frozen=True)
class HideResult:
    image: np.ndarray
    plain_psnr: float  # original vs plain-domain marked image, pre-encryption
    frame_bits: int
    capacity_bits: int  # region-A LSB slots available on this cover


def hide(
    cover: np.ndarray,
    secret: bytes,
    keys: StegoKeys,
    iv: bytes | None = None,
    skip_image_encryption: bool = False,
) -> HideResult:
    """Embed a secret; reveal() with the same keys inverts this bit-exactly."""
    _check_rgb(cover)
    n = cover.shape[0] * cover.shape[1]
    capacity_bits = n - HEADER_SLOTS
    if capacity_bits < frame_num_bits(MIN_CIPHERTEXT):
        raise CoverTooSmall(
            f"cover of {n} pixels cannot hold the minimum "
            f"{frame_num_bits(MIN_CIPHERTEXT)}-bit frame"
        )
    if iv is None:
        iv = os.urandom(16)
    frames = build_frames(secret, keys.data_key, iv, [capacity_bits])
    frame_bytes = frames[0].serialize()
    frame_bits = 8 * len(frame_bytes)

    reserved, _side = reserve_room(cover, frame_bits)
    bits = np.unpackbits(np.frombuffer(frame_bytes, np.uint8))

    plain_marked = reserved.copy()
    _write_region_a(plain_marked, bits)
    quality = psnr(cover, plain_marked)

    if skip_image_encryption:
        out = plain_marked
    else:
        state = bf_key_schedule(keys.image_key)
        out = _ctr_image(state, keys.nonce, reserved)
        _write_region_a(out, bits)
    return HideResult(out, quality, frame_bits, capacity_bits)


def reveal(
    marked: np.ndarray, keys: StegoKeys, skip_image_encryption: bool = False
) -> tuple[bytes, np.ndarray]:
    """Extract the secret and restore the original cover, both bit-exact."""
    frame = extract_frame(marked)
    if frame.segment_index != 0 or frame.segment_count != 1:
        raise MissingSegment(
            f"cover holds segment {frame.segment_index} of {frame.segment_count}; "
            "a single image must carry exactly one segment"
        )
    container = aes_cbc_decrypt(frame.ciphertext, keys.data_key, frame.iv)
    secret = huffman_decompress(container)
    original = _recover_image(marked, frame.num_bits, keys.image_key, keys.nonce,
                              skip_image_encryption)
    return secret, original


def recover_original(
    marked: np.ndarray,
    image_key: bytes,
    nonce: int,
    skip_image_encryption: bool = False,
) -> np.ndarray:
    """Restore the original cover without the data key.

    The payload frame's plaintext header supplies only the region length;
    the authoritative length in the side header must agree with it.
    """
    try:
        frame = extract_frame(marked)
    except PayloadError as exc:
        raise HeaderChecksum(f"cannot locate the side header: {exc}") from exc
    return _recover_image(marked, frame.num_bits, image_key, nonce, skip_image_encryption)


def extract_frame(marked: np.ndarray) -> PayloadFrame:
    """Read the payload frame from the red LSBs; needs no key material."""
    _check_rgb(marked)
    red = marked.reshape(-1, 3)[:, 0]
    return parse_frame(np.packbits(red & 1).tobytes())


def _recover_image(
    marked: np.ndarray, frame_bits: int, image_key: bytes, nonce: int, skip: bool
) -> np.ndarray:
    if skip:
        plain = marked.copy()
    else:
        state = bf_key_schedule(image_key)
        plain = _ctr_image(state, nonce, marked)
    flat = plain.reshape(-1, 3)
    flat[:, 0] = recover_plane(flat[:, 0].copy(), frame_bits)
    return plain


def _write_region_a(img: np.ndarray, bits: np.ndarray) -> None:
    red = img.reshape(-1, 3)[:, 0]
    red[: bits.size] = (red[: bits.size] & 0xFE) | bits


def _ctr_image(state: BlowfishState, nonce: int, img: np.ndarray) -> np.ndarray:
    raw = bf_ctr_transform(state, nonce, img.tobytes())
    return np.frombuffer(raw, dtype=np.uint8).reshape(img.shape).copy()


def max_embeddable_bits(plane: np.ndarray) -> int | None:
    """Largest region-A bit length this host plane can reserve room for.

    None when not even an empty region is feasible.  The search exploits
    that histogram-shift capacity of region B can only shrink as region A
    grows, so feasibility is a prefix in L.
    """
    flat = np.asarray(plane, dtype=np.uint8).reshape(-1)
    n = flat.size

    def feasible(length: int) -> bool:
        region_b = flat[length + HEADER_SLOTS :]
        if region_b.size == 0:
            return False
        try:
            _, _, capacity = plan_hs(region_b)
        except NoZeroBin:
            return False
        return capacity >= HEADER_SLOTS + length

    if n <= HEADER_SLOTS or not feasible(0):
        return None
    lo, hi = 0, n - HEADER_SLOTS
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def _check_rgb(img: np.ndarray) -> None:
    if not isinstance(img, np.ndarray) or img.ndim != 3 or img.shape[2] != 3:
        raise DimensionMismatch(f"expected an RGB (h, w, 3) array, got {getattr(img, 'shape', None)}")
    if img.dtype != np.uint8:
        raise DimensionMismatch(f"expected uint8 samples, got {img.dtype}")
