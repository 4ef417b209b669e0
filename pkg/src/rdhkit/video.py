"""Y4M (YUV4MPEG2) parsing/writing and frame-looped hiding.

Each video frame is an independent host: its Y plane is room-reserved
exactly like a cover image's red channel, the whole frame (Y then U then V)
is encrypted with the counter keystream under nonce + frame_index, and one
payload segment lands in the frame's region-A Y LSBs.  Frames beyond the
last segment carry zero-length segments so every frame stays recoverable on
its own.  Reassembly orders segments by their index, not by frame position.

Embedding operates on native YUV input.  The RGB conversions below are
utilities for RGB-sourced frame sequences and are lossy (rounding); the
bit-exact reversibility guarantee holds for YUV-native video only.

Unknown stream-header parameters round-trip verbatim, so a marked video can
carry its counter nonce as an ``XRDHCTR=<16 hex>`` extension token that
players ignore.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

import numpy as np

from .blowfish import BlowfishState, bf_ctr_transform, bf_key_schedule
from .errors import (
    BadSignature,
    CapacityExceeded,
    CoverTooSmall,
    MissingSegment,
    NoZeroBin,
    TruncatedFrame,
    UnsupportedColorspace,
)
from .pipeline import (
    HEADER_SLOTS,
    PayloadFrame,
    StegoKeys,
    build_frames,
    frame_num_bits,
    max_embeddable_bits,
    parse_frame,
    recover_plane,
    reserve_room_plane,
)
from .aes import aes_cbc_decrypt
from .huffman import huffman_decompress

_SIGNATURE = b"YUV4MPEG2"
_NONCE_PREFIX = b"XRDHCTR="
_MASK64 = 0xFFFFFFFFFFFFFFFF


@dataclass
class YuvFrame:
    y: np.ndarray
    u: np.ndarray
    v: np.ndarray


@dataclass
class Y4mVideo:
    width: int
    height: int
    colorspace: str  # "C420" or "C444"
    params: list[bytes]  # raw stream-header tokens, order preserved
    frames: list[YuvFrame] = field(default_factory=list)
    frame_headers: list[bytes] = field(default_factory=list)  # raw suffix per frame

    def chroma_shape(self) -> tuple[int, int]:
        if self.colorspace == "C420":
            return (self.height // 2, self.width // 2)
        return (self.height, self.width)


def parse_y4m(data: bytes) -> Y4mVideo:
    if not data.startswith(_SIGNATURE):
        raise BadSignature("stream does not start with YUV4MPEG2")
    newline = data.find(b"\n")
    if newline == -1:
        raise BadSignature("stream header is not newline-terminated")
    header = data[len(_SIGNATURE) : newline]
    if not header.startswith(b" "):
        raise BadSignature("stream header carries no parameters")
    tokens = header[1:].split(b" ")
    if any(not t for t in tokens):
        raise BadSignature("empty parameter in stream header")

    width = height = None
    colorspace = "C420"
    saw_rate = False
    for tok in tokens:
        if tok.startswith(b"W"):
            width = _positive_int(tok[1:], "width")
        elif tok.startswith(b"H"):
            height = _positive_int(tok[1:], "height")
        elif tok.startswith(b"F"):
            saw_rate = True
        elif tok.startswith(b"C"):
            cs = tok.decode("ascii", "replace")
            if cs not in ("C420", "C444"):
                raise UnsupportedColorspace(f"colorspace {cs} is not supported")
            colorspace = cs
    if width is None or height is None:
        raise BadSignature("stream header lacks W or H")
    if not saw_rate:
        raise BadSignature("stream header lacks a frame rate")
    if colorspace == "C420" and (width % 2 or height % 2):
        raise UnsupportedColorspace(
            f"C420 requires even dimensions, stream is {width}x{height}"
        )

    video = Y4mVideo(width, height, colorspace, tokens)
    ch, cw = video.chroma_shape()
    frame_len = width * height + 2 * ch * cw
    pos = newline + 1
    while pos < len(data):
        if data[pos : pos + 5] != b"FRAME":
            raise TruncatedFrame(f"expected a FRAME marker at byte {pos}")
        end = data.find(b"\n", pos)
        if end == -1:
            raise TruncatedFrame("frame header is not newline-terminated")
        suffix = data[pos + 5 : end]
        if suffix and not suffix.startswith(b" "):
            raise TruncatedFrame(f"malformed frame header {suffix!r}")
        pos = end + 1
        raw = data[pos : pos + frame_len]
        if len(raw) < frame_len:
            raise TruncatedFrame(
                f"frame needs {frame_len} plane bytes, stream holds {len(raw)}"
            )
        video.frames.append(_split_planes(raw, width, height, ch, cw))
        video.frame_headers.append(suffix)
        pos += frame_len
    return video


def write_y4m(video: Y4mVideo) -> bytes:
    out = bytearray(_SIGNATURE + b" " + b" ".join(video.params) + b"\n")
    for frame, suffix in zip(video.frames, video.frame_headers):
        out += b"FRAME" + suffix + b"\n"
        out += frame.y.tobytes() + frame.u.tobytes() + frame.v.tobytes()
    return bytes(out)


def _split_planes(raw: bytes, w: int, h: int, ch: int, cw: int) -> YuvFrame:
    arr = np.frombuffer(raw, dtype=np.uint8)
    y = arr[: w * h].reshape(h, w).copy()
    u = arr[w * h : w * h + ch * cw].reshape(ch, cw).copy()
    v = arr[w * h + ch * cw :].reshape(ch, cw).copy()
    return YuvFrame(y, u, v)


def _positive_int(tok: bytes, what: str) -> int:
    if not tok.isdigit() or int(tok) <= 0:
        raise BadSignature(f"{what} must be a positive integer, got {tok!r}")
    return int(tok)


def video_nonce(video: Y4mVideo) -> int | None:
    """Counter nonce carried as an XRDHCTR extension token, if any."""
    for tok in video.params:
        if tok.startswith(_NONCE_PREFIX):
            hexpart = tok[len(_NONCE_PREFIX) :]
            if len(hexpart) == 16:
                try:
                    return int(hexpart, 16)
                except ValueError:
                    return None
    return None


def with_video_nonce(video: Y4mVideo, nonce: int) -> Y4mVideo:
    """Copy of the video with its nonce token replaced or appended."""
    token = _NONCE_PREFIX + b"%016x" % (nonce & _MASK64)
    params = [t for t in video.params if not t.startswith(_NONCE_PREFIX)]
    params.append(token)
    return replace(video, params=params)


def without_video_nonce(video: Y4mVideo) -> Y4mVideo:
    """Inverse of with_video_nonce for covers that carried no token of their own."""
    return replace(video, params=[t for t in video.params if not t.startswith(_NONCE_PREFIX)])


# full-range BT.601 coefficients, rounded and clamped to [0, 255]


def rgb_to_yuv(r: int, g: int, b: int) -> tuple[int, int, int]:
    y = _clamp(round(0.299 * r + 0.587 * g + 0.114 * b))
    u = _clamp(round(-0.168736 * r - 0.331264 * g + 0.5 * b + 128))
    v = _clamp(round(0.5 * r - 0.418688 * g - 0.081312 * b + 128))
    return y, u, v


def yuv_to_rgb(y: int, u: int, v: int) -> tuple[int, int, int]:
    r = _clamp(round(y + 1.402 * (v - 128)))
    g = _clamp(round(y - 0.344136 * (u - 128) - 0.714136 * (v - 128)))
    b = _clamp(round(y + 1.772 * (u - 128)))
    return r, g, b


def _clamp(x: int) -> int:
    return 0 if x < 0 else 255 if x > 255 else x


def embed_frame_payload(
    frame: YuvFrame, payload: bytes, state: BlowfishState, nonce: int
) -> YuvFrame:
    """Room-reserve the Y plane, encrypt the whole frame, substitute the payload."""
    shape_y, shape_c = frame.y.shape, frame.u.shape
    bits = 8 * len(payload)
    reserved_y, _ = reserve_room_plane(frame.y.reshape(-1), bits)
    raw = reserved_y.tobytes() + frame.u.tobytes() + frame.v.tobytes()
    enc = np.frombuffer(bf_ctr_transform(state, nonce, raw), dtype=np.uint8).copy()
    ny = frame.y.size
    payload_bits = np.unpackbits(np.frombuffer(payload, np.uint8))
    enc[:bits] = (enc[:bits] & 0xFE) | payload_bits
    return YuvFrame(
        enc[:ny].reshape(shape_y),
        enc[ny : ny + frame.u.size].reshape(shape_c),
        enc[ny + frame.u.size :].reshape(shape_c),
    )


def extract_frame_payload(frame: YuvFrame) -> PayloadFrame:
    """Parse the payload segment from the Y LSBs; needs no key material."""
    return parse_frame(np.packbits(frame.y.reshape(-1) & 1).tobytes())


def recover_frame(frame: YuvFrame, state: BlowfishState, nonce: int) -> YuvFrame:
    """Decrypt one marked frame and restore its original planes."""
    payload = extract_frame_payload(frame)
    raw = frame.y.tobytes() + frame.u.tobytes() + frame.v.tobytes()
    dec = np.frombuffer(bf_ctr_transform(state, nonce, raw), dtype=np.uint8).copy()
    ny = frame.y.size
    y = recover_plane(dec[:ny], payload.num_bits).reshape(frame.y.shape)
    u = dec[ny : ny + frame.u.size].reshape(frame.u.shape)
    v = dec[ny + frame.u.size :].reshape(frame.v.shape)
    return YuvFrame(y, u, v)


def video_hide(
    video: Y4mVideo, secret: bytes, keys: StegoKeys, iv: bytes | None = None
) -> Y4mVideo:
    """Split the encrypted secret across frames; every frame carries a segment."""
    if iv is None:
        iv = os.urandom(16)
    capacities = [
        _frame_capacity(i, frame.y.reshape(-1)) for i, frame in enumerate(video.frames)
    ]
    segments = build_frames(secret, keys.data_key, iv, capacities)
    count = len(segments)
    state = bf_key_schedule(keys.image_key)
    marked = []
    for i, frame in enumerate(video.frames):
        segment = segments[i] if i < count else PayloadFrame(i, count, iv, b"")
        marked.append(
            embed_frame_payload(frame, segment.serialize(), state, (keys.nonce + i) & _MASK64)
        )
    return replace(video, frames=marked, frame_headers=list(video.frame_headers))


def video_reveal(video: Y4mVideo, keys: StegoKeys) -> tuple[bytes, Y4mVideo]:
    """Inverse of video_hide: (secret, original video), segments joined by index."""
    if not video.frames:
        raise MissingSegment("video has no frames")
    state = bf_key_schedule(keys.image_key)
    segments: dict[int, bytes] = {}
    count = None
    iv = None
    originals = []
    for i, frame in enumerate(video.frames):
        payload = extract_frame_payload(frame)
        if count is None:
            count, iv = payload.segment_count, payload.iv
        elif payload.segment_count != count:
            raise MissingSegment(
                f"frame {i} declares {payload.segment_count} segments, expected {count}"
            )
        if payload.segment_index < count:
            if payload.segment_index in segments:
                raise MissingSegment(f"segment {payload.segment_index} appears twice")
            segments[payload.segment_index] = payload.ciphertext
        originals.append(recover_frame(frame, state, (keys.nonce + i) & _MASK64))
    missing = [k for k in range(count) if k not in segments]
    if missing:
        raise MissingSegment(f"segments {missing} are absent")
    ciphertext = b"".join(segments[k] for k in range(count))
    secret = huffman_decompress(aes_cbc_decrypt(ciphertext, keys.data_key, iv))
    return secret, replace(video, frames=originals, frame_headers=list(video.frame_headers))


def _frame_capacity(index: int, y_flat: np.ndarray) -> int:
    capacity = max_embeddable_bits(y_flat)
    if capacity is None or capacity < frame_num_bits(0):
        # re-derive the reason for a precise per-frame error
        if y_flat.size <= HEADER_SLOTS + frame_num_bits(0):
            raise CoverTooSmall(
                f"frame {index}: Y plane of {y_flat.size} samples cannot hold a segment"
            )
        try:
            reserve_room_plane(y_flat, frame_num_bits(0))
        except NoZeroBin as exc:
            raise NoZeroBin(f"frame {index}: {exc}") from exc
        except CapacityExceeded as exc:
            raise CapacityExceeded(
                needed=exc.needed, available=exc.available, detail=f"frame {index}"
            ) from exc
        raise CoverTooSmall(f"frame {index}: no room for a segment")
    return capacity
