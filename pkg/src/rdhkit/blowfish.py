"""Blowfish for the cover path: block primitives plus a counter-mode keystream.

Counter mode matters here: LSB substitution happens in the encrypted domain,
and under CTR a flipped ciphertext bit maps back to exactly one flipped
plaintext bit, which the room-reservation step can restore.  A block mode
would smear every flipped LSB over a whole 8-byte block on decryption and
destroy reversibility.

Keystream generation is vectorized with numpy (the Feistel rounds and S-box
lookups apply to whole arrays of counter blocks at once); the scalar path
serves the key schedule and the single-block API.
"""

from __future__ import annotations

import numpy as np

from ._pi_digits import PI_FRACTION_HEX
from .errors import BadKeyLength

_WORDS = [int(PI_FRACTION_HEX[i : i + 8], 16) for i in range(0, len(PI_FRACTION_HEX), 8)]
P_INIT: tuple[int, ...] = tuple(_WORDS[:18])
S_INIT: tuple[tuple[int, ...], ...] = tuple(
    tuple(_WORDS[18 + 256 * k : 18 + 256 * (k + 1)]) for k in range(4)
)

_MASK32 = 0xFFFFFFFF
MIN_KEY_BYTES = 4
MAX_KEY_BYTES = 56


class BlowfishState:
    """P-array and S-boxes after key mixing; immutable once scheduled."""

    __slots__ = ("p", "s", "_s_np")

    def __init__(self, p: list[int], s: list[list[int]]):
        self.p = tuple(p)
        self.s = tuple(tuple(box) for box in s)
        self._s_np = [np.asarray(box, dtype=np.uint32) for box in s]


def bf_key_schedule(key: bytes) -> BlowfishState:
    """Mix the key into the pi-initialized P-array and S-boxes."""
    if not MIN_KEY_BYTES <= len(key) <= MAX_KEY_BYTES:
        raise BadKeyLength(
            f"Blowfish key must be {MIN_KEY_BYTES}..{MAX_KEY_BYTES} bytes, got {len(key)}"
        )
    p = list(P_INIT)
    s = [list(box) for box in S_INIT]
    klen = len(key)
    for i in range(18):
        word = 0
        for j in range(4):
            word = (word << 8) | key[(4 * i + j) % klen]
        p[i] ^= word

    xl = xr = 0
    for i in range(0, 18, 2):
        xl, xr = _encrypt_words(p, s, xl, xr)
        p[i], p[i + 1] = xl, xr
    for box in s:
        for j in range(0, 256, 2):
            xl, xr = _encrypt_words(p, s, xl, xr)
            box[j], box[j + 1] = xl, xr
    return BlowfishState(p, s)


def bf_f(state: BlowfishState, x: int) -> int:
    """The round function: S-box mixes with mod-2^32 additions."""
    s = state.s
    return _f(s[0], s[1], s[2], s[3], x)


def _f(s0, s1, s2, s3, x: int) -> int:
    a = (x >> 24) & 0xFF
    b = (x >> 16) & 0xFF
    c = (x >> 8) & 0xFF
    d = x & 0xFF
    return ((((s0[a] + s1[b]) & _MASK32) ^ s2[c]) + s3[d]) & _MASK32


def _encrypt_words(p, s, xl: int, xr: int) -> tuple[int, int]:
    s0, s1, s2, s3 = s
    for i in range(16):
        xl ^= p[i]
        xr ^= _f(s0, s1, s2, s3, xl)
        xl, xr = xr, xl
    xl, xr = xr, xl
    xr ^= p[16]
    xl ^= p[17]
    return xl, xr


def _decrypt_words(p, s, xl: int, xr: int) -> tuple[int, int]:
    s0, s1, s2, s3 = s
    for i in range(17, 1, -1):
        xl ^= p[i]
        xr ^= _f(s0, s1, s2, s3, xl)
        xl, xr = xr, xl
    xl, xr = xr, xl
    xr ^= p[1]
    xl ^= p[0]
    return xl, xr


def bf_encrypt_block(state: BlowfishState, block: bytes) -> bytes:
    if len(block) != 8:
        raise ValueError(f"block must be 8 bytes, got {len(block)}")
    xl = int.from_bytes(block[:4], "big")
    xr = int.from_bytes(block[4:], "big")
    xl, xr = _encrypt_words(state.p, state.s, xl, xr)
    return xl.to_bytes(4, "big") + xr.to_bytes(4, "big")


def bf_decrypt_block(state: BlowfishState, block: bytes) -> bytes:
    if len(block) != 8:
        raise ValueError(f"block must be 8 bytes, got {len(block)}")
    xl = int.from_bytes(block[:4], "big")
    xr = int.from_bytes(block[4:], "big")
    xl, xr = _decrypt_words(state.p, state.s, xl, xr)
    return xl.to_bytes(4, "big") + xr.to_bytes(4, "big")


def _f_vec(state: BlowfishState, x: np.ndarray) -> np.ndarray:
    s0, s1, s2, s3 = state._s_np
    a = x >> np.uint32(24)
    b = (x >> np.uint32(16)) & np.uint32(0xFF)
    c = (x >> np.uint32(8)) & np.uint32(0xFF)
    d = x & np.uint32(0xFF)
    return ((s0[a] + s1[b]) ^ s2[c]) + s3[d]


def _encrypt_words_vec(state: BlowfishState, xl: np.ndarray, xr: np.ndarray):
    p = state.p
    for i in range(16):
        xl = xl ^ np.uint32(p[i])
        xr = xr ^ _f_vec(state, xl)
        xl, xr = xr, xl
    xl, xr = xr, xl
    xr = xr ^ np.uint32(p[16])
    xl = xl ^ np.uint32(p[17])
    return xl, xr


def keystream(state: BlowfishState, nonce: int, nbytes: int) -> bytes:
    """Big-endian counter blocks (nonce + i) mod 2^64, each Blowfish-encrypted."""
    if nbytes == 0:
        return b""
    nblocks = (nbytes + 7) // 8
    counters = np.arange(nblocks, dtype=np.uint64) + np.uint64(nonce & 0xFFFFFFFFFFFFFFFF)
    xl = (counters >> np.uint64(32)).astype(np.uint32)
    xr = (counters & np.uint64(0xFFFFFFFF)).astype(np.uint32)
    xl, xr = _encrypt_words_vec(state, xl, xr)
    words = np.empty((nblocks, 2), dtype=">u4")
    words[:, 0] = xl
    words[:, 1] = xr
    return words.tobytes()[:nbytes]


def bf_ctr_transform(state: BlowfishState, nonce: int, data: bytes) -> bytes:
    """XOR with the counter keystream; applying it twice is the identity."""
    if len(data) == 0:
        return b""
    ks = np.frombuffer(keystream(state, nonce, len(data)), dtype=np.uint8)
    return (np.frombuffer(data, dtype=np.uint8) ^ ks).tobytes()
