"""AES-128 for the payload path: block primitives plus CBC with PKCS#7.

The cipher is implemented directly from the round structure (SubBytes,
ShiftRows, MixColumns, AddRoundKey over a 4x4 column-major state) with the
S-boxes as constant tables, so the published FIPS-197 known-answer vectors
are checkable byte for byte.  Only the 128-bit key size is supported.
"""

from __future__ import annotations

import struct

from .errors import BadKeyLength, BadLength, BadPadding

BLOCK_SIZE = 16
NUM_ROUNDS = 10

SBOX = (
    0x63, 0x7C, 0x77, 0x7B, 0xF2, 0x6B, 0x6F, 0xC5, 0x30, 0x01, 0x67, 0x2B, 0xFE, 0xD7, 0xAB, 0x76,
    0xCA, 0x82, 0xC9, 0x7D, 0xFA, 0x59, 0x47, 0xF0, 0xAD, 0xD4, 0xA2, 0xAF, 0x9C, 0xA4, 0x72, 0xC0,
    0xB7, 0xFD, 0x93, 0x26, 0x36, 0x3F, 0xF7, 0xCC, 0x34, 0xA5, 0xE5, 0xF1, 0x71, 0xD8, 0x31, 0x15,
    0x04, 0xC7, 0x23, 0xC3, 0x18, 0x96, 0x05, 0x9A, 0x07, 0x12, 0x80, 0xE2, 0xEB, 0x27, 0xB2, 0x75,
    0x09, 0x83, 0x2C, 0x1A, 0x1B, 0x6E, 0x5A, 0xA0, 0x52, 0x3B, 0xD6, 0xB3, 0x29, 0xE3, 0x2F, 0x84,
    0x53, 0xD1, 0x00, 0xED, 0x20, 0xFC, 0xB1, 0x5B, 0x6A, 0xCB, 0xBE, 0x39, 0x4A, 0x4C, 0x58, 0xCF,
    0xD0, 0xEF, 0xAA, 0xFB, 0x43, 0x4D, 0x33, 0x85, 0x45, 0xF9, 0x02, 0x7F, 0x50, 0x3C, 0x9F, 0xA8,
    0x51, 0xA3, 0x40, 0x8F, 0x92, 0x9D, 0x38, 0xF5, 0xBC, 0xB6, 0xDA, 0x21, 0x10, 0xFF, 0xF3, 0xD2,
    0xCD, 0x0C, 0x13, 0xEC, 0x5F, 0x97, 0x44, 0x17, 0xC4, 0xA7, 0x7E, 0x3D, 0x64, 0x5D, 0x19, 0x73,
    0x60, 0x81, 0x4F, 0xDC, 0x22, 0x2A, 0x90, 0x88, 0x46, 0xEE, 0xB8, 0x14, 0xDE, 0x5E, 0x0B, 0xDB,
    0xE0, 0x32, 0x3A, 0x0A, 0x49, 0x06, 0x24, 0x5C, 0xC2, 0xD3, 0xAC, 0x62, 0x91, 0x95, 0xE4, 0x79,
    0xE7, 0xC8, 0x37, 0x6D, 0x8D, 0xD5, 0x4E, 0xA9, 0x6C, 0x56, 0xF4, 0xEA, 0x65, 0x7A, 0xAE, 0x08,
    0xBA, 0x78, 0x25, 0x2E, 0x1C, 0xA6, 0xB4, 0xC6, 0xE8, 0xDD, 0x74, 0x1F, 0x4B, 0xBD, 0x8B, 0x8A,
    0x70, 0x3E, 0xB5, 0x66, 0x48, 0x03, 0xF6, 0x0E, 0x61, 0x35, 0x57, 0xB9, 0x86, 0xC1, 0x1D, 0x9E,
    0xE1, 0xF8, 0x98, 0x11, 0x69, 0xD9, 0x8E, 0x94, 0x9B, 0x1E, 0x87, 0xE9, 0xCE, 0x55, 0x28, 0xDF,
    0x8C, 0xA1, 0x89, 0x0D, 0xBF, 0xE6, 0x42, 0x68, 0x41, 0x99, 0x2D, 0x0F, 0xB0, 0x54, 0xBB, 0x16,
)

INV_SBOX = (
    0x52, 0x09, 0x6A, 0xD5, 0x30, 0x36, 0xA5, 0x38, 0xBF, 0x40, 0xA3, 0x9E, 0x81, 0xF3, 0xD7, 0xFB,
    0x7C, 0xE3, 0x39, 0x82, 0x9B, 0x2F, 0xFF, 0x87, 0x34, 0x8E, 0x43, 0x44, 0xC4, 0xDE, 0xE9, 0xCB,
    0x54, 0x7B, 0x94, 0x32, 0xA6, 0xC2, 0x23, 0x3D, 0xEE, 0x4C, 0x95, 0x0B, 0x42, 0xFA, 0xC3, 0x4E,
    0x08, 0x2E, 0xA1, 0x66, 0x28, 0xD9, 0x24, 0xB2, 0x76, 0x5B, 0xA2, 0x49, 0x6D, 0x8B, 0xD1, 0x25,
    0x72, 0xF8, 0xF6, 0x64, 0x86, 0x68, 0x98, 0x16, 0xD4, 0xA4, 0x5C, 0xCC, 0x5D, 0x65, 0xB6, 0x92,
    0x6C, 0x70, 0x48, 0x50, 0xFD, 0xED, 0xB9, 0xDA, 0x5E, 0x15, 0x46, 0x57, 0xA7, 0x8D, 0x9D, 0x84,
    0x90, 0xD8, 0xAB, 0x00, 0x8C, 0xBC, 0xD3, 0x0A, 0xF7, 0xE4, 0x58, 0x05, 0xB8, 0xB3, 0x45, 0x06,
    0xD0, 0x2C, 0x1E, 0x8F, 0xCA, 0x3F, 0x0F, 0x02, 0xC1, 0xAF, 0xBD, 0x03, 0x01, 0x13, 0x8A, 0x6B,
    0x3A, 0x91, 0x11, 0x41, 0x4F, 0x67, 0xDC, 0xEA, 0x97, 0xF2, 0xCF, 0xCE, 0xF0, 0xB4, 0xE6, 0x73,
    0x96, 0xAC, 0x74, 0x22, 0xE7, 0xAD, 0x35, 0x85, 0xE2, 0xF9, 0x37, 0xE8, 0x1C, 0x75, 0xDF, 0x6E,
    0x47, 0xF1, 0x1A, 0x71, 0x1D, 0x29, 0xC5, 0x89, 0x6F, 0xB7, 0x62, 0x0E, 0xAA, 0x18, 0xBE, 0x1B,
    0xFC, 0x56, 0x3E, 0x4B, 0xC6, 0xD2, 0x79, 0x20, 0x9A, 0xDB, 0xC0, 0xFE, 0x78, 0xCD, 0x5A, 0xF4,
    0x1F, 0xDD, 0xA8, 0x33, 0x88, 0x07, 0xC7, 0x31, 0xB1, 0x12, 0x10, 0x59, 0x27, 0x80, 0xEC, 0x5F,
    0x60, 0x51, 0x7F, 0xA9, 0x19, 0xB5, 0x4A, 0x0D, 0x2D, 0xE5, 0x7A, 0x9F, 0x93, 0xC9, 0x9C, 0xEF,
    0xA0, 0xE0, 0x3B, 0x4D, 0xAE, 0x2A, 0xF5, 0xB0, 0xC8, 0xEB, 0xBB, 0x3C, 0x83, 0x53, 0x99, 0x61,
    0x17, 0x2B, 0x04, 0x7E, 0xBA, 0x77, 0xD6, 0x26, 0xE1, 0x69, 0x14, 0x63, 0x55, 0x21, 0x0C, 0x7D,
)


RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


def expand_key(key: bytes) -> list[bytes]:
    """The 11 round keys of the AES-128 key schedule; round_keys[0] is the key."""
    if len(key) != 16:
        raise BadKeyLength(f"AES-128 key must be 16 bytes, got {len(key)}")
    words = [key[4 * i : 4 * i + 4] for i in range(4)]
    for i in range(4, 44):
        temp = words[i - 1]
        if i % 4 == 0:
            rotated = temp[1:] + temp[:1]
            temp = bytes(
                (SBOX[rotated[0]] ^ RCON[i // 4 - 1], SBOX[rotated[1]], SBOX[rotated[2]], SBOX[rotated[3]])
            )
        words.append(bytes(a ^ b for a, b in zip(words[i - 4], temp)))
    return [b"".join(words[4 * r : 4 * r + 4]) for r in range(NUM_ROUNDS + 1)]


def _xtime(b: int) -> int:
    b <<= 1
    return (b ^ 0x1B) & 0xFF if b & 0x100 else b


def _gmul(a: int, b: int) -> int:
    p = 0
    while b:
        if b & 1:
            p ^= a
        a = _xtime(a)
        b >>= 1
    return p


# column-mix multiplication tables, derived from the field arithmetic above
_MUL2 = tuple(_gmul(x, 2) for x in range(256))
_MUL3 = tuple(_gmul(x, 3) for x in range(256))
_MUL9 = tuple(_gmul(x, 9) for x in range(256))
_MUL11 = tuple(_gmul(x, 11) for x in range(256))
_MUL13 = tuple(_gmul(x, 13) for x in range(256))
_MUL14 = tuple(_gmul(x, 14) for x in range(256))


def _sub_bytes(state: bytearray, box) -> None:
    for i in range(16):
        state[i] = box[state[i]]


# flat index r + 4c; row r lives at indices r, r+4, r+8, r+12
def _shift_rows(state: bytearray) -> None:
    for r in range(1, 4):
        row = [state[r + 4 * c] for c in range(4)]
        for c in range(4):
            state[r + 4 * c] = row[(c + r) % 4]


def _inv_shift_rows(state: bytearray) -> None:
    for r in range(1, 4):
        row = [state[r + 4 * c] for c in range(4)]
        for c in range(4):
            state[r + 4 * c] = row[(c - r) % 4]


def _mix_columns(state: bytearray) -> None:
    for c in range(4):
        a0, a1, a2, a3 = state[4 * c : 4 * c + 4]
        state[4 * c + 0] = _MUL2[a0] ^ _MUL3[a1] ^ a2 ^ a3
        state[4 * c + 1] = a0 ^ _MUL2[a1] ^ _MUL3[a2] ^ a3
        state[4 * c + 2] = a0 ^ a1 ^ _MUL2[a2] ^ _MUL3[a3]
        state[4 * c + 3] = _MUL3[a0] ^ a1 ^ a2 ^ _MUL2[a3]


def _inv_mix_columns(state: bytearray) -> None:
    for c in range(4):
        a0, a1, a2, a3 = state[4 * c : 4 * c + 4]
        state[4 * c + 0] = _MUL14[a0] ^ _MUL11[a1] ^ _MUL13[a2] ^ _MUL9[a3]
        state[4 * c + 1] = _MUL9[a0] ^ _MUL14[a1] ^ _MUL11[a2] ^ _MUL13[a3]
        state[4 * c + 2] = _MUL13[a0] ^ _MUL9[a1] ^ _MUL14[a2] ^ _MUL11[a3]
        state[4 * c + 3] = _MUL11[a0] ^ _MUL13[a1] ^ _MUL9[a2] ^ _MUL14[a3]


def _add_round_key(state: bytearray, rk: bytes) -> None:
    for i in range(16):
        state[i] ^= rk[i]


def aes_round(state: bytes, round_key: bytes, last: bool = False) -> bytes:
    """One forward round: SubBytes, ShiftRows, MixColumns (skipped when last), AddRoundKey."""
    s = bytearray(state)
    _sub_bytes(s, SBOX)
    _shift_rows(s)
    if not last:
        _mix_columns(s)
    _add_round_key(s, round_key)
    return bytes(s)


def encrypt_block(block: bytes, round_keys: list[bytes]) -> bytes:
    if len(block) != BLOCK_SIZE:
        raise BadLength(f"block must be {BLOCK_SIZE} bytes, got {len(block)}")
    state = bytes(a ^ b for a, b in zip(block, round_keys[0]))
    for i in range(1, NUM_ROUNDS):
        state = aes_round(state, round_keys[i])
    return aes_round(state, round_keys[NUM_ROUNDS], last=True)


def decrypt_block(block: bytes, round_keys: list[bytes]) -> bytes:
    if len(block) != BLOCK_SIZE:
        raise BadLength(f"block must be {BLOCK_SIZE} bytes, got {len(block)}")
    s = bytearray(a ^ b for a, b in zip(block, round_keys[NUM_ROUNDS]))
    for i in range(NUM_ROUNDS - 1, 0, -1):
        _inv_shift_rows(s)
        _sub_bytes(s, INV_SBOX)
        _add_round_key(s, round_keys[i])
        _inv_mix_columns(s)
    _inv_shift_rows(s)
    _sub_bytes(s, INV_SBOX)
    _add_round_key(s, round_keys[0])
    return bytes(s)


def _pad(data: bytes) -> bytes:
    n = BLOCK_SIZE - len(data) % BLOCK_SIZE
    return data + bytes([n]) * n


def _unpad(data: bytes) -> bytes:
    n = data[-1]
    if not 1 <= n <= BLOCK_SIZE or data[-n:] != bytes([n]) * n:
        raise BadPadding("invalid block padding: wrong key or corrupted ciphertext")
    return data[:-n]


def aes_cbc_encrypt(data: bytes, key: bytes, iv: bytes) -> bytes:
    """CBC over PKCS#7-padded data; output is always a whole number of blocks."""
    if len(iv) != BLOCK_SIZE:
        raise BadLength(f"IV must be {BLOCK_SIZE} bytes, got {len(iv)}")
    round_keys = expand_key(key)
    padded = _pad(data)
    out = bytearray()
    prev = iv
    for i in range(0, len(padded), BLOCK_SIZE):
        block = bytes(a ^ b for a, b in zip(padded[i : i + BLOCK_SIZE], prev))
        prev = encrypt_block(block, round_keys)
        out.extend(prev)
    return bytes(out)


def aes_cbc_decrypt(data: bytes, key: bytes, iv: bytes) -> bytes:
    if len(iv) != BLOCK_SIZE:
        raise BadLength(f"IV must be {BLOCK_SIZE} bytes, got {len(iv)}")
    if len(data) == 0 or len(data) % BLOCK_SIZE:
        raise BadLength(f"ciphertext length {len(data)} is not a positive multiple of {BLOCK_SIZE}")
    round_keys = expand_key(key)
    out = bytearray()
    prev = iv
    for i in range(0, len(data), BLOCK_SIZE):
        block = data[i : i + BLOCK_SIZE]
        out.extend(a ^ b for a, b in zip(decrypt_block(block, round_keys), prev))
        prev = block
    return _unpad(bytes(out))
