"""Canonical Huffman compression for the secret payload.

The container is deliberately tiny and deterministic: a fixed header, the
code table as (symbol, length) pairs, and the packed bitstream.  Codewords
themselves are never stored; both sides rebuild them canonically from the
lengths, ordered by (length, symbol value).

Layout, all integers big-endian::

    "HUF1" | original_len u32 | symbol_count u16 | symbol_count x (symbol u8, length u8) | bitstream
"""

from __future__ import annotations

import heapq
import struct
from dataclasses import dataclass

from .bitio import BitReader, BitWriter
from .errors import BadMagic, CorruptTable, EmptyInput, OutOfBits, TooLarge, Truncated

MAGIC = b"HUF1"
_MAX_INPUT = 0xFFFFFFFF
_HEADER = struct.Struct(">4sIH")


def build_frequency_table(data: bytes) -> list[int]:
    """Occurrence count for each of the 256 byte values."""
    counts = [0] * 256
    for b in data:
        counts[b] += 1
    return counts


@dataclass
class CodeTable:
    lengths: list[int]  # 256 entries, 0 = symbol absent
    codes: list[int]    # canonical codeword per symbol, valid where length > 0


def build_canonical_codes(freq: list[int]) -> CodeTable:
    """Optimal prefix code lengths plus canonical codewords.

    The merge queue is ordered by (weight, smallest symbol value contained),
    so two runs over the same input always build the same tree.  A lone
    symbol gets length 1, never 0.
    """
    present = [s for s in range(256) if freq[s] > 0]
    if not present:
        raise EmptyInput("cannot build a code for an empty frequency table")

    lengths = [0] * 256
    if len(present) == 1:
        lengths[present[0]] = 1
    else:
        # heap entries: (weight, min contained symbol, list of (symbol, depth))
        heap = [(freq[s], s, [(s, 0)]) for s in present]
        heapq.heapify(heap)
        while len(heap) > 1:
            w1, m1, leaves1 = heapq.heappop(heap)
            w2, m2, leaves2 = heapq.heappop(heap)
            merged = [(s, d + 1) for s, d in leaves1] + [(s, d + 1) for s, d in leaves2]
            heapq.heappush(heap, (w1 + w2, min(m1, m2), merged))
        for s, depth in heap[0][2]:
            lengths[s] = depth

    return CodeTable(lengths, _assign_canonical(lengths))


def _assign_canonical(lengths: list[int]) -> list[int]:
    codes = [0] * 256
    order = sorted(s for s in range(256) if lengths[s] > 0)
    order.sort(key=lambda s: (lengths[s], s))
    code = 0
    prev_len = 0
    for s in order:
        code <<= lengths[s] - prev_len
        codes[s] = code
        code += 1
        prev_len = lengths[s]
    return codes


def _check_kraft(lengths: list[int]) -> None:
    present = [s for s in range(256) if lengths[s] > 0]
    if len(present) < 2:
        return
    # scale by 2^max_len to stay in integers
    max_len = max(lengths[s] for s in present)
    total = sum(1 << (max_len - lengths[s]) for s in present)
    if total != 1 << max_len:
        raise CorruptTable("code lengths violate the Kraft equality")


def huffman_compress(data: bytes) -> bytes:
    """Serialized container that huffman_decompress inverts exactly."""
    if len(data) > _MAX_INPUT:
        raise TooLarge(f"input of {len(data)} bytes exceeds the 32-bit length field")
    present = sorted(set(data))
    out = bytearray(_HEADER.pack(MAGIC, len(data), len(present)))
    if not data:
        return bytes(out)
    table = build_canonical_codes(build_frequency_table(data))
    for s in present:
        out.append(s)
        out.append(table.lengths[s])
    w = BitWriter()
    codes, lengths = table.codes, table.lengths
    for b in data:
        w.write_bits(codes[b], lengths[b])
    out.extend(w.getvalue())
    return bytes(out)


def huffman_decompress(container: bytes) -> bytes:
    """Inverse of huffman_compress."""
    if len(container) < _HEADER.size:
        raise BadMagic("container shorter than its fixed header")
    magic, original_len, symbol_count = _HEADER.unpack_from(container)
    if magic != MAGIC:
        raise BadMagic(f"expected {MAGIC!r}, got {magic!r}")
    if symbol_count > 256:
        raise CorruptTable(f"symbol count {symbol_count} exceeds 256")
    table_end = _HEADER.size + 2 * symbol_count
    if len(container) < table_end:
        raise CorruptTable("container ends inside the code table")

    lengths = [0] * 256
    for i in range(symbol_count):
        sym = container[_HEADER.size + 2 * i]
        length = container[_HEADER.size + 2 * i + 1]
        if length == 0:
            raise CorruptTable(f"symbol {sym} listed with length 0")
        if lengths[sym] != 0:
            raise CorruptTable(f"symbol {sym} listed twice")
        lengths[sym] = length

    if original_len == 0:
        return b""
    if symbol_count == 0:
        raise CorruptTable("no symbols but a nonzero original length")
    _check_kraft(lengths)
    codes = _assign_canonical(lengths)

    # canonical decode: (first code, symbol list) per length
    by_length: dict[int, tuple[int, list[int]]] = {}
    for s in range(256):
        if lengths[s] > 0:
            first, syms = by_length.setdefault(lengths[s], (codes[s], []))
            by_length[lengths[s]] = (min(first, codes[s]), syms)
            syms.append(s)
    for length in by_length:
        by_length[length][1].sort()

    r = BitReader(container[table_end:])
    out = bytearray()
    max_len = max(by_length)
    try:
        while len(out) < original_len:
            code = 0
            length = 0
            while True:
                code = (code << 1) | r.read_bit()
                length += 1
                entry = by_length.get(length)
                if entry is not None:
                    first, syms = entry
                    idx = code - first
                    if 0 <= idx < len(syms):
                        out.append(syms[idx])
                        break
                if length >= max_len:
                    raise Truncated("bit pattern matches no codeword")
    except OutOfBits:
        raise Truncated(
            f"bitstream exhausted after {len(out)} of {original_len} symbols"
        ) from None
    return bytes(out)
