import itertools
import random
import struct

import pytest
from hypothesis import given, settings, strategies as st

from rdhkit import huffman
from rdhkit.errors import BadMagic, CorruptTable, EmptyInput, TooLarge, Truncated


def optimal_code_cost(freqs: list[int]) -> int:
    """Exhaustive oracle: minimum total bits over every possible merge order.

    Total cost of a prefix tree equals the sum of all internal node weights,
    so trying every pair at every merge step enumerates every tree shape.
    Only usable for small symbol counts.
    """
    weights = tuple(sorted(freqs))
    assert len(weights) >= 2

    def best(ws: tuple[int, ...]) -> int:
        if len(ws) == 1:
            return 0
        result = None
        for i, j in itertools.combinations(range(len(ws)), 2):
            merged = ws[i] + ws[j]
            rest = tuple(w for k, w in enumerate(ws) if k not in (i, j))
            cost = merged + best(tuple(sorted(rest + (merged,))))
            if result is None or cost < result:
                result = cost
        return result

    return best(weights)


def test_frequency_table_empty():
    assert huffman.build_frequency_table(b"") == [0] * 256


def test_frequency_table_direct_counts():
    counts = huffman.build_frequency_table(b"aaa")
    assert counts[ord("a")] == 3
    assert sum(counts) == 3

    counts = huffman.build_frequency_table(b"abracadabra")
    expect = {"a": 5, "b": 2, "r": 2, "c": 1, "d": 1}
    for ch, n in expect.items():
        assert counts[ord(ch)] == n
    assert sum(counts) == 11


def test_single_symbol_gets_length_one():
    freq = [0] * 256
    freq[ord("a")] = 7
    table = huffman.build_canonical_codes(freq)
    assert table.lengths[ord("a")] == 1
    assert table.codes[ord("a")] == 0


def test_two_equal_symbols():
    freq = [0] * 256
    freq[ord("x")] = 5
    freq[ord("y")] = 5
    table = huffman.build_canonical_codes(freq)
    assert table.lengths[ord("x")] == table.lengths[ord("y")] == 1
    assert table.codes[ord("x")] == 0
    assert table.codes[ord("y")] == 1


def test_abracadabra_lengths_and_total():
    freq = huffman.build_frequency_table(b"abracadabra")
    table = huffman.build_canonical_codes(freq)
    lengths = {ch: table.lengths[ord(ch)] for ch in "abrcd"}
    assert lengths == {"a": 1, "r": 2, "b": 3, "c": 4, "d": 4}
    total = sum(freq[s] * table.lengths[s] for s in range(256))
    assert total == 23
    # the exhaustive oracle confirms 23 is optimal for these frequencies
    assert optimal_code_cost([5, 2, 2, 1, 1]) == 23


def test_empty_frequency_table_rejected():
    with pytest.raises(EmptyInput):
        huffman.build_canonical_codes([0] * 256)


@pytest.mark.parametrize("num_symbols", [2, 3, 4, 5, 6])
def test_optimality_matches_exhaustive_oracle(num_symbols):
    rng = random.Random(900 + num_symbols)
    for _ in range(8):
        freq = [0] * 256
        symbols = rng.sample(range(256), num_symbols)
        for s in symbols:
            freq[s] = rng.randrange(1, 50)
        table = huffman.build_canonical_codes(freq)
        total = sum(freq[s] * table.lengths[s] for s in symbols)
        assert total == optimal_code_cost([freq[s] for s in symbols])


def test_compress_empty():
    container = huffman.huffman_compress(b"")
    assert container == b"HUF1" + struct.pack(">IH", 0, 0)
    assert huffman.huffman_decompress(container) == b""


def test_compress_abracadabra_bitstream_is_23_bits():
    container = huffman.huffman_compress(b"abracadabra")
    # header 10 + table 2*5 + ceil(23/8)=3 bitstream bytes
    assert len(container) == 10 + 10 + 3
    assert huffman.huffman_decompress(container) == b"abracadabra"


def test_single_repeated_byte_bitstream():
    data = b"\x42" * 1024
    container = huffman.huffman_compress(data)
    # 1024 one-bit codes pack into exactly 128 bytes
    assert len(container) == 10 + 2 + 128
    assert huffman.huffman_decompress(container) == data


def test_container_is_deterministic():
    data = bytes(random.Random(1).randbytes(500))
    assert huffman.huffman_compress(data) == huffman.huffman_compress(data)


def test_bad_magic():
    container = bytearray(huffman.huffman_compress(b"abracadabra"))
    container[:4] = b"XUF1"
    with pytest.raises(BadMagic):
        huffman.huffman_decompress(bytes(container))


def test_corrupt_table_kraft_violation():
    container = bytearray(huffman.huffman_compress(b"abracadabra"))
    # growing one listed length breaks the Kraft equality
    assert container[11] >= 1
    container[11] += 1
    with pytest.raises(CorruptTable):
        huffman.huffman_decompress(bytes(container))


def test_corrupt_table_duplicate_symbol():
    data = b"HUF1" + struct.pack(">IH", 2, 2) + bytes([65, 1, 65, 1]) + b"\x00"
    with pytest.raises(CorruptTable):
        huffman.huffman_decompress(data)


def test_corrupt_table_zero_length_entry():
    data = b"HUF1" + struct.pack(">IH", 1, 1) + bytes([65, 0]) + b"\x00"
    with pytest.raises(CorruptTable):
        huffman.huffman_decompress(data)


def test_truncated_bitstream():
    container = huffman.huffman_compress(b"abracadabra")
    with pytest.raises(Truncated):
        huffman.huffman_decompress(container[:-1])


def test_too_large_guard(monkeypatch):
    monkeypatch.setattr(huffman, "_MAX_INPUT", 10)
    with pytest.raises(TooLarge):
        huffman.huffman_compress(b"x" * 11)
    assert huffman.huffman_decompress(huffman.huffman_compress(b"x" * 10)) == b"x" * 10


def test_thousand_random_roundtrips():
    rng = random.Random(2024)
    cases = [b"", b"\x00", b"\xff" * 37]
    while len(cases) < 1000:
        n = rng.randrange(0, 600)
        alphabet = rng.randrange(1, 257)
        cases.append(bytes(rng.randrange(alphabet) for _ in range(n)))
    for data in cases:
        assert huffman.huffman_decompress(huffman.huffman_compress(data)) == data


@settings(max_examples=200)
@given(st.binary(max_size=400))
def test_roundtrip_property(data):
    assert huffman.huffman_decompress(huffman.huffman_compress(data)) == data
