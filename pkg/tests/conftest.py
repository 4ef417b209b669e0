import numpy as np


def make_cover(rng, height, width, red_spread=4, red_base=None, concentration=0.88):
    """Random RGB cover whose red histogram is dominated by one value, so the
    histogram-shift host has room; green and blue are fully random."""
    img = rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)
    if red_base is None:
        red_base = int(rng.integers(10, 240))
    red = np.full((height, width), red_base, dtype=np.uint8)
    noisy = rng.random((height, width)) >= concentration
    red[noisy] = (red_base + rng.integers(1, max(2, red_spread), size=int(noisy.sum()))).astype(
        np.uint8
    )
    img[:, :, 0] = red
    return img


def random_keys(rng):
    from rdhkit import StegoKeys

    return StegoKeys(
        data_key=rng.bytes(16),
        image_key=rng.bytes(int(rng.integers(4, 57))),
        nonce=int(rng.integers(0, 2**63)),
    )


def max_secret_bytes(cover):
    """Conservative upper bound on a random-bytes secret that must fit this cover."""
    from rdhkit.pipeline import FRAME_OVERHEAD_BYTES, HEADER_SLOTS, max_embeddable_bits

    red = cover[:, :, 0].reshape(-1)
    limit = max_embeddable_bits(red)
    if limit is None:
        return None
    limit = min(limit, red.size - HEADER_SLOTS)
    max_ct = limit // 8 - FRAME_OVERHEAD_BYTES
    if max_ct < 16:
        return None
    budget = max_ct - 16 - 11  # CBC padding + container fixed header
    if budget <= 0:
        return 0
    # random bytes cost at most 2 table bytes + 1 bitstream byte each while
    # the alphabet is growing, and 523 fixed table bytes once it is full
    small = budget // 3
    if small <= 256:
        return small
    return max(256, budget - 523)
