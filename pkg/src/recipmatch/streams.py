"""Keyed, counter-based random streams.

Every random quantity in the library is drawn from a stream addressed by a
tuple of keys (seed, trial, purpose, entity id, ...).  Draws therefore do not
depend on evaluation order, and distinct entities never share a stream, which
keeps parallel trial execution bitwise reproducible.
"""

from __future__ import annotations

import hashlib

import numpy as np

_SEP = "\x1f"


def _digest(*keys: object) -> bytes:
    return hashlib.sha256(_SEP.join(map(str, keys)).encode()).digest()


def unit_uniform(*keys: object) -> float:
    """One uniform draw in [0, 1) fully determined by the key tuple."""
    d = _digest(*keys)
    return int.from_bytes(d[:8], "big") / 2**64


def unit_uniforms(n: int, *keys: object) -> list[float]:
    """n uniform draws in [0, 1); block counter appended to the key tuple."""
    out: list[float] = []
    block = 0
    while len(out) < n:
        d = _digest(*keys, block)
        for i in range(0, 32, 8):
            out.append(int.from_bytes(d[i : i + 8], "big") / 2**64)
        block += 1
    return out[:n]


def substream(*keys: object) -> np.random.Generator:
    """A numpy Generator seeded from the key tuple, for bulk draws."""
    d = _digest(*keys)
    words = [int.from_bytes(d[i : i + 4], "little") for i in range(0, 16, 4)]
    return np.random.default_rng(np.random.SeedSequence(words))
