"""Seed derivation for reproducible, order-independent Monte Carlo.

All randomness in the package flows through counter-based Philox generators
keyed by (master seed, stream label, indices).  Trial t of experiment e uses
``derive_rng(master, e, t)``, so trials can run in any order, on any number
of workers, and still reproduce bit-exactly.
"""

from __future__ import annotations

import zlib

import numpy as np


def _label_code(label: str) -> int:
    return zlib.crc32(label.encode("utf-8"))


def derive_seedseq(master: int, label: str = "", *indices: int) -> np.random.SeedSequence:
    entropy = [int(master) & 0xFFFFFFFFFFFFFFFF, _label_code(label)]
    entropy.extend(int(i) & 0xFFFFFFFFFFFFFFFF for i in indices)
    return np.random.SeedSequence(entropy)


def derive_rng(master: int, label: str = "", *indices: int) -> np.random.Generator:
    """Philox generator for the stream (master, label, *indices)."""
    return np.random.Generator(np.random.Philox(derive_seedseq(master, label, *indices)))


def derive_seed_int(master: int, label: str = "", *indices: int) -> int:
    """A 63-bit sub-seed for APIs that take a scalar seed."""
    state = derive_seedseq(master, label, *indices).generate_state(1, np.uint64)[0]
    return int(state) & 0x7FFFFFFFFFFFFFFF
