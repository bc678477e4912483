"""
Seed derivation for reproducible parallel runs.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(global_seed: int, key: str | int) -> int:
    """Stable 64-bit seed from a global seed and a key (e.g. an encounter id)."""
    digest = hashlib.sha256(f"{global_seed}:{key}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def child_seeds(seed: int, n: int) -> list[int]:
    """n independent child seeds of a parent seed."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(s.generate_state(1, dtype=np.uint64)[0]) for s in children]
