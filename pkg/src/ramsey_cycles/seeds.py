"""Deterministic per-stage seed derivation."""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(master: int, *stage: object) -> int:
    """64-bit seed from the master seed and a stage path, independent across stages."""
    h = hashlib.sha256(repr((int(master),) + tuple(str(s) for s in stage)).encode())
    return int.from_bytes(h.digest()[:8], "little")


def rng_for(master: int, *stage: object) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master, *stage))
