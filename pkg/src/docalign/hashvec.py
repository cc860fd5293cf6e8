"""Deterministic pseudo-embeddings derived from SHA-256 digests.

Every step is exact or correctly rounded in IEEE-754 float64, so any
runtime that follows the same recipe (digest counter stream, big-endian
words, sequential sum of squares, final float32 cast) produces
bit-identical vectors. The norm loop is deliberately sequential; pairwise
summation would round differently.
"""

from __future__ import annotations

import hashlib
import math
import struct

import numpy as np

WORD_SCALE = 2.0 ** 32


def hash_vector(text: str, dim: int) -> np.ndarray:
    """Unit float32 vector of length dim derived from the text."""
    if dim < 1:
        raise ValueError("dim must be positive")
    payload = text.encode("utf-8")
    comps: list[float] = []
    block = 0
    while len(comps) < dim:
        digest = hashlib.sha256(payload + struct.pack(">I", block)).digest()
        for word in struct.unpack(">8I", digest):
            comps.append((word / WORD_SCALE) * 2.0 - 1.0)
            if len(comps) == dim:
                break
        block += 1
    sumsq = 0.0
    for c in comps:
        sumsq += c * c
    if sumsq == 0.0:
        comps[0] = 1.0
        sumsq = 1.0
    norm = math.sqrt(sumsq)
    return np.asarray([c / norm for c in comps], dtype=np.float32)
