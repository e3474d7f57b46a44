"""Deterministic feature-hashing text encoder.

Stands in for a sentence-embedding model so the whole pipeline is
reproducible offline: lowercase, split on non-alphanumerics, hash each token
into EMBED_DIM buckets with a sign from a second hash, accumulate,
L2-normalize.  Identical strings always produce identical vectors.  Any real
sentence encoder producing unit vectors can be swapped in wherever an
``encode`` callable is accepted.
"""

from __future__ import annotations

import hashlib
import math
import re

import numpy as np

EMBED_DIM = 64

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def _bucket(token: str) -> int:
    digest = hashlib.md5(token.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _sign(token: str) -> float:
    digest = hashlib.sha1(token.encode("utf-8")).digest()
    return 1.0 if digest[0] & 1 else -1.0


def encode_text(text: str, dim: int = EMBED_DIM) -> np.ndarray:
    """Hash a string into a unit vector; all-zero for token-free input."""
    v = np.zeros(dim, dtype=np.float64)
    for tok in tokenize(text):
        v[_bucket(tok) % dim] += _sign(tok)
    norm = float(np.linalg.norm(v))
    if norm > 0.0:
        v /= norm
    return v


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; 0.0 whenever either vector is (near) zero."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na < 1e-12 or nb < 1e-12:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def angular_distance(a: float, b: float) -> float:
    """Absolute shortest-arc distance between two angles in radians."""
    d = math.remainder(a - b, 2.0 * math.pi)
    return abs(d)
