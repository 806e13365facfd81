"""Deterministic seed derivation.

Every random draw descends from one master seed.  A child seed is the first
8 bytes of BLAKE2b over the master seed and a tuple of labels, so trial t of a
suite gets the same stream no matter how trials are scheduled.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(master: int, *labels: object) -> int:
    payload = repr((int(master),) + tuple(str(x) for x in labels)).encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "big")


def derive_rng(master: int, *labels: object) -> random.Random:
    return random.Random(derive_seed(master, *labels))
