"""Seed derivation and random streams.

Every random draw in the package comes from a :class:`random.Random`
(Mersenne Twister MT19937) seeded with an integer derived from the master
seed, so results are reproducible across machines and Python versions.
"""

from __future__ import annotations

import hashlib
import random

RNG_ALGORITHM = "python-random-mt19937"
DEFAULT_SEED = 20060101


def seed_for(master_seed: int, stream_index: int, trial_index: int) -> int:
    """Derive a 64-bit seed for one trial of one stream.

    The first 8 bytes (little endian) of BLAKE2b over the decimal text
    ``"<master>:<stream>:<trial>"``. Works for arbitrary (also negative or
    oversized) Python ints.
    """
    text = f"{int(master_seed)}:{int(stream_index)}:{int(trial_index)}".encode("ascii")
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)
