"""Portable seed derivation.

All randomness in the package flows from ``numpy.random.Generator`` (PCG64)
instances seeded through :func:`derive_seed`, so results do not depend on
thread scheduling, ``PYTHONHASHSEED`` or platform.
"""
import hashlib

import numpy as np

_MASK63 = (1 << 63) - 1


def derive_seed(*parts):
    """Hash an ordered tuple of ints/strings into a 63-bit seed."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(repr(part).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little") & _MASK63


def make_rng(*parts):
    return np.random.Generator(np.random.PCG64(derive_seed(*parts)))
