"""Deterministic seed derivation.

Every randomized operation in the package takes an explicit master seed and
derives independent sub-streams for its internal tasks (per fold, per tree,
per report cell, ...) by hashing the master seed together with a tuple of
task tokens. The scheme is stable across platforms, Python versions and
process/thread layout, so results depend only on the seeds in the config.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(master: int, *tokens: object) -> int:
    """Return a 63-bit sub-seed for the task identified by ``tokens``.

    Tokens are folded into a SHA-256 digest via their string form, separated
    so that ("ab", "c") and ("a", "bc") derive different seeds.
    """
    h = hashlib.sha256()
    h.update(str(int(master)).encode())
    for token in tokens:
        h.update(b"\x1f")
        h.update(str(token).encode())
    return int.from_bytes(h.digest()[:8], "big") >> 1


def rng_for(master: int, *tokens: object) -> np.random.Generator:
    """Generator seeded by :func:`derive_seed` for the given task."""
    return np.random.default_rng(derive_seed(master, *tokens))
