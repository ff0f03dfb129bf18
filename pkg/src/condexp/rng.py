"""Deterministic random numbers for property checks.

All randomized checks draw from numpy's Philox counter-based generator,
keyed directly by the user-supplied seed.  Philox is a published,
language-independent algorithm, so other implementations can reproduce
the exact streams from the seed alone.
"""

from __future__ import annotations

import numpy as np


def portable_rng(seed: int = 0) -> np.random.Generator:
    """Philox generator keyed by ``seed``; equal seeds give equal streams."""
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))
