"""Counter-based random streams.

Every stream is a Philox generator keyed by a seed derived from a tuple of
integers, so a draw depends only on (key, position in stream) and never on
scheduling order.
"""

from __future__ import annotations

import numpy as np


def derive_seed(*keys: int) -> int:
    """Hash a tuple of non-negative integers into one 64-bit seed."""
    ss = np.random.SeedSequence([int(k) for k in keys])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))
