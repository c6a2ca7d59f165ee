"""Counter-based random streams.

Every stream is a Philox generator keyed by ``(seed, purpose, index)``, so
the values drawn for trial ``t`` never depend on which worker ran it or
in which order trials were scheduled.
"""

from __future__ import annotations

import numpy as np

# stream purposes; part of the key so different uses never collide
NOISE = 1
ANGLE = 2


def stream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    key = np.array([seed, (int(purpose) << 48) | int(index)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
