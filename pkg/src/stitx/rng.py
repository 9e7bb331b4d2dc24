"""Reproducible random streams for parallel Monte Carlo.

Each stream is a counter-based Philox generator keyed through numpy's
SeedSequence by an integer tuple, typically (master_seed, purpose_tag,
index..., replication).  Streams for distinct keys are statistically
independent and do not depend on the order in which they are consumed, so
replications can run on any worker layout and still reproduce bit-identical
results.
"""

from __future__ import annotations

import numpy as np

# Purpose tags keep streams for different sampling jobs disjoint even when
# the remaining key components collide.
TAG_REPLICATION = 0
TAG_BOOTSTRAP = 1
TAG_PAIR = 2
TAG_DISK = 3


def stream(*key: int) -> np.random.Generator:
    """Independent generator for a tuple of nonnegative integers."""
    parts = []
    for k in key:
        k = int(k)
        if k < 0:
            raise ValueError(f"stream key components must be nonnegative, got {k}")
        parts.append(k)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(parts)))


def replication_stream(master_seed: int, *index: int) -> np.random.Generator:
    """Stream for one replication, keyed by (master_seed, indices...)."""
    return stream(master_seed, TAG_REPLICATION, *index)
