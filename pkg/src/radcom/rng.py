"""Deterministic random-stream derivation.

All randomness in the package flows through numpy's PCG64 generator.  Distinct
streams (symbols, noise, per-trial Monte Carlo draws) are derived from one
master seed plus a tuple of tags, so results are reproducible and independent
of execution order or worker count.
"""

import hashlib

import numpy as np


def _tag_to_int(tag):
    if isinstance(tag, (int, np.integer)):
        return int(tag)
    digest = hashlib.blake2s(str(tag).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def seed_sequence(master_seed, *tags):
    """Build a SeedSequence from a master seed and a tuple of stream tags."""
    entropy = [int(master_seed)] + [_tag_to_int(t) for t in tags]
    return np.random.SeedSequence(entropy)


def make_rng(master_seed, *tags):
    """Generator for the stream identified by (master_seed, *tags)."""
    return np.random.default_rng(seed_sequence(master_seed, *tags))


def derived_seed(master_seed, *tags):
    """A plain 64-bit integer seed derived from (master_seed, *tags)."""
    return int(seed_sequence(master_seed, *tags).generate_state(1, np.uint64)[0])
