"""Seed derivation and random-number streams.

All stochastic code in the package draws from counter-based Philox
generators keyed through ``numpy.random.SeedSequence``, so that

* identical (inputs, seed) give bit-identical samples, and
* independent sub-streams (per pixel, per measurement) can be derived
  from one master seed without any shared mutable state, which keeps
  parallel and serial execution byte-identical.

Seed paths are small integer tuples, e.g. ``(master, 0, x, y, 0)`` for the
fringe scan of pixel (x, y) and ``(master, 1)`` for the shared calibration.
"""

import numpy as np


def derive_seed(master_seed: int, *path: int) -> int:
    """Derive a 64-bit sub-seed from a master seed and an integer path."""
    if master_seed < 0:
        raise ValueError(f"seed must be non-negative, got {master_seed}")
    ss = np.random.SeedSequence([int(master_seed), *[int(p) for p in path]])
    return int(ss.generate_state(1, np.uint64)[0])


def make_generator(seed: int) -> np.random.Generator:
    """Philox (counter-based) generator for a single derived seed."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))
