"""Deterministic counter-based random stream for the Monte Carlo protocol.

Every random draw is a pure function of ``(seed, trial_index, draw_index)``,
so any subset of trials can be generated in any order (or in parallel) with
identical results, and a fixed (config, seed) pair replays bit-for-bit.

Construction (so the contract can be reproduced elsewhere):

    counter = trial_index * DRAWS_PER_TRIAL + draw_index + 1        (uint64)
    base    = mix64(seed + GAMMA)                                    (uint64)
    bits    = mix64(base + counter * GAMMA)                          (uint64)
    u       = (bits >> 11) * 2**-53                                  in [0, 1)

where ``mix64`` is the splitmix64 finalizer (xor-shift/multiply avalanche,
constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB) and GAMMA is the
splitmix64 increment 0x9E3779B97F4A7C15. All arithmetic is modulo 2**64.
"""
from __future__ import annotations

import numpy as np

DRAWS_PER_TRIAL = 8  # reserved slots per trial; indices 4..7 are spare
DRAW_KEY = 0      # Alice's encoding key
DRAW_PREP = 1     # preparation-ensemble member
DRAW_OUTCOME = 2  # Bob's measurement outcome
DRAW_COIN = 3     # classical strategy's fair bit

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix64(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; operates on uint64 arrays (wraparound intended)
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _bits(seed: int, trial, draw: int) -> np.ndarray:
    t = np.atleast_1d(np.asarray(trial, dtype=np.uint64))
    counter = t * np.uint64(DRAWS_PER_TRIAL) + np.uint64(draw % DRAWS_PER_TRIAL + 1)
    base = _mix64(np.array([int(seed) & _MASK64], dtype=np.uint64) + _GAMMA)
    return _mix64(base + counter * _GAMMA)


def uniform(seed: int, trial, draw: int):
    """u in [0, 1) for counter (seed, trial, draw); trial may be an array."""
    u = (_bits(seed, trial, draw) >> np.uint64(11)) * np.float64(2.0 ** -53)
    if np.ndim(trial) == 0:
        return float(u[0])
    return u


def randint(seed: int, trial, draw: int, n: int):
    """Uniform integer in [0, n) keyed by (seed, trial, draw)."""
    u = _bits(seed, trial, draw) >> np.uint64(11)
    idx = (u * np.float64(2.0 ** -53) * n).astype(np.int64)
    idx = np.minimum(idx, n - 1)  # guard the u -> 1.0 rounding edge
    if np.ndim(trial) == 0:
        return int(idx[0])
    return idx


def derive_seed(seed: int, stream: int) -> int:
    """A decorrelated child seed (used for per-grid-point substreams)."""
    z = _mix64(np.array([(int(seed) ^ (int(stream) * 0x9E3779B97F4A7C15)) & _MASK64],
                        dtype=np.uint64) + _GAMMA)
    return int(z[0])
