"""Empirical information estimation and the certification verdict.

Works purely on the 4x4 coincidence count table: a plug-in (maximum
likelihood) mutual-information estimate, a multinomial bootstrap for its
standard deviation, and the z-score test of the estimate against the
classical reference rate. The plug-in estimator carries a known positive
bias of order cells/N, negligible at the trial counts used here.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

N_KEYS = 4
MIN_TRIALS_FOR_BOOTSTRAP = 10
MIN_RESAMPLES = 100
DEFAULT_RESAMPLES = 1000
DEFAULT_Z_THRESHOLD = 5.0


@dataclass(frozen=True)
class CountTable:
    """Coincidence counts indexed by (true key, decoded key)."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.shape != (N_KEYS, N_KEYS):
            raise ValueError(f"count table must be {N_KEYS}x{N_KEYS}, got shape {c.shape}")
        if not np.issubdtype(c.dtype, np.integer):
            raise ValueError(f"count table must hold integers, got dtype {c.dtype}")
        if np.any(c < 0):
            raise ValueError("count table entries must be nonnegative")
        c = c.astype(np.int64).copy()
        c.flags.writeable = False
        object.__setattr__(self, "counts", c)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def plugin_mi(t: CountTable) -> float:
    """Plug-in mutual information (bits) of the empirical joint.

    Evaluated on integer ratios n_ij*N / (r_i*c_j) so that tables whose
    counts factor exactly come out as exactly 0.0. Clamped to [0, 2].
    """
    n = t.counts
    total = t.total
    if total < 1:
        raise ValueError("count table is empty")
    rows = n.sum(axis=1)
    cols = n.sum(axis=0)
    nz = n > 0
    ratio = (n[nz] * total).astype(float) / np.outer(rows, cols)[nz].astype(float)
    value = float(((n[nz] / total) * np.log2(ratio)).sum())
    return min(2.0, max(0.0, value))


@dataclass(frozen=True)
class BootstrapResult:
    """sigma is 0 with degenerate=True when the table has a single
    nonzero cell (every resample is the same table)."""

    sigma: float
    degenerate: bool
    resamples: int


def bootstrap_sigma(t: CountTable, resamples: int = DEFAULT_RESAMPLES,
                    seed: int = 0) -> BootstrapResult:
    """Std deviation of plugin_mi over multinomial resamples at fixed N.

    Each resample i redraws the N counts from the empirical cell
    frequencies with a generator keyed by (seed, i), so any subset can be
    computed independently; accumulation runs in index order for
    bit-reproducibility.
    """
    total = t.total
    if total < MIN_TRIALS_FOR_BOOTSTRAP:
        raise ValueError(f"need at least {MIN_TRIALS_FOR_BOOTSTRAP} counts, got {total}")
    if resamples < MIN_RESAMPLES:
        raise ValueError(f"need at least {MIN_RESAMPLES} resamples, got {resamples}")
    if int((t.counts > 0).sum()) == 1:
        return BootstrapResult(sigma=0.0, degenerate=True, resamples=resamples)

    p = (t.counts / total).ravel()
    acc = acc2 = 0.0
    for i in range(resamples):
        gen = np.random.Generator(np.random.Philox(key=[seed, i]))
        resampled = gen.multinomial(total, p).reshape(N_KEYS, N_KEYS)
        mi = plugin_mi(CountTable(resampled))
        acc += mi
        acc2 += mi * mi
    var = max(0.0, acc2 / resamples - (acc / resamples) ** 2)
    return BootstrapResult(sigma=float(np.sqrt(var)), degenerate=False, resamples=resamples)


@dataclass(frozen=True)
class Verdict:
    i_exp: float
    sigma: float
    i_c_ref: float
    z_score: float
    certified: bool
    z_threshold: float

    def __post_init__(self):
        if self.certified != (self.z_score >= self.z_threshold):
            raise ValueError("certified must equal (z_score >= z_threshold)")


def certify(i_exp: float, sigma: float, i_c_ref: float,
            z_threshold: float = DEFAULT_Z_THRESHOLD) -> Verdict:
    """z = (i_exp - i_c_ref) / sigma; certified iff z >= z_threshold."""
    if sigma <= 0.0:
        raise ValueError(
            "sigma must be positive; a degenerate bootstrap (single-cell table) "
            "yields sigma 0 and cannot support a verdict")
    z = (i_exp - i_c_ref) / sigma
    return Verdict(i_exp=i_exp, sigma=sigma, i_c_ref=i_c_ref, z_score=z,
                   certified=z >= z_threshold, z_threshold=z_threshold)


def verdict_to_json(v: Verdict, n_trials: int, seed: int) -> str:
    doc = {
        "i_exp": v.i_exp,
        "sigma": v.sigma,
        "i_c_ref": v.i_c_ref,
        "z_score": v.z_score,
        "certified": v.certified,
        "n_trials": int(n_trials),
        "seed": int(seed),
    }
    return json.dumps(doc, indent=2) + "\n"
