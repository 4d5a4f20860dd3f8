"""The certification protocol: Alice's sampler/encoder, Bob's strategies,
decoders, and closed-form information rates.

Alice draws a key k = (b1, b2) uniformly, encodes it on qubit A of the
shared discordant state with U_k = sigma_x^b1 sigma_z^b2, and sends both
qubits to Bob. Bob either measures in the Bell basis (quantum strategy —
each encoded mixture omits exactly one Bell state, so the outcome
eliminates one key) or measures sigma_z on each qubit and guesses the
first bit from the parity (classical strategy; the second bit is a coin).

Rates: the Bell strategy extracts I_q = 2 - S(rho) bits per trial — the
Holevo limit of the encoded ensemble — while the best single-qubit-gate
strategy is capped at I_c = 1 - H2(1/2 - p/6). Their gap equals the
discord of the shared state, which is what makes beating I_c a
certificate of an entangling measurement.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import rng
from .correlations import MeasurementModel, entropy
from .optics import FAILURE_LABEL, MismatchModel, effective_bell_povm, ideal_bell_projectors
from .qstate import (
    ALL_KEYS,
    BELL_LABELS,
    DensityMatrix,
    EncodingKey,
    depolarize,
    encode,
    encode_vector,
    product_decomposition,
    resource_state,
)

QUANTUM_BELL = "quantum_bell"
CLASSICAL_ZZ = "classical_zz"
STRATEGY_KINDS = (QUANTUM_BELL, CLASSICAL_ZZ)

PROB_SUM_TOL = 1e-8

# Key -> the one Bell state absent from encode(resource, k). The resource is
# the uniform mixture of {phi+, phi-, psi+}; U_k permutes the Bell basis, and
# the image of the missing psi- identifies k.
OMITTED_BELL = {
    EncodingKey(0, 0): "psi_minus",
    EncodingKey(0, 1): "psi_plus",
    EncodingKey(1, 0): "phi_minus",
    EncodingKey(1, 1): "phi_plus",
}
DECODE_QUANTUM = {label: k for k, label in OMITTED_BELL.items()}

ZZ_LABELS = ("00", "01", "10", "11")


@dataclass(frozen=True)
class ChannelModel:
    """Noise survival probability p plus optional gate mismatch."""

    noise_p: float = 1.0
    mismatch: MismatchModel | None = None

    def __post_init__(self):
        if not 0.0 <= self.noise_p <= 1.0:
            raise ValueError(f"noise_p must lie in [0, 1], got {self.noise_p}")


@dataclass(frozen=True)
class Strategy:
    """Bob's measurement plus the outcome -> key report rule.

    decoder maps every measurement label to an EncodingKey, or to None for
    outcomes that yield no estimate (non-coincidence). When coin_second_bit
    is set the decoded b2 is replaced by a fresh fair bit each trial — the
    classical strategy learns nothing about b2 from a ZZ measurement.
    """

    kind: str
    measurement: MeasurementModel
    decoder: Mapping[str, EncodingKey | None]
    coin_second_bit: bool = False

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"strategy kind must be one of {STRATEGY_KINDS}, got {self.kind!r}")
        missing = [l for l in self.measurement.labels if l not in self.decoder]
        if missing:
            raise ValueError(f"decoder missing measurement labels {missing}")

    def decode(self, outcome: str, coin: int) -> EncodingKey | None:
        k = self.decoder[outcome]
        if k is None:
            return None
        return EncodingKey(k.b1, int(coin)) if self.coin_second_bit else k


@dataclass(frozen=True)
class TrialRecord:
    k: EncodingKey
    outcome: str
    k_m: EncodingKey | None
    coincident: bool

    def __post_init__(self):
        if (self.k_m is not None) != self.coincident:
            raise ValueError("k_m must be present exactly when the trial is coincident")


@dataclass(frozen=True)
class Rates:
    """Per-trial information rates in bits; advantage = i_q - i_c.

    i_q_analytic always carries the closed-form curve 2 - S(rho(p_eff));
    i_q equals it for an ideal gate and is the optics-derived channel rate
    under mismatch (the two genuinely differ away from the endpoints).
    """

    i_q: float
    i_c: float
    advantage: float
    i_q_analytic: float

    def __post_init__(self):
        if abs(self.advantage - (self.i_q - self.i_c)) > 1e-12:
            raise ValueError("advantage must equal i_q - i_c")


def zz_povm() -> MeasurementModel:
    """Computational-basis product measurement sigma_z (x) sigma_z."""
    elements = []
    for n, label in enumerate(ZZ_LABELS):
        e = np.zeros((4, 4), dtype=complex)
        e[n, n] = 1.0
        elements.append((label, e))
    return MeasurementModel(tuple(elements))


def quantum_strategy(mismatch: MismatchModel | None = None) -> Strategy:
    """Bell-basis strategy; with mismatch the analyzer is the simulated
    optical POVM (1/9 success at best) instead of ideal projectors."""
    m = ideal_bell_projectors() if mismatch is None else effective_bell_povm(mismatch)
    decoder = {label: DECODE_QUANTUM.get(label) for label in m.labels}
    return Strategy(QUANTUM_BELL, m, decoder)


def classical_strategy() -> Strategy:
    decoder = {label: EncodingKey(label.count("1") % 2, 0) for label in ZZ_LABELS}
    return Strategy(CLASSICAL_ZZ, zz_povm(), decoder, coin_second_bit=True)


def strategy_for(kind: str, mismatch: MismatchModel | None = None) -> Strategy:
    if kind == QUANTUM_BELL:
        return quantum_strategy(mismatch)
    if kind == CLASSICAL_ZZ:
        return classical_strategy()
    raise ValueError(f"unknown strategy kind {kind!r}")


# --- Alice ------------------------------------------------------------------

def alice_sample(seed: int, trial: int) -> tuple[EncodingKey, np.ndarray]:
    """Sample one trial's key and prepared (already encoded) pure state.

    The discordant state is built sequentially: each trial prepares one of
    the six product states uniformly, then applies U_k. Averaging the
    preparation at fixed k reproduces encode(resource_state(), k).
    Deterministic in (seed, trial).
    """
    k = ALL_KEYS[rng.randint(seed, trial, rng.DRAW_KEY, 4)]
    members = product_decomposition().members
    _, vec = members[rng.randint(seed, trial, rng.DRAW_PREP, len(members))]
    return k, encode_vector(vec, k)


# --- Bob --------------------------------------------------------------------

def outcome_probabilities(state, m: MeasurementModel) -> np.ndarray:
    """Born probabilities Tr[E_b rho] in the model's label order."""
    if isinstance(state, DensityMatrix):
        rho = state.mat
    else:
        v = np.asarray(state, dtype=complex)
        rho = np.outer(v, v.conj())
    p = np.array([np.trace(e @ rho).real for _, e in m.elements])
    return np.clip(p, 0.0, None)


def measure(state, m: MeasurementModel, seed: int, trial: int) -> str:
    """Sample one outcome label from the POVM on `state` (matrix or vector)."""
    p = outcome_probabilities(state, m)
    if abs(p.sum() - 1.0) > PROB_SUM_TOL:
        raise ValueError(f"outcome probabilities sum to {p.sum():.12g}, not 1")
    u = rng.uniform(seed, trial, rng.DRAW_OUTCOME)
    idx = int(np.searchsorted(np.cumsum(p), u, side="right"))
    return m.labels[min(idx, len(p) - 1)]


def decode_quantum(outcome: str) -> EncodingKey:
    """Report the one key eliminated by the Bell outcome (k_m != k always)."""
    try:
        return DECODE_QUANTUM[outcome]
    except KeyError:
        raise ValueError(f"not a Bell outcome label: {outcome!r}") from None


def classical_strategy_run(state, seed: int, trial: int) -> EncodingKey:
    """ZZ measurement; b1 guessed from the parity, b2 from a fair coin."""
    outcome = measure(state, zz_povm(), seed, trial)
    coin = rng.randint(seed, trial, rng.DRAW_COIN, 2)
    return EncodingKey(outcome.count("1") % 2, coin)


# --- Trial loop ---------------------------------------------------------------

@dataclass(frozen=True)
class RunResult:
    """Aggregated coincidence counts: counts[k.index, k_m.index]."""

    counts: np.ndarray
    n_trials: int
    n_coincident: int


def _noisy_encoded(model: ChannelModel) -> list[DensityMatrix]:
    rho = depolarize(resource_state(), model.noise_p)
    return [encode(rho, k) for k in ALL_KEYS]


def _probability_table(strategy: Strategy, model: ChannelModel) -> np.ndarray:
    states = _noisy_encoded(model)
    return np.array([outcome_probabilities(s, strategy.measurement) for s in states])


def _decode_table(strategy: Strategy) -> np.ndarray:
    """(label index, coin) -> decoded key index, -1 for no estimate."""
    t = np.empty((len(strategy.measurement.labels), 2), dtype=np.int64)
    for n, label in enumerate(strategy.measurement.labels):
        for coin in (0, 1):
            k = strategy.decode(label, coin)
            t[n, coin] = -1 if k is None else k.index
    return t


def run_trial(strategy: Strategy, model: ChannelModel, seed: int, trial: int) -> TrialRecord:
    """One protocol trial; the vectorized run_trials reproduces it exactly."""
    k = ALL_KEYS[rng.randint(seed, trial, rng.DRAW_KEY, 4)]
    state = encode(depolarize(resource_state(), model.noise_p), k)
    outcome = measure(state, strategy.measurement, seed, trial)
    coin = rng.randint(seed, trial, rng.DRAW_COIN, 2)
    k_m = strategy.decode(outcome, coin)
    return TrialRecord(k=k, outcome=outcome, k_m=k_m, coincident=k_m is not None)


def run_trials(strategy: Strategy, model: ChannelModel, n_trials: int, seed: int) -> RunResult:
    """Run trials 0..n_trials-1 and aggregate the coincident (k, k_m) counts.

    Vectorized over trials: outcome probabilities depend only on k, so each
    trial needs just its key draw, one uniform for the Born sample, and the
    coin. Any block partition of the trial range yields identical counts.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    prob = _probability_table(strategy, model)
    sums = prob.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > PROB_SUM_TOL):
        raise ValueError(f"outcome probabilities sum to {sums}, not 1")
    cum = np.cumsum(prob, axis=1)
    decode = _decode_table(strategy)

    counts = np.zeros((4, 4), dtype=np.int64)
    n_coincident = 0
    block = 1 << 18
    for start in range(0, n_trials, block):
        trials = np.arange(start, min(start + block, n_trials), dtype=np.uint64)
        keys = rng.randint(seed, trials, rng.DRAW_KEY, 4)
        u = rng.uniform(seed, trials, rng.DRAW_OUTCOME)
        # row-wise searchsorted(cum[k], u, side="right"), clamped like measure()
        outcomes = np.minimum((u[:, None] >= cum[keys]).sum(axis=1), cum.shape[1] - 1)
        coins = rng.randint(seed, trials, rng.DRAW_COIN, 2)
        km = decode[outcomes, coins]
        ok = km >= 0
        n_coincident += int(ok.sum())
        np.add.at(counts, (keys[ok], km[ok]), 1)
    return RunResult(counts=counts, n_trials=n_trials, n_coincident=n_coincident)


# --- Closed-form rates --------------------------------------------------------

def channel_mi(rows) -> float:
    """Mutual information (bits) of a channel with uniform input prior.

    rows[i] is the conditional outcome distribution for input i; the result
    is H(mean row) - mean(H(row)) >= 0.
    """
    r = np.asarray(rows, dtype=float)
    if r.ndim != 2:
        raise ValueError(f"expected a 2-d array of rows, got shape {r.shape}")
    sums = r.sum(axis=1)
    if np.any(r < -1e-12) or np.any(np.abs(sums - 1.0) > PROB_SUM_TOL):
        raise ValueError(f"rows must be probability vectors (sums {sums})")

    def h(q):
        q = q[q > 1e-15]
        return float(-(q * np.log2(q)).sum())

    return max(0.0, h(r.mean(axis=0)) - float(np.mean([h(row) for row in r])))


def bell_channel(noise_p: float) -> np.ndarray:
    """Ideal Bell-measurement channel rows P(outcome | k) on rho(p).

    Columns follow BELL_LABELS order; the omitted outcome keeps only the
    white-noise floor (1-p)/4, the other three carry p/3 + (1-p)/4 each.
    """
    if not 0.0 <= noise_p <= 1.0:
        raise ValueError(f"noise_p must lie in [0, 1], got {noise_p}")
    floor = (1.0 - noise_p) / 4.0
    rows = np.full((4, 4), noise_p / 3.0 + floor)
    for i, k in enumerate(ALL_KEYS):
        rows[i, BELL_LABELS.index(OMITTED_BELL[k])] = floor
    return rows


def _h2(q: float) -> float:
    if q <= 0.0 or q >= 1.0:
        return 0.0
    return float(-q * np.log2(q) - (1.0 - q) * np.log2(1.0 - q))


def i_q_noise(p: float) -> float:
    """Quantum rate 2 - S(rho(p)): the Holevo limit of the encoded ensemble."""
    return 2.0 - entropy(depolarize(resource_state(), p))


def i_c_noise(p: float) -> float:
    """Classical (single-qubit-strategy) rate 1 - H2(1/2 - p/6)."""
    return 1.0 - _h2(0.5 - p / 6.0)


def optics_channel_rows(model: ChannelModel) -> np.ndarray:
    """Coincidence-renormalized Bell-outcome rows for the simulated gate.

    The coincidence probability is key-independent on this ensemble, so
    per-row renormalization matches global post-selection.
    """
    if model.mismatch is None:
        return bell_channel(model.noise_p)
    povm = effective_bell_povm(model.mismatch)
    full = _probability_table(quantum_strategy(model.mismatch), model)
    labels = povm.labels
    keep = [i for i, l in enumerate(labels) if l != FAILURE_LABEL]
    rows = full[:, keep]
    return rows / rows.sum(axis=1, keepdims=True)


def rates(model: ChannelModel) -> Rates:
    """Closed-form rates for the model; see Rates for the two i_q fields."""
    xi = 0.0 if model.mismatch is None else model.mismatch.xi
    p_eff = model.noise_p * (1.0 - xi)
    analytic = i_q_noise(p_eff)
    # A mismatched gate leaves the classical strategy untouched: it uses no
    # two-photon interference, so i_c depends on the state noise only.
    i_c = i_c_noise(model.noise_p)
    if model.mismatch is None:
        i_q = analytic
    else:
        i_q = channel_mi(optics_channel_rows(model))
    return Rates(i_q=i_q, i_c=i_c, advantage=i_q - i_c, i_q_analytic=analytic)
