import numpy as np
import pytest

from discordcert import protocol, rng
from discordcert.correlations import entropy
from discordcert.optics import FAILURE_LABEL, MismatchModel, effective_bell_povm
from discordcert.protocol import (
    CLASSICAL_ZZ,
    DECODE_QUANTUM,
    OMITTED_BELL,
    QUANTUM_BELL,
    ChannelModel,
    Rates,
    Strategy,
    TrialRecord,
    alice_sample,
    bell_channel,
    channel_mi,
    classical_strategy,
    classical_strategy_run,
    decode_quantum,
    i_c_noise,
    i_q_noise,
    measure,
    quantum_strategy,
    rates,
    run_trial,
    run_trials,
    strategy_for,
    zz_povm,
)
from discordcert.qstate import (
    ALL_KEYS,
    BELL_LABELS,
    EncodingKey,
    bell_projector,
    depolarize,
    encode,
    encode_vector,
    product_decomposition,
    resource_state,
)

I_Q = 2 - np.log2(3)
I_C = 5 / 3 - np.log2(3)


# --- encoding / decoding structure -------------------------------------------

def test_encoded_mixture_omits_exactly_one_bell_state():
    rho = resource_state()
    for k in ALL_KEYS:
        enc = encode(rho, k)
        for label in BELL_LABELS:
            w = np.trace(bell_projector(label) @ enc.mat).real
            if label == OMITTED_BELL[k]:
                assert abs(w) < 1e-12
            else:
                assert w == pytest.approx(1 / 3, abs=1e-12)


def test_decode_quantum_is_the_inverse_bijection():
    assert decode_quantum("psi_minus") == EncodingKey(0, 0)
    assert decode_quantum("psi_plus") == EncodingKey(0, 1)
    assert decode_quantum("phi_minus") == EncodingKey(1, 0)
    assert decode_quantum("phi_plus") == EncodingKey(1, 1)
    assert sorted(DECODE_QUANTUM.values()) == sorted(ALL_KEYS)
    with pytest.raises(ValueError):
        decode_quantum(FAILURE_LABEL)


def test_quantum_channel_matrix_structure():
    # relabeling outcomes by the decoder: P(k_m | k) has one zero per row,
    # on the diagonal, and 1/3 elsewhere
    rows = np.zeros((4, 4))
    rho = resource_state()
    for k in ALL_KEYS:
        enc = encode(rho, k)
        for label in BELL_LABELS:
            w = np.trace(bell_projector(label) @ enc.mat).real
            rows[k.index, decode_quantum(label).index] += w
    np.testing.assert_allclose(rows.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.diag(rows), 0.0, atol=1e-12)
    np.testing.assert_allclose(rows + np.eye(4) / 3, 1 / 3, atol=1e-12)


# --- strategies ---------------------------------------------------------------

def test_zz_povm_is_computational_basis():
    m = zz_povm()
    assert m.labels == ("00", "01", "10", "11")
    total = sum(e for _, e in m.elements)
    np.testing.assert_allclose(total, np.eye(4), atol=1e-15)


def test_strategy_validation():
    m = zz_povm()
    with pytest.raises(ValueError, match="kind"):
        Strategy("guessing", m, {l: None for l in m.labels})
    with pytest.raises(ValueError, match="missing"):
        Strategy(CLASSICAL_ZZ, m, {"00": None})


def test_strategy_factories():
    q = quantum_strategy()
    assert q.kind == QUANTUM_BELL
    assert set(q.measurement.labels) == set(BELL_LABELS)
    qm = quantum_strategy(MismatchModel(0.1))
    assert FAILURE_LABEL in qm.measurement.labels
    assert qm.decoder[FAILURE_LABEL] is None
    c = classical_strategy()
    assert c.kind == CLASSICAL_ZZ
    assert c.coin_second_bit
    # parity decode: identical results -> b1=0
    assert c.decode("00", 0) == EncodingKey(0, 0)
    assert c.decode("11", 1) == EncodingKey(0, 1)
    assert c.decode("01", 0) == EncodingKey(1, 0)
    assert strategy_for(QUANTUM_BELL).kind == QUANTUM_BELL
    with pytest.raises(ValueError):
        strategy_for("other")


def test_trial_record_invariant():
    with pytest.raises(ValueError):
        TrialRecord(EncodingKey(0, 0), "phi_plus", None, coincident=True)
    with pytest.raises(ValueError):
        TrialRecord(EncodingKey(0, 0), FAILURE_LABEL, EncodingKey(1, 1), coincident=False)


# --- samplers -----------------------------------------------------------------

def test_alice_sample_deterministic():
    k1, v1 = alice_sample(33, 7)
    k2, v2 = alice_sample(33, 7)
    assert k1 == k2
    np.testing.assert_array_equal(v1, v2)


def test_alice_sample_key_marginal_uniform():
    n = 400_000
    keys = rng.randint(9, np.arange(n, dtype=np.uint64), rng.DRAW_KEY, 4)
    counts = np.bincount(keys, minlength=4)
    band = 4 * np.sqrt(n * 0.25 * 0.75)
    assert np.all(np.abs(counts - n / 4) < band)


def test_alice_preparation_averages_to_encoded_resource():
    # exact mixture over the six preparations at fixed key
    members = product_decomposition().members
    for k in ALL_KEYS:
        avg = sum(w * np.outer(encode_vector(v, k), encode_vector(v, k).conj())
                  for w, v in members)
        np.testing.assert_allclose(avg, encode(resource_state(), k).mat, atol=1e-12)


def test_alice_sample_prep_marginal():
    # all six preparations occur at roughly equal rates
    n = 60_000
    draws = rng.randint(10, np.arange(n, dtype=np.uint64), rng.DRAW_PREP, 6)
    counts = np.bincount(draws, minlength=6)
    band = 4 * np.sqrt(n * (1 / 6) * (5 / 6))
    assert np.all(np.abs(counts - n / 6) < band)


def test_measure_on_eigenstate_is_deterministic():
    e01 = np.array([0, 1, 0, 0], dtype=complex)
    for trial in range(50):
        assert measure(e01, zz_povm(), 5, trial) == "01"


def test_measure_omitted_outcome_never_occurs():
    rho = encode(resource_state(), EncodingKey(1, 0))
    m = quantum_strategy().measurement
    outcomes = {measure(rho, m, 77, t) for t in range(2000)}
    assert OMITTED_BELL[EncodingKey(1, 0)] not in outcomes
    assert outcomes == set(BELL_LABELS) - {"phi_minus"}


def test_measure_noisy_omitted_rate():
    p = 0.6
    k = EncodingKey(0, 1)
    rho = encode(depolarize(resource_state(), p), k)
    m = quantum_strategy().measurement
    n = 20_000
    hits = sum(measure(rho, m, 123, t) == OMITTED_BELL[k] for t in range(n))
    expect = (1 - p) / 4
    band = 4 * np.sqrt(expect * (1 - expect) / n)
    assert abs(hits / n - expect) < band


def test_measure_validates_probability_sum():
    sub = np.array([0.5, 0, 0, 0], dtype=complex)  # norm 1/2 pseudo-state
    with pytest.raises(ValueError, match="sum"):
        measure(sub, zz_povm(), 0, 0)


def test_classical_strategy_run_parity():
    rho = encode(resource_state(), EncodingKey(0, 1))
    n = 20_000
    first_bits = [classical_strategy_run(rho, 42, t).b1 for t in range(n)]
    rate = np.mean(np.asarray(first_bits) == 0)  # correct-parity fraction
    assert abs(rate - 2 / 3) < 4 * np.sqrt((2 / 3) * (1 / 3) / n)
    second_bits = [classical_strategy_run(rho, 42, t).b2 for t in range(2000)]
    assert abs(np.mean(second_bits) - 0.5) < 4 * np.sqrt(0.25 / 2000)


# --- trial loop ----------------------------------------------------------------

def test_run_trial_matches_run_trials():
    n = 600
    for strategy, model in (
        (quantum_strategy(), ChannelModel(1.0)),
        (quantum_strategy(), ChannelModel(0.4)),
        (classical_strategy(), ChannelModel(0.8)),
        (quantum_strategy(MismatchModel(0.07)), ChannelModel(1.0, MismatchModel(0.07))),
    ):
        result = run_trials(strategy, model, n, seed=101)
        counts = np.zeros((4, 4), dtype=np.int64)
        coincident = 0
        for t in range(n):
            rec = run_trial(strategy, model, 101, t)
            if rec.coincident:
                counts[rec.k.index, rec.k_m.index] += 1
                coincident += 1
        np.testing.assert_array_equal(result.counts, counts)
        assert result.n_coincident == coincident
        assert result.n_trials == n


def test_run_trials_deterministic_and_seed_sensitive():
    a = run_trials(quantum_strategy(), ChannelModel(1.0), 5000, seed=1)
    b = run_trials(quantum_strategy(), ChannelModel(1.0), 5000, seed=1)
    c = run_trials(quantum_strategy(), ChannelModel(1.0), 5000, seed=2)
    np.testing.assert_array_equal(a.counts, b.counts)
    assert not np.array_equal(a.counts, c.counts)


def test_run_trials_block_boundary_independence():
    # counts must not depend on the internal block partition: the trials that
    # straddle the first block boundary must match the scalar path exactly
    strategy = quantum_strategy()
    model = ChannelModel(0.9)
    n_head, n_tail = 1 << 18, 37
    big = run_trials(strategy, model, n_head + n_tail, seed=3)
    head = run_trials(strategy, model, n_head, seed=3)
    assert big.n_trials == n_head + n_tail
    assert big.counts.sum() == big.n_coincident == big.n_trials

    tail = np.zeros((4, 4), dtype=np.int64)
    for t in range(n_head, n_head + n_tail):
        rec = run_trial(strategy, model, 3, t)
        tail[rec.k.index, rec.k_m.index] += 1
    np.testing.assert_array_equal(big.counts - head.counts, tail)

    # the omitted outcome reappears at rate (1 - p) / 4 under noise
    diag_rate = np.diag(big.counts).sum() / big.n_trials
    assert abs(diag_rate - 0.025) < 5 * np.sqrt(0.025 * 0.975 / big.n_trials)


def test_run_trials_mismatch_coincidence_rate():
    m = MismatchModel(0.0)
    res = run_trials(quantum_strategy(m), ChannelModel(1.0, m), 40_000, seed=4)
    # optical analyzer succeeds 1/9 of the time
    rate = res.n_coincident / res.n_trials
    assert abs(rate - 1 / 9) < 4 * np.sqrt((1 / 9) * (8 / 9) / res.n_trials)


def test_channel_model_validation():
    with pytest.raises(ValueError):
        ChannelModel(noise_p=1.5)
    with pytest.raises(ValueError):
        run_trials(quantum_strategy(), ChannelModel(1.0), 0, seed=1)


# --- closed-form rates ----------------------------------------------------------

def test_channel_mi_landmarks():
    assert channel_mi(np.full((4, 4), 0.25)) == 0.0
    assert channel_mi(np.eye(4)) == pytest.approx(2.0, abs=1e-12)
    ideal = np.array([[0, 1 / 3, 1 / 3, 1 / 3],
                      [1 / 3, 0, 1 / 3, 1 / 3],
                      [1 / 3, 1 / 3, 0, 1 / 3],
                      [1 / 3, 1 / 3, 1 / 3, 0]])
    assert channel_mi(ideal) == pytest.approx(I_Q, abs=1e-12)
    with pytest.raises(ValueError):
        channel_mi(np.full((4, 4), 0.3))


def test_bell_channel_rows():
    rows = bell_channel(0.5)
    np.testing.assert_allclose(rows.sum(axis=1), 1.0, atol=1e-12)
    for i, k in enumerate(ALL_KEYS):
        j = BELL_LABELS.index(OMITTED_BELL[k])
        assert rows[i, j] == pytest.approx(0.125, abs=1e-12)  # (1-p)/4


def test_holevo_saturation_on_noise_grid():
    for p in np.linspace(0.0, 1.0, 21):
        lhs = channel_mi(bell_channel(p))
        rhs = 2.0 - entropy(depolarize(resource_state(), p))
        assert abs(lhs - rhs) < 1e-9


def test_rate_pins():
    assert i_q_noise(1.0) == pytest.approx(0.4150374992788439, abs=1e-12)
    assert i_c_noise(1.0) == pytest.approx(0.0817041659455107, abs=1e-12)
    assert i_q_noise(0.5) == pytest.approx(0.0695933686693917, abs=1e-12)
    assert i_c_noise(0.5) == pytest.approx(0.0201312433488472, abs=1e-12)
    assert i_q_noise(0.0) == pytest.approx(0.0, abs=1e-12)
    assert i_c_noise(0.0) == pytest.approx(0.0, abs=1e-12)


def test_rates_ideal():
    r = rates(ChannelModel(1.0))
    assert r.i_q == pytest.approx(0.4150375, abs=1e-7)
    assert r.i_c == pytest.approx(0.0817042, abs=1e-7)
    assert r.advantage == pytest.approx(1 / 3, abs=1e-7)
    assert r.i_q_analytic == r.i_q
    with pytest.raises(ValueError):
        Rates(i_q=0.4, i_c=0.1, advantage=0.2, i_q_analytic=0.4)


def test_rates_under_mismatch():
    for dtau in (0.05, 0.125):
        model = ChannelModel(1.0, MismatchModel(dtau))
        r = rates(model)
        # the optics-derived rate sits at or below the substitution curve
        assert r.i_q <= r.i_q_analytic + 1e-12
        # the classical strategy needs no interference: untouched by mismatch
        assert r.i_c == pytest.approx(i_c_noise(1.0), abs=1e-12)
    r = rates(ChannelModel(1.0, MismatchModel(0.05)))
    assert r.i_q == pytest.approx(0.227441811546, abs=1e-9)
    r = rates(ChannelModel(1.0, MismatchModel(0.125)))
    assert r.i_q == pytest.approx(0.036275372950, abs=1e-9)


def test_coincidence_probability_is_key_independent():
    # justifies renormalizing rows independently: post-selection does not
    # skew the key prior
    rho = resource_state()
    for v_dtau in (0.03, 0.1, 0.22):
        povm = effective_bell_povm(MismatchModel(v_dtau))
        success = sum(e for l, e in povm.elements if l != FAILURE_LABEL)
        probs = [np.trace(success @ encode(rho, k).mat).real for k in ALL_KEYS]
        assert max(probs) - min(probs) < 1e-12


def test_eq1_discord_equals_rate_gap():
    from discordcert.correlations import discord
    for p in (0.25, 0.6, 1.0):
        rep = discord(depolarize(resource_state(), p))
        gap = i_q_noise(p) - i_c_noise(p)
        assert abs(rep.discord - gap) < 1e-6
