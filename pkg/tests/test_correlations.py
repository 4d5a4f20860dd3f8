import numpy as np
import pytest

from discordcert import correlations
from discordcert.correlations import (
    MeasurementModel,
    bloch_projectors,
    classical_correlation,
    discord,
    entropy,
    holevo,
    measure_conditional,
    mutual_information,
)
from discordcert.qstate import (
    ALL_KEYS,
    DensityMatrix,
    bell_projector,
    depolarize,
    encode,
    maximally_mixed,
    resource_state,
)

LOG2_3 = np.log2(3)
I_Q = 2 - LOG2_3                    # 0.4150374992788439
I_C = 5 / 3 - LOG2_3                # 0.0817041659455107


def _random_density(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = a @ a.conj().T
    return DensityMatrix(m / np.trace(m).real)


def test_entropy_landmarks():
    assert entropy(DensityMatrix(bell_projector("phi_plus"))) == pytest.approx(0.0, abs=1e-12)
    assert entropy(maximally_mixed(4)) == pytest.approx(2.0, abs=1e-12)
    assert entropy(maximally_mixed(2)) == pytest.approx(1.0, abs=1e-12)
    assert entropy(resource_state()) == pytest.approx(LOG2_3, abs=1e-12)


def test_mutual_information_landmarks():
    assert mutual_information(maximally_mixed(4)) == pytest.approx(0.0, abs=1e-12)
    assert mutual_information(DensityMatrix(bell_projector("psi_minus"))) == pytest.approx(2.0, abs=1e-12)
    assert mutual_information(resource_state()) == pytest.approx(I_Q, abs=1e-12)


def test_measurement_model_validation():
    p0 = np.diag([1.0, 0.0]).astype(complex)
    with pytest.raises(ValueError):
        MeasurementModel((("0", p0),))  # incomplete
    with pytest.raises(ValueError):
        MeasurementModel((("0", p0), ("0", np.eye(2) - p0)))  # duplicate labels
    with pytest.raises(ValueError):
        MeasurementModel((("0", 2 * p0), ("1", np.eye(2, dtype=complex) - 2 * p0)))  # not PSD


def test_bloch_projectors_complete_and_pure():
    for theta, phi in ((0.0, 0.0), (1.1, 2.2), (np.pi / 2, np.pi)):
        m = bloch_projectors(theta, phi)
        total = sum(e for _, e in m.elements)
        np.testing.assert_allclose(total, np.eye(2), atol=1e-12)
        for _, e in m.elements:
            np.testing.assert_allclose(e @ e, e, atol=1e-12)


def test_conditional_ensemble_of_resource():
    # conditioning B on the computational basis leaves A in (2/3, 1/3) mixtures
    ens = measure_conditional(resource_state(), bloch_projectors(0.0, 0.0))
    assert len(ens.members) == 2
    for p_b, rho_a in ens.members:
        assert p_b == pytest.approx(0.5, abs=1e-12)
        np.testing.assert_allclose(np.sort(rho_a.eigenvalues()),
                                   [1 / 3, 2 / 3], atol=1e-12)


def test_classical_correlation_resource_angle_independent():
    # the resource state is U(x)U invariant, so every measurement direction
    # extracts the same information
    rho = resource_state()
    j_ref = 1 - (-(2 / 3) * np.log2(2 / 3) - (1 / 3) * np.log2(1 / 3))
    for theta, phi in ((0.0, 0.0), (0.7, 1.9), (np.pi / 2, 0.3), (2.0, 5.5)):
        m = bloch_projectors(theta, phi)
        ens = measure_conditional(rho, m)
        cond = sum(p * correlations.entropy(r) for p, r in ens.members)
        assert 1 - cond == pytest.approx(j_ref, abs=1e-12)
    j, _ = classical_correlation(rho)
    assert j == pytest.approx(j_ref, abs=1e-9)
    assert j == pytest.approx(I_C, abs=1e-9)


def test_discord_of_resource_state():
    rep = discord(resource_state())
    assert rep.discord == pytest.approx(1 / 3, abs=1e-6)
    assert rep.mutual_info == pytest.approx(I_Q, abs=1e-12)
    assert rep.classical_corr == pytest.approx(I_C, abs=1e-6)


def test_discord_both_sides_agree_on_symmetric_state():
    rho = resource_state()
    assert discord(rho, side="A").discord == pytest.approx(discord(rho, side="B").discord, abs=1e-6)


def test_discord_vanishes_on_product_and_classical_states():
    rho_prod = maximally_mixed(4)
    assert discord(rho_prod).discord == pytest.approx(0.0, abs=1e-9)
    # classical-classical state: diagonal correlated mixture
    cc = DensityMatrix(np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex))
    rep = discord(cc)
    assert rep.discord == pytest.approx(0.0, abs=1e-6)
    assert rep.mutual_info == pytest.approx(1.0, abs=1e-9)


def test_discord_of_bell_state_is_one():
    rep = discord(DensityMatrix(bell_projector("phi_plus")))
    assert rep.mutual_info == pytest.approx(2.0, abs=1e-9)
    assert rep.classical_corr == pytest.approx(1.0, abs=1e-6)
    assert rep.discord == pytest.approx(1.0, abs=1e-6)


def test_discord_nonnegative_on_random_states():
    rng = np.random.default_rng(4)
    for _ in range(8):
        rep = discord(_random_density(rng))
        assert rep.discord >= -1e-6
        assert rep.classical_corr >= 0.0
        assert rep.mutual_info >= rep.classical_corr - 1e-8


def test_holevo_of_pure_product_decomposition():
    from discordcert.qstate import product_decomposition
    ens = [(w, DensityMatrix(np.outer(v, v.conj()))) for w, v in product_decomposition().members]
    assert holevo(ens) == pytest.approx(LOG2_3, abs=1e-12)


def test_holevo_of_encoded_ensemble_is_quantum_rate():
    rho = resource_state()
    ens = [(0.25, encode(rho, k)) for k in ALL_KEYS]
    # the four encodings average to the maximally mixed state
    avg = sum(0.25 * e.mat for _, e in ens)
    np.testing.assert_allclose(avg, np.eye(4) / 4, atol=1e-12)
    assert holevo(ens) == pytest.approx(I_Q, abs=1e-12)


def test_holevo_validation():
    with pytest.raises(ValueError):
        holevo([(0.7, maximally_mixed(4))])  # weights don't sum to 1
    with pytest.raises(ValueError):
        holevo([(0.5, maximally_mixed(4)), (0.5, maximally_mixed(2))])  # mixed dims
