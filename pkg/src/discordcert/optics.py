"""Two-photon Fock simulation of the PPBS CZ gate and its Bell-analyzer POVM.

Mode layout: 8 modes indexed by (arm, polarization, temporal bin) with
arm a = control, arm b = target, |H> -> |0>, |V> -> |1>, and two temporal
bins (matched / orthogonal) that model wavepacket distinguishability. The
central PPBS mixes the two arms per polarization; two photons are
indistinguishable only within the same temporal bin, which is where the
nonclassical interference (and hence the conditional phase) comes from.

Gate recipe: PPBS with eta_V = 2/3, eta_H = 0, followed by a 1/sqrt(3)
H-polarization amplitude attenuation in each arm. On coincidence
post-selection (one photon per arm) every computational amplitude is 1/3
in magnitude with a sign flip on VV only — a CZ with success probability
1/9. Hadamards on the target (before and after) and on the control (after)
turn coincidence detection in H/V into a Bell-state analyzer.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlations import MeasurementModel
from .qstate import bell_projector

ARMS = ("a", "b")
POLARIZATIONS = ("H", "V")
TEMPORAL_BINS = ("matched", "orthogonal")
N_MODES = 8

FAILURE_LABEL = "failure"
# coincidence outcome (z_control, z_target) -> Bell label, from the
# CZ-plus-Hadamards analyzer: 00 -> phi+, 01 -> psi+, 10 -> phi-, 11 -> psi-
BELL_OF_OUTCOME = ("phi_plus", "psi_plus", "phi_minus", "psi_minus")


def mode_index(arm, polarization, temporal) -> int:
    """Stable mode index; accepts labels ('a','H','matched') or 0/1 ints."""
    a = ARMS.index(arm) if isinstance(arm, str) else int(arm)
    p = POLARIZATIONS.index(polarization) if isinstance(polarization, str) else int(polarization)
    t = TEMPORAL_BINS.index(temporal) if isinstance(temporal, str) else int(temporal)
    if not (0 <= a <= 1 and 0 <= p <= 1 and 0 <= t <= 1):
        raise ValueError(f"invalid mode labels ({arm!r}, {polarization!r}, {temporal!r})")
    return 4 * a + 2 * p + t


MODE_PAIRS = tuple((i, j) for i in range(N_MODES) for j in range(i, N_MODES))
_PAIR_POS = {pair: n for n, pair in enumerate(MODE_PAIRS)}


class TwoPhotonFockState:
    """Two photons over 8 modes: 36 amplitudes on unordered mode pairs.

    Basis kets are normalized Fock states; a doubly occupied mode i is
    |2_i> = (a_i^dag)^2 |0> / sqrt(2). Norm may be < 1: sub-normalized
    states carry post-selection/attenuation losses.
    """

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        a = np.asarray(amplitudes, dtype=complex)
        if a.shape != (len(MODE_PAIRS),):
            raise ValueError(f"expected {len(MODE_PAIRS)} pair amplitudes, got shape {a.shape}")
        n = float(np.linalg.norm(a))
        if n > 1.0 + 1e-9:
            raise ValueError(f"two-photon state norm {n:.12g} exceeds 1")
        a = a.copy()
        a.flags.writeable = False
        self.amplitudes = a

    @classmethod
    def from_pairs(cls, pairs: dict) -> "TwoPhotonFockState":
        amp = np.zeros(len(MODE_PAIRS), dtype=complex)
        for (i, j), value in pairs.items():
            amp[_PAIR_POS[(min(i, j), max(i, j))]] += value
        return cls(amp)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, i: int, j: int) -> complex:
        return complex(self.amplitudes[_PAIR_POS[(min(i, j), max(i, j))]])

    def coefficient_matrix(self) -> np.ndarray:
        """Symmetric C with state = sum_ij C_ij a_i^dag a_j^dag |0>."""
        c = np.zeros((N_MODES, N_MODES), dtype=complex)
        for n, (i, j) in enumerate(MODE_PAIRS):
            if i == j:
                c[i, i] = self.amplitudes[n] / np.sqrt(2)
            else:
                c[i, j] = c[j, i] = self.amplitudes[n] / 2
        return c

    @classmethod
    def from_coefficient_matrix(cls, c) -> "TwoPhotonFockState":
        amp = np.empty(len(MODE_PAIRS), dtype=complex)
        for n, (i, j) in enumerate(MODE_PAIRS):
            amp[n] = np.sqrt(2) * c[i, i] if i == j else 2 * c[i, j]
        return cls(amp)


def apply_mode_map(state: TwoPhotonFockState, m) -> TwoPhotonFockState:
    """Push a single-photon mode map a_i^dag -> sum_k m[k,i] a_k^dag through
    both photons: C -> m C m^T. m need not be unitary (attenuation)."""
    m = np.asarray(m, dtype=complex)
    c = state.coefficient_matrix()
    return TwoPhotonFockState.from_coefficient_matrix(m @ c @ m.T)


@dataclass(frozen=True)
class PPBSSpec:
    """Partially polarizing beamsplitter: intensity reflectivity per polarization."""

    eta_V: float
    eta_H: float = 0.0

    def __post_init__(self):
        for name, eta in (("eta_V", self.eta_V), ("eta_H", self.eta_H)):
            if not 0.0 <= eta <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {eta}")


def _arm_mixing(eta: float) -> np.ndarray:
    # Rotation convention: transmission amplitudes +sqrt(1-eta) on the
    # diagonal, reflections +/-sqrt(eta) off it. The relative minus between
    # the two reflections is what produces the two-photon coincidence
    # amplitude t^2 - r^2 (0 at eta=1/2, -1/3 at eta=2/3) and reduces to the
    # identity at eta=0.
    t, r = np.sqrt(1.0 - eta), np.sqrt(eta)
    return np.array([[t, r], [-r, t]])


def _ppbs_mode_map(spec: PPBSSpec) -> np.ndarray:
    u = np.zeros((N_MODES, N_MODES), dtype=complex)
    for pol, eta in ((0, spec.eta_H), (1, spec.eta_V)):
        b = _arm_mixing(eta)
        for tau in (0, 1):
            for out_arm in (0, 1):
                for in_arm in (0, 1):
                    u[mode_index(out_arm, pol, tau), mode_index(in_arm, pol, tau)] = b[out_arm, in_arm]
    return u


def apply_beamsplitter(state: TwoPhotonFockState, spec: PPBSSpec) -> TwoPhotonFockState:
    """Mix the two arms per polarization; temporal labels untouched."""
    return apply_mode_map(state, _ppbs_mode_map(spec))


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _arm_hadamard_map(arm: int) -> np.ndarray:
    u = np.eye(N_MODES, dtype=complex)
    for tau in (0, 1):
        for p_out in (0, 1):
            for p_in in (0, 1):
                u[mode_index(arm, p_out, tau), mode_index(arm, p_in, tau)] = _HADAMARD[p_out, p_in]
    return u


def _h_attenuation_map(amplitude: float) -> np.ndarray:
    d = np.ones(N_MODES, dtype=complex)
    for arm in (0, 1):
        for tau in (0, 1):
            d[mode_index(arm, 0, tau)] = amplitude
    return np.diag(d)


@dataclass(frozen=True)
class MismatchModel:
    """Temporal-mode mismatch: Delta_omega * Delta_tau = c_scale * dtau_ratio.

    xi = 1 - exp(-(c_scale*dtau_ratio)^2) is the mismatch fraction and
    v = sqrt(1 - xi) the wavepacket overlap amplitude. The default
    c_scale = 2*pi defines the coherence time as tau_coh = 2*pi/Delta_omega.
    """

    dtau_ratio: float
    c_scale: float = 2 * np.pi

    def __post_init__(self):
        if self.dtau_ratio < 0:
            raise ValueError(f"dtau_ratio must be nonnegative, got {self.dtau_ratio}")
        if self.c_scale <= 0:
            raise ValueError(f"c_scale must be positive, got {self.c_scale}")

    @property
    def xi(self) -> float:
        return xi_of_dtau(self)

    @property
    def overlap(self) -> float:
        return float(np.sqrt(max(0.0, 1.0 - self.xi)))


def xi_of_dtau(m: MismatchModel) -> float:
    """Mismatch fraction xi = 1 - exp(-(c_scale * dtau_ratio)^2)."""
    if m.dtau_ratio < 0:
        raise ValueError(f"dtau_ratio must be nonnegative, got {m.dtau_ratio}")
    x = m.c_scale * m.dtau_ratio
    return float(1.0 - np.exp(-(x * x)))


@dataclass(frozen=True)
class CZCircuit:
    """The post-selected CZ recipe and its Bell-analyzer Hadamard placement."""

    ppbs: PPBSSpec
    h_attenuation: float
    hadamard_target_before: bool
    hadamard_target_after: bool
    hadamard_control_after: bool


def cz_circuit() -> CZCircuit:
    return CZCircuit(ppbs=PPBSSpec(eta_V=2 / 3, eta_H=0.0),
                     h_attenuation=1 / np.sqrt(3),
                     hadamard_target_before=True,
                     hadamard_target_after=True,
                     hadamard_control_after=True)


def two_photon_input(control_pol: int, target_pol: int, overlap: float) -> TwoPhotonFockState:
    """One photon per arm; the target-arm photon is split v|matched> +
    sqrt(1-v^2)|orthogonal> against the control photon's matched bin."""
    if not 0.0 <= overlap <= 1.0:
        raise ValueError(f"overlap amplitude must lie in [0, 1], got {overlap}")
    w = float(np.sqrt(max(0.0, 1.0 - overlap * overlap)))
    return TwoPhotonFockState.from_pairs({
        (mode_index(0, control_pol, 0), mode_index(1, target_pol, 0)): overlap,
        (mode_index(0, control_pol, 0), mode_index(1, target_pol, 1)): w,
    })


def _propagate(control_pol: int, target_pol: int, overlap: float,
               circuit: CZCircuit, bell_analysis: bool) -> TwoPhotonFockState:
    state = two_photon_input(control_pol, target_pol, overlap)
    if bell_analysis and circuit.hadamard_target_before:
        state = apply_mode_map(state, _arm_hadamard_map(1))
    state = apply_beamsplitter(state, circuit.ppbs)
    state = apply_mode_map(state, _h_attenuation_map(circuit.h_attenuation))
    if bell_analysis:
        if circuit.hadamard_target_after:
            state = apply_mode_map(state, _arm_hadamard_map(1))
        if circuit.hadamard_control_after:
            state = apply_mode_map(state, _arm_hadamard_map(0))
    return state


def coincidence_amplitudes(state: TwoPhotonFockState) -> np.ndarray:
    """4x4 array over (polarization outcome z = 2*z_a + z_b, temporal
    configuration 2*tau_a + tau_b) for one photon in each arm."""
    out = np.zeros((4, 4), dtype=complex)
    for za in (0, 1):
        for zb in (0, 1):
            for ta in (0, 1):
                for tb in (0, 1):
                    out[2 * za + zb, 2 * ta + tb] = state.amplitude(
                        mode_index(0, za, ta), mode_index(1, zb, tb))
    return out


def process_amplitudes(overlap: float, bell_analysis: bool = False,
                       circuit: CZCircuit | None = None) -> np.ndarray:
    """Coincidence amplitudes, shape (4 outcomes, 4 temporal configs,
    4 computational inputs); inputs ordered |00>, |01>, |10>, |11>."""
    circuit = circuit or cz_circuit()
    m = np.zeros((4, 4, 4), dtype=complex)
    for q in (0, 1):
        for s in (0, 1):
            m[:, :, 2 * q + s] = coincidence_amplitudes(
                _propagate(q, s, overlap, circuit, bell_analysis))
    return m


def bell_povm_from_overlap(overlap: float) -> MeasurementModel:
    """Effective Bell-analyzer POVM at wavepacket overlap v.

    Temporal detector labels are traced out (summed incoherently), giving
    E_z = A_z^dag A_z on the input two-qubit space; the non-coincidence
    remainder I - sum_z E_z is the failure element. At v=1 the elements are
    exactly (1/9) x Bell projectors.
    """
    m = process_amplitudes(overlap, bell_analysis=True)
    elements = {}
    for z in range(4):
        a = m[z]  # (temporal config, input)
        elements[BELL_OF_OUTCOME[z]] = a.conj().T @ a
    total = sum(elements.values())
    failure = np.eye(4, dtype=complex) - total
    ordered = tuple((label, elements[label])
                    for label in ("phi_plus", "phi_minus", "psi_plus", "psi_minus"))
    return MeasurementModel(ordered + ((FAILURE_LABEL, failure),))


def effective_bell_povm(m: MismatchModel) -> MeasurementModel:
    return bell_povm_from_overlap(m.overlap)


def ideal_bell_projectors() -> MeasurementModel:
    """The v=1 analyzer without the 1/9 success factor: plain Bell projectors."""
    return MeasurementModel(tuple(
        (label, bell_projector(label))
        for label in ("phi_plus", "phi_minus", "psi_plus", "psi_minus")))
