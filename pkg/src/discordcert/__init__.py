"""Simulation and certification of an entangling gate via quantum discord.

A separable-but-discordant two-qubit state, four Pauli encoding keys, and
a Bell-basis readout give an information rate that no single-qubit
strategy can match; beating the classical rate certifies that the
measurement device implements an entangling operation. The package
simulates the protocol end to end (including a two-photon Fock model of
the post-selected CZ gate), estimates the rate from trial counts, and
issues the statistical verdict.
"""
from .correlations import (
    CorrelationReport,
    MeasurementModel,
    classical_correlation,
    discord,
    entropy,
    holevo,
    mutual_information,
)
from .estimate import (
    BootstrapResult,
    CountTable,
    Verdict,
    bootstrap_sigma,
    certify,
    plugin_mi,
    verdict_to_json,
)
from .optics import (
    CZCircuit,
    MismatchModel,
    PPBSSpec,
    TwoPhotonFockState,
    apply_beamsplitter,
    bell_povm_from_overlap,
    cz_circuit,
    effective_bell_povm,
    process_amplitudes,
    xi_of_dtau,
)
from .protocol import (
    ChannelModel,
    Rates,
    RunResult,
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
)
from .qstate import (
    ALL_KEYS,
    BELL_LABELS,
    DensityMatrix,
    EncodingKey,
    ProductEnsemble,
    bell_projector,
    bell_state,
    depolarize,
    encode,
    encoding_unitary,
    maximally_mixed,
    product_decomposition,
    resource_state,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
