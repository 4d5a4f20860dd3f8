"""State constructors and channels.

Pauli operators, Bell states, the discordant two-qubit resource state with
its separable six-state preparation ensemble, the white-noise channel, and
the four Pauli encoding unitaries U_k = sigma_x^b1 sigma_z^b2 on qubit A.

Polarization-to-logical mapping is fixed: |H> -> |0>, |V> -> |1>.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .qlin import as_operator, hermiticity_residual, tensor

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

HERMITICITY_TOL = 1e-8
TRACE_TOL = 1e-10
EIGENVALUE_TOL = 1e-8


class DensityMatrix:
    """A validated density operator on one or two qubits.

    Construction checks: Hermitian to 1e-8, unit trace to 1e-10, smallest
    eigenvalue >= -1e-8. The stored matrix is immutable.
    """

    __slots__ = ("mat",)

    def __init__(self, mat):
        m = as_operator(mat)
        if m.shape[0] not in (2, 4):
            raise ValueError(f"density matrix dimension must be 2 or 4, got {m.shape[0]}")
        res = hermiticity_residual(m)
        if res > HERMITICITY_TOL:
            raise ValueError(f"density matrix is not Hermitian: residual {res:.3e}")
        tr = complex(m.trace())
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr.real:.12g} is not 1 within 1e-10")
        lowest = float(np.linalg.eigvalsh(m)[0])
        if lowest < -EIGENVALUE_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {lowest:.3e}")
        m = m.copy()
        m.flags.writeable = False
        self.mat = m

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.mat)

    def __repr__(self) -> str:  # pragma: no cover
        return f"DensityMatrix(dim={self.dim})"


class EncodingKey(NamedTuple):
    """The pair of classical bits k = (b1, b2) Alice encodes."""

    b1: int
    b2: int

    @property
    def index(self) -> int:
        return 2 * self.b1 + self.b2


ALL_KEYS = (EncodingKey(0, 0), EncodingKey(0, 1), EncodingKey(1, 0), EncodingKey(1, 1))

_SQ2 = 1.0 / np.sqrt(2.0)
_BELL_VECTORS = {
    "phi_plus": np.array([_SQ2, 0, 0, _SQ2], dtype=complex),
    "phi_minus": np.array([_SQ2, 0, 0, -_SQ2], dtype=complex),
    "psi_plus": np.array([0, _SQ2, _SQ2, 0], dtype=complex),
    "psi_minus": np.array([0, _SQ2, -_SQ2, 0], dtype=complex),
}
BELL_LABELS = tuple(_BELL_VECTORS)


def bell_state(which: str) -> np.ndarray:
    """Bell state vector; which is one of phi_plus/phi_minus/psi_plus/psi_minus."""
    try:
        return _BELL_VECTORS[which].copy()
    except KeyError:
        raise ValueError(f"unknown Bell state {which!r}; expected one of {BELL_LABELS}") from None


def bell_projector(which: str) -> np.ndarray:
    v = bell_state(which)
    return np.outer(v, v.conj())


def resource_state() -> DensityMatrix:
    """Equal mixture of the three symmetric Bell states.

    Separable but discordant: eigenvalues {0, 1/3, 1/3, 1/3}, discord 1/3.
    """
    m = sum(bell_projector(b) for b in ("phi_plus", "phi_minus", "psi_plus")) / 3.0
    return DensityMatrix(m)


def maximally_mixed(dim: int = 4) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class ProductEnsemble:
    """Mixture of pure product states: tuple of (weight, two-qubit vector)."""

    members: tuple

    def __post_init__(self):
        weights = np.array([w for w, _ in self.members], dtype=float)
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-10:
            raise ValueError("ensemble weights must be nonnegative and sum to 1")
        for _, vec in self.members:
            v = np.asarray(vec, dtype=complex)
            if v.shape != (4,) or abs(np.linalg.norm(v) - 1.0) > 1e-10:
                raise ValueError("ensemble members must be unit 4-vectors")
            s = np.linalg.svd(v.reshape(2, 2), compute_uv=False)
            if s[1] > 1e-10:
                raise ValueError(
                    f"ensemble member is not a product state (Schmidt coefficient {s[1]:.3e})")

    def mixture(self) -> DensityMatrix:
        m = sum(w * np.outer(v, np.conj(v)) for w, v in self.members)
        return DensityMatrix(m)


def product_decomposition() -> ProductEnsemble:
    """The six-state separable preparation of the resource state.

    HH, VV, DD, AA, RR, LL with weight 1/6 each; the equal weighting is what
    makes the mixture reproduce the resource state exactly.
    """
    h = np.array([1, 0], dtype=complex)
    v = np.array([0, 1], dtype=complex)
    d = (h + v) * _SQ2
    a = (h - v) * _SQ2
    r = (h + 1j * v) * _SQ2
    l = (h - 1j * v) * _SQ2
    members = tuple((1 / 6, np.kron(x, x)) for x in (h, v, d, a, r, l))
    return ProductEnsemble(members)


def depolarize(rho: DensityMatrix, p: float) -> DensityMatrix:
    """White noise: p*rho + (1-p)*I/4 (or I/2 on one qubit)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise survival p must lie in [0, 1], got {p}")
    dim = rho.dim
    return DensityMatrix(p * rho.mat + (1.0 - p) * np.eye(dim) / dim)


def encoding_unitary(k: EncodingKey) -> np.ndarray:
    """Single-qubit encoding U_k = sigma_x^b1 sigma_z^b2."""
    b1, b2 = k
    if b1 not in (0, 1) or b2 not in (0, 1):
        raise ValueError(f"encoding key bits must be 0 or 1, got {k}")
    u = IDENTITY_2
    if b1:
        u = SIGMA_X @ u
    if b2:
        u = u @ SIGMA_Z
    return u


def encode(rho: DensityMatrix, k: EncodingKey) -> DensityMatrix:
    """Apply U_k to qubit A: (U_k (x) I) rho (U_k (x) I)^dagger."""
    u = tensor(encoding_unitary(k), IDENTITY_2)
    return DensityMatrix(u @ rho.mat @ u.conj().T)


def encode_vector(vec, k: EncodingKey) -> np.ndarray:
    u = tensor(encoding_unitary(k), IDENTITY_2)
    return u @ np.asarray(vec, dtype=complex)


# --- JSON import/export ---------------------------------------------------

def matrix_to_document(mat) -> dict:
    m = as_operator(mat)
    return {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_document(doc: dict) -> np.ndarray:
    try:
        dim = int(doc["dim"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"matrix document missing/invalid field: {exc}") from None
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(f"matrix document entries do not match dim={dim}")
    return re + 1j * im


def to_json(rho: DensityMatrix) -> str:
    return json.dumps(matrix_to_document(rho.mat), indent=2) + "\n"


def from_json(text: str) -> DensityMatrix:
    """Parse and validate a density matrix from its JSON document."""
    return DensityMatrix(matrix_from_document(json.loads(text)))
