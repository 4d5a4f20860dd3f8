"""Entropy, mutual information, classical correlation, discord, Holevo.

All logarithms are base 2 (results in bits) and 0*log(0) := 0. Classical
correlation J maximizes the entropy reduction of the unmeasured qubit over
rank-1 projective measurements of the other, J(A|B) = S(rho_A) - min sum_b
p_b S(rho_{A|b}); discord is delta(A|B) = I(A,B) - J(A|B).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .qlin import partial_trace, tensor
from .qstate import IDENTITY_2, DensityMatrix

PSD_TOL = 1e-8
COMPLETENESS_TOL = 1e-8
EIG_CLIP = 1e-8  # eigenvalues in [-EIG_CLIP, 0) count as 0 in entropies

_GRID_THETA = 64
_GRID_PHI = 64
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class MeasurementModel:
    """A labeled POVM: tuple of (label, element) pairs.

    Elements must be PSD to 1e-8 and sum to the identity to 1e-8.
    """

    elements: tuple

    def __post_init__(self):
        if not self.elements:
            raise ValueError("measurement model needs at least one element")
        labels = [label for label, _ in self.elements]
        if len(set(labels)) != len(labels):
            raise ValueError("measurement outcome labels must be unique")
        dim = np.asarray(self.elements[0][1]).shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for label, e in self.elements:
            m = np.asarray(e, dtype=complex)
            if m.shape != (dim, dim):
                raise ValueError(f"element {label!r} has shape {m.shape}, expected {(dim, dim)}")
            if np.max(np.abs(m - m.conj().T)) > PSD_TOL:
                raise ValueError(f"element {label!r} is not Hermitian")
            lowest = float(np.linalg.eigvalsh(m)[0])
            if lowest < -PSD_TOL:
                raise ValueError(f"element {label!r} is not PSD (eigenvalue {lowest:.3e})")
            total += m
        residual = float(np.max(np.abs(total - np.eye(dim))))
        if residual > COMPLETENESS_TOL:
            raise ValueError(f"POVM completeness residual {residual:.3e} exceeds 1e-08")

    @property
    def dim(self) -> int:
        return np.asarray(self.elements[0][1]).shape[0]

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.elements)


@dataclass(frozen=True)
class ConditionalEnsemble:
    """Post-measurement ensemble: tuple of (p_b, conditional DensityMatrix)."""

    members: tuple

    def __post_init__(self):
        probs = np.array([p for p, _ in self.members], dtype=float)
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError("conditional probabilities must be nonnegative and sum to 1")


@dataclass(frozen=True)
class CorrelationReport:
    mutual_info: float
    classical_corr: float
    discord: float
    theta: float
    phi: float

    def __post_init__(self):
        if self.discord < -1e-6:
            raise ValueError(f"discord {self.discord:.3e} below optimizer slack -1e-06")


def _entropy_bits(eigenvalues) -> float:
    w = np.asarray(eigenvalues, dtype=float)
    w = np.where((w >= -EIG_CLIP) & (w < 0.0), 0.0, w)
    nz = w[w > 0.0]
    return float(max(0.0, -(nz * np.log2(nz)).sum()))


def _entropy_mat(mat) -> float:
    return _entropy_bits(np.linalg.eigvalsh(mat))


def entropy(rho: DensityMatrix) -> float:
    """von Neumann entropy in bits."""
    return _entropy_bits(rho.eigenvalues())


def mutual_information(rho: DensityMatrix) -> float:
    """I(A,B) = S(rho_A) + S(rho_B) - S(rho_AB)."""
    if rho.dim != 4:
        raise ValueError("mutual_information expects a two-qubit state")
    sa = _entropy_mat(partial_trace(rho.mat, "A"))
    sb = _entropy_mat(partial_trace(rho.mat, "B"))
    return sa + sb - entropy(rho)


def bloch_projectors(theta: float, phi: float) -> MeasurementModel:
    """Projective qubit measurement along the Bloch direction (theta, phi)."""
    ket = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    p0 = np.outer(ket, ket.conj())
    return MeasurementModel((("0", p0), ("1", IDENTITY_2 - p0)))


def measure_conditional(rho: DensityMatrix, m: MeasurementModel) -> ConditionalEnsemble:
    """Measure qubit B; p_b = Tr[(I x Pi_b) rho], conditional on A renormalized.

    Outcomes with p_b < 1e-12 are dropped.
    """
    if rho.dim != 4:
        raise ValueError("measure_conditional expects a two-qubit state")
    if m.dim != 2:
        raise ValueError("measurement must act on qubit B (2x2 elements)")
    members = []
    for _, element in m.elements:
        weighted = tensor(IDENTITY_2, element) @ rho.mat
        sub = np.einsum("abcb->ac", weighted.reshape(2, 2, 2, 2))
        p = float(sub.trace().real)
        if p < 1e-12:
            continue
        cond = sub / p
        members.append((p, DensityMatrix((cond + cond.conj().T) / 2)))
    return ConditionalEnsemble(tuple(members))


def _avg_conditional_entropy(mat4, theta: float, phi: float) -> float:
    # fast path used inside the optimizer: no DensityMatrix construction
    ket = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    p0 = np.outer(ket, ket.conj())
    total = 0.0
    for proj in (p0, IDENTITY_2 - p0):
        weighted = (np.kron(IDENTITY_2, proj) @ mat4).reshape(2, 2, 2, 2)
        sub = np.einsum("abcb->ac", weighted)
        p = float(sub.trace().real)
        if p < 1e-12:
            continue
        total += p * _entropy_mat((sub + sub.conj().T) / (2 * p))
    return total


_SWAP_PERM = np.array([0, 2, 1, 3])


def classical_correlation(rho: DensityMatrix, side: str = "B"):
    """J and its argmax Bloch angles; side names the measured qubit.

    Optimization: 64x64 (theta, phi) grid, lexicographically first grid
    optimum, then Nelder-Mead refinement. Deterministic.
    """
    if rho.dim != 4:
        raise ValueError("classical_correlation expects a two-qubit state")
    if side not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    mat = rho.mat
    if side == "A":
        mat = mat[np.ix_(_SWAP_PERM, _SWAP_PERM)]
    s_kept = _entropy_mat(np.einsum("abcb->ac", mat.reshape(2, 2, 2, 2)))

    thetas = np.linspace(0.0, np.pi, _GRID_THETA)
    phis = np.linspace(0.0, 2 * np.pi, _GRID_PHI, endpoint=False)
    values = np.empty((_GRID_THETA, _GRID_PHI))
    for i, th in enumerate(thetas):
        for j, ph in enumerate(phis):
            values[i, j] = _avg_conditional_entropy(mat, th, ph)
    best = values.min()
    i0, j0 = next((i, j) for i in range(_GRID_THETA) for j in range(_GRID_PHI)
                  if values[i, j] <= best + _TIE_TOL)

    res = minimize(lambda x: _avg_conditional_entropy(mat, x[0], x[1]),
                   x0=[thetas[i0], phis[j0]], method="Nelder-Mead",
                   options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 600})
    if res.fun <= values[i0, j0]:
        theta, phi = float(res.x[0]), float(res.x[1])
        cond = float(res.fun)
    else:  # pragma: no cover - refinement can only improve in practice
        theta, phi = float(thetas[i0]), float(phis[j0])
        cond = float(values[i0, j0])

    # canonicalize angles onto theta in [0, pi], phi in [0, 2pi)
    theta = theta % (2 * np.pi)
    if theta > np.pi:
        theta = 2 * np.pi - theta
        phi = phi + np.pi
    phi = phi % (2 * np.pi)
    if theta < 1e-12 or np.pi - theta < 1e-12:
        phi = 0.0
    return max(0.0, s_kept - cond), (theta, phi)


def discord(rho: DensityMatrix, side: str = "B") -> CorrelationReport:
    """delta = I - J; discord(rho, 'B') conditions on measurements of B."""
    i_ab = mutual_information(rho)
    j, (theta, phi) = classical_correlation(rho, side)
    return CorrelationReport(mutual_info=i_ab, classical_corr=j,
                             discord=i_ab - j, theta=theta, phi=phi)


def holevo(ensemble) -> float:
    """S(sum p_i rho_i) - sum p_i S(rho_i) for a list of (p_i, DensityMatrix)."""
    probs = np.array([p for p, _ in ensemble], dtype=float)
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-10:
        raise ValueError("ensemble probabilities must be nonnegative and sum to 1")
    dims = {r.dim for _, r in ensemble}
    if len(dims) != 1:
        raise ValueError(f"ensemble members have mixed dimensions {sorted(dims)}")
    avg = sum(p * r.mat for p, r in ensemble)
    chi = _entropy_mat(avg) - sum(p * entropy(r) for p, r in ensemble)
    return max(0.0, chi)
