"""Dense complex linear algebra for the 2x2 and 4x4 operators used here.

Convention fixed across the package: qubit A is the left (most significant)
tensor factor, so the two-qubit computational basis is ordered
|00>, |01>, |10>, |11>.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DIM = 64


def as_operator(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermiticity_residual(m) -> float:
    """max |M - M^dagger|, elementwise."""
    a = as_operator(m)
    return float(np.max(np.abs(a - a.conj().T)))


def tensor(a, b) -> np.ndarray:
    """Kronecker product a (x) b; the left factor is most significant."""
    a = as_operator(a)
    b = as_operator(b)
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_DIM:
        raise ValueError(f"tensor result dimension {dim} exceeds the supported {MAX_DIM}")
    return np.kron(a, b)


def partial_trace(rho, keep: str) -> np.ndarray:
    """Trace one qubit out of a two-qubit operator; keep is 'A' or 'B'."""
    r = as_operator(rho)
    if r.shape != (4, 4):
        raise ValueError(f"partial_trace expects a 4x4 matrix, got {r.shape[0]}x{r.shape[1]}")
    t = r.reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("abcb->ac", t)
    if keep == "B":
        return np.einsum("abac->bc", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues ascending (real), eigenvectors as orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_hermitian(m) -> HermitianEigen:
    a = as_operator(m)
    res = hermiticity_residual(a)
    if res > 1e-8:
        raise ValueError(f"matrix is not Hermitian: residual {res:.3e} exceeds 1e-08")
    w, v = np.linalg.eigh(a)
    return HermitianEigen(eigenvalues=w, eigenvectors=v)
