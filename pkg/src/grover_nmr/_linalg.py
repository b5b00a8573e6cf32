"""Small dense linear-algebra helpers shared by the simulators."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

UNITARY_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    return a


def unitarity_error(u: np.ndarray) -> float:
    """Max-entry deviation of ``u^dagger u`` from the identity."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    return unitarity_error(as_matrix(u)) < tol


def check_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    a = as_matrix(u)
    err = unitarity_error(a)
    if err >= tol:
        raise ValidationError(f"matrix is not unitary (max |U^dagger U - I| = {err:.3e})")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def fidelity(a, b) -> float:
    """Overlap ``|<a|b>|^2`` of two normalized state vectors; blind to global phase."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValidationError(f"state shapes differ: {a.shape} vs {b.shape}")
    return float(abs(np.vdot(a, b)) ** 2)


def basis_state(index: int, dim: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise IndexError(f"basis index {index} out of range for dimension {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v
