"""Closed-form amplitude evolution for the generalized Grover iteration.

Dividing each amplitude by its preparation amplitude ``U[i, s]`` makes every
marked state share one value ``kbar(n)`` and every unmarked state share one
value ``lbar(n)``.  The pair obeys a linear two-term recursion

    (kbar(n+1), lbar(n+1)) = A (kbar(n), lbar(n)),   (kbar(0), lbar(0)) = (1, 1)

with ``A`` depending only on the phases and on the probability weights
``W_k = sum_{i in M} |U[i,s]|^2`` and ``W_l = 1 - W_k``.  Powers of ``A`` are
evaluated through its (closed-form) eigendecomposition.
"""

from __future__ import annotations

import cmath
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from ._linalg import check_unitary
from .errors import DefectiveMatrixError, ValidationError, VanishingAmplitudeError
from .grover import as_marked

__all__ = [
    "Weights",
    "TransferMatrix",
    "AmplitudeTrajectory",
    "weights",
    "transfer_matrix",
    "eigensystem_2x2",
    "averages_at",
    "amplitudes_at",
    "find_target_iteration",
    "power_period",
]

ZERO_AMPLITUDE_TOL = 1e-12
TARGET_TOL = 1e-9
_SIMILARITY_DET_MIN = 1e-8
_DEGENERATE_ROOT = 1e-7


@dataclass(frozen=True)
class Weights:
    """Probability mass of the prepared state on marked / unmarked states."""

    marked: float
    unmarked: float

    def __post_init__(self):
        if abs(self.marked + self.unmarked - 1.0) > 1e-12:
            raise ValidationError(f"weights must sum to 1, got {self.marked} + {self.unmarked}")


@dataclass(frozen=True)
class TransferMatrix:
    matrix: np.ndarray
    eigenvalues: tuple[complex, complex]
    similarity: np.ndarray
    inverse_similarity: np.ndarray

    def power(self, n: int) -> np.ndarray:
        """``A^n = S diag(lambda^n) S^-1``."""
        if n < 0:
            raise ValidationError(f"power must be >= 0, got {n}")
        lam = np.array(self.eigenvalues) ** n
        return self.similarity @ np.diag(lam) @ self.inverse_similarity


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Solver output at one iteration count."""

    n: int
    kbar: complex
    lbar: complex
    amplitudes: np.ndarray
    marked: tuple[int, ...]

    @property
    def marked_amplitudes(self) -> dict[int, complex]:
        return {i: complex(self.amplitudes[i]) for i in self.marked}

    @property
    def unmarked_amplitudes(self) -> dict[int, complex]:
        mk = set(self.marked)
        return {i: complex(a) for i, a in enumerate(self.amplitudes) if i not in mk}


def weights(U, source: int, marked: Iterable[int]) -> Weights:
    U = check_unitary(U)
    if not 0 <= source < U.shape[0]:
        raise IndexError(f"source index {source} out of range for dimension {U.shape[0]}")
    col = np.abs(U[:, source]) ** 2
    mask = np.zeros(U.shape[0], dtype=bool)
    mask[list(as_marked(marked, U.shape[0]))] = True
    w_k = float(col[mask].sum())
    # 1 - w_k rather than the complementary sum keeps the pair exactly normalized
    return Weights(w_k, 1.0 - w_k)


def eigensystem_2x2(a) -> tuple[tuple[complex, complex], np.ndarray, np.ndarray]:
    """Eigenvalues, eigenvector matrix ``S`` and ``S^-1`` of a 2x2 matrix.

    Uses the quadratic characteristic polynomial.  A scalar matrix gets
    ``S = I``; any other matrix with a repeated eigenvalue is defective and
    raises :class:`DefectiveMatrixError`.
    """
    a = np.asarray(a, dtype=complex)
    (p, q), (r, t) = a
    tr = p + t
    root = cmath.sqrt((p - t) ** 2 + 4 * q * r)
    lam = ((tr + root) / 2, (tr - root) / 2)
    scale = max(1.0, float(np.max(np.abs(a))))

    # rounding of size eps in the entries moves the root by ~sqrt(eps)
    if abs(root) <= _DEGENERATE_ROOT * scale:
        if max(abs(q), abs(r), abs(p - t)) <= 1e-12 * scale:
            eye = np.eye(2, dtype=complex)
            return (tr / 2, tr / 2), eye, eye.copy()
        raise DefectiveMatrixError(tr / 2)

    cols = []
    for mu in lam:
        v1 = np.array([q, mu - p])
        v2 = np.array([mu - t, r])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        cols.append(v / np.linalg.norm(v))
    S = np.column_stack(cols)
    det = S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
    if abs(det) <= _SIMILARITY_DET_MIN:
        raise DefectiveMatrixError(tr / 2)
    S_inv = np.array([[S[1, 1], -S[0, 1]], [-S[1, 0], S[0, 0]]]) / det
    return lam, S, S_inv


def transfer_matrix(beta: float, gamma: float, w: Weights) -> TransferMatrix:
    """Build the 2x2 recursion matrix and attach its eigendecomposition."""
    eg = cmath.exp(1j * gamma)
    d = 1 - cmath.exp(1j * beta)
    a = np.array(
        [
            [eg * d * w.marked - eg, d * w.unmarked],
            [eg * d * w.marked, d * w.unmarked - 1],
        ],
        dtype=complex,
    )
    lam, S, S_inv = eigensystem_2x2(a)
    return TransferMatrix(a, lam, S, S_inv)


def averages_at(tm: TransferMatrix, n: int) -> tuple[complex, complex]:
    """``(kbar(n), lbar(n))`` from eigenvalue powers applied to ``(1, 1)``."""
    if n < 0:
        raise ValidationError(f"iteration count must be >= 0, got {n}")
    lam = np.array(tm.eigenvalues) ** n
    v = tm.similarity @ (lam * (tm.inverse_similarity @ np.ones(2)))
    return complex(v[0]), complex(v[1])


def _column_checked(U, source: int) -> np.ndarray:
    U = check_unitary(U)
    if not 0 <= source < U.shape[0]:
        raise IndexError(f"source index {source} out of range for dimension {U.shape[0]}")
    col = U[:, source]
    for i, u in enumerate(col):
        if abs(u) <= ZERO_AMPLITUDE_TOL:
            raise VanishingAmplitudeError(i, complex(u))
    return col


def amplitudes_at(U, source: int, marked: Iterable[int], beta: float, gamma: float, n: int) -> AmplitudeTrajectory:
    """Amplitudes of ``|g(n)>`` as ``U[i,s] * kbar(n)`` or ``U[i,s] * lbar(n)``."""
    col = _column_checked(U, source)
    mk = as_marked(marked, col.shape[0])
    tm = transfer_matrix(beta, gamma, weights(U, source, mk))
    kbar, lbar = averages_at(tm, n)
    factor = np.full(col.shape[0], lbar, dtype=complex)
    factor[list(mk)] = kbar
    return AmplitudeTrajectory(n, kbar, lbar, col * factor, mk)


def find_target_iteration(
    U, source: int, marked: Iterable[int], beta: float, gamma: float, n_max: int
) -> tuple[int, np.ndarray] | None:
    """Smallest ``n`` in ``[1, n_max]`` with ``|lbar(n)| < 1e-9``.

    Returns ``(n, state)`` where ``state = sum_{i in M} U[i,s] kbar(n) |i>``,
    or ``None`` when the unmarked amplitudes never vanish in range.
    """
    col = _column_checked(U, source)
    mk = as_marked(marked, col.shape[0])
    tm = transfer_matrix(beta, gamma, weights(U, source, mk))
    for n in range(1, n_max + 1):
        kbar, lbar = averages_at(tm, n)
        if abs(lbar) < TARGET_TOL:
            state = np.zeros_like(col)
            state[list(mk)] = col[list(mk)] * kbar
            return n, state / np.linalg.norm(state)
    return None


def power_period(tm: TransferMatrix, max_period: int = 24, tol: float = 1e-10) -> tuple[int, complex] | None:
    """Smallest ``p`` with ``A^p = c I``, so that ``A^(n+p) = c A^n`` for all ``n``."""
    for p in range(1, max_period + 1):
        ap = tm.power(p)
        c = ap[0, 0]
        if np.max(np.abs(ap - c * np.eye(2))) < tol:
            return p, complex(c)
    return None
