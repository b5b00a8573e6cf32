"""Generalized Grover search by direct state-vector simulation.

The iteration is ``G I_t``, where ``I_t`` multiplies marked basis states by
``exp(i gamma)`` and ``G = -U I_s U^dagger`` with ``I_s`` multiplying the
source state ``|s>`` by ``exp(i beta)``.  Starting from ``|g(0)> = U|s>``,
``n`` iterations give ``|g(n)> = (G I_t)^n U|s>``.

Basis ordering for two spins is ``|uu>, |ud>, |du>, |dd>`` (index 0..3), with
spin 1 as the most significant bit.  Operators are dense matrices.
"""

from __future__ import annotations

from collections.abc import Iterable
from functools import reduce

import numpy as np

from ._linalg import as_matrix, basis_state, check_unitary, dagger, fidelity
from .errors import ValidationError

__all__ = [
    "as_marked",
    "phase_oracle",
    "reflection_about_source",
    "grover_operator",
    "grover_iteration",
    "spin_rotation",
    "two_spin_rotation",
    "walsh_hadamard",
    "prepare_initial",
    "run_iterations",
    "success_probability",
    "fidelity",
]


def as_marked(marked: Iterable[int], dim: int) -> tuple[int, ...]:
    """Validate a marked set and return it as a sorted tuple of indices."""
    members = tuple(sorted(int(i) for i in marked))
    if len(set(members)) != len(members):
        raise ValidationError(f"marked set has duplicates: {members}")
    for i in members:
        if not 0 <= i < dim:
            raise ValidationError(f"marked index {i} outside [0, {dim})")
    return members


def phase_oracle(marked: Iterable[int], gamma: float, dim: int) -> np.ndarray:
    """Diagonal ``I_t``: ``exp(i gamma)`` on marked states, 1 elsewhere."""
    diag = np.ones(dim, dtype=complex)
    diag[list(as_marked(marked, dim))] = np.exp(1j * gamma)
    return np.diag(diag)


def reflection_about_source(source: int, beta: float, dim: int) -> np.ndarray:
    """``I_s = I - (1 - exp(i beta)) |s><s|``."""
    if not 0 <= source < dim:
        raise IndexError(f"source index {source} out of range for dimension {dim}")
    diag = np.ones(dim, dtype=complex)
    diag[source] = np.exp(1j * beta)
    return np.diag(diag)


def grover_operator(U, source: int, beta: float) -> np.ndarray:
    """``G = -U I_s U^dagger``."""
    U = check_unitary(U)
    return -U @ reflection_about_source(source, beta, U.shape[0]) @ dagger(U)


def grover_iteration(U, source: int, marked: Iterable[int], beta: float, gamma: float) -> np.ndarray:
    """One full step ``G I_t`` as a matrix."""
    U = check_unitary(U)
    return grover_operator(U, source, beta) @ phase_oracle(marked, gamma, U.shape[0])


def spin_rotation(axis: str, angle: float) -> np.ndarray:
    """Single spin-1/2 rotation ``exp(+i angle I_axis)`` for axis ``x`` or ``y``.

    With this sign, ``spin_rotation("y", phi) = [[c, s], [-s, c]]`` where
    ``c = cos(phi/2)``, ``s = sin(phi/2)``.
    """
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    if axis == "x":
        return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)
    if axis == "y":
        return np.array([[c, s], [-s, c]], dtype=complex)
    raise ValidationError(f"rotation axis must be 'x' or 'y', got {axis!r}")


def two_spin_rotation(axes: tuple[str, str] = ("y", "y"), angles: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """Tensor product of independent rotations on spin 1 and spin 2."""
    return np.kron(spin_rotation(axes[0], angles[0]), spin_rotation(axes[1], angles[1]))


def walsh_hadamard(n_qubits: int) -> np.ndarray:
    """``H^{(x) n}`` with ``H = [[1, 1], [1, -1]] / sqrt(2)``."""
    if n_qubits < 1:
        raise ValidationError("need at least one qubit")
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    return reduce(np.kron, [h] * n_qubits)


def prepare_initial(U, source: int) -> np.ndarray:
    """``|g(0)> = U|s>``, i.e. column ``source`` of ``U``."""
    U = check_unitary(U)
    return U @ basis_state(source, U.shape[0])


def run_iterations(U, source: int, marked: Iterable[int], beta: float, gamma: float, n: int) -> np.ndarray:
    """Apply ``n`` Grover iterations to ``U|s>`` and return the state vector."""
    if n < 0:
        raise ValidationError(f"iteration count must be >= 0, got {n}")
    U = as_matrix(U)
    step = grover_iteration(U, source, marked, beta, gamma)
    state = prepare_initial(U, source)
    for _ in range(n):
        state = step @ state
    return state


def success_probability(state, marked: Iterable[int]) -> float:
    """Total probability on the marked basis states."""
    state = np.asarray(state, dtype=complex)
    idx = list(as_marked(marked, state.shape[0]))
    return float(np.sum(np.abs(state[idx]) ** 2))
