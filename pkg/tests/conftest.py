import math

import numpy as np
import pytest

R2 = 1 / math.sqrt(2)
HALF_PI = math.pi / 2

# U = Y1(pi/2) Y2(pi/2)
U_YY = 0.5 * np.array([[1, 1, 1, 1], [-1, 1, -1, 1], [-1, -1, 1, 1], [1, -1, -1, 1]], dtype=complex)
# U = X1(pi/2) Y2(pi/2)
U_XY = 0.5 * np.array([[1, 1, 1j, 1j], [-1, 1, -1j, 1j], [1j, 1j, 1, 1], [-1j, 1j, -1, 1]], dtype=complex)

EPR = {
    "psi1": np.array([1, 0, 0, 1]) * R2,
    "psi2": np.array([1, 0, 0, -1]) * R2,
    "psi3": np.array([0, 1, 1, 0]) * R2,
    "psi4": np.array([0, 1, -1, 0]) * R2,
}

RHO1 = np.array([[0.25, 0, 0, 0.5], [0, -0.25, 0, 0], [0, 0, -0.25, 0], [0.5, 0, 0, 0.25]], dtype=complex)

READOUT = {
    "psi1": np.array([[0, -1, 1, 1], [-1, 0, -1, -1], [1, -1, 0, 1], [1, -1, 1, 0]]) / 4,
    "psi2": np.array([[0, -1, -1, -1], [-1, 0, 1, 1], [-1, 1, 0, 1], [-1, 1, 1, 0]]) / 4,
    "psi3": np.array([[0, 1, 1, -1], [1, 0, 1, -1], [1, 1, 0, -1], [-1, -1, -1, 0]]) / 4,
    "psi4": np.array([[0, 1, -1, 1], [1, 0, -1, 1], [-1, -1, 0, -1], [1, 1, -1, 0]]) / 4,
}
REF_CARBON = np.array([[1, 0, -2, 0], [0, -1, 0, 0], [-2, 0, 1, 0], [0, 0, 0, -1]]) / 4
REF_PROTON = np.array([[1, -2, 0, 0], [-2, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]) / 4
PSEUDO_PURE = np.diag([3, -1, -1, -1]) / 4


def phase_free_close(a, b, tol):
    """True if state vectors agree up to a global phase."""
    return abs(abs(np.vdot(a, b)) ** 2 - 1) < tol


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
