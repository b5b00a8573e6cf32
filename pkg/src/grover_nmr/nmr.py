"""Ideal two-spin (13C-1H) NMR machine in the doubly rotating frame.

States are deviation density matrices: traceless Hermitian 4x4 arrays in the
product basis ``|uu>, |ud>, |du>, |dd>`` (spin 1 = carbon is the most
significant bit).  Pulses are instantaneous rotations ``[phi]_x = exp(+i phi I_x)``;
free evolution keeps only the scalar coupling ``2 pi J I_z^1 I_z^2``; a
z-gradient removes every off-diagonal element.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, fields
from fractions import Fraction

import numpy as np

from ._linalg import as_matrix, dagger
from .errors import NonUnitarySequenceError, ValidationError
from .sequence import PulseEvent, PulseSequence, evolve, grad, rf

__all__ = [
    "SpinSystem",
    "IX1", "IY1", "IZ1", "IX2", "IY2", "IZ2",
    "PSEUDO_PURE_TARGET",
    "rotation",
    "coupling_propagator",
    "event_unitary",
    "equilibrium",
    "apply_rf",
    "free_evolution",
    "gradient_crush",
    "apply_event",
    "apply_sequence",
    "pseudo_pure_sequence",
    "prepare_pseudo_pure",
    "pseudo_pure_scale",
    "validate_deviation",
    "to_pure_state_check",
]

_SX = np.array([[0, 1], [1, 0]], dtype=complex) / 2
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex) / 2
_SZ = np.array([[1, 0], [0, -1]], dtype=complex) / 2
_E2 = np.eye(2, dtype=complex)

IX1, IY1, IZ1 = (np.kron(m, _E2) for m in (_SX, _SY, _SZ))
IX2, IY2, IZ2 = (np.kron(_E2, m) for m in (_SX, _SY, _SZ))

# I_z^1 I_z^2 eigenvalues in basis order
_ZZ = np.array([0.25, -0.25, -0.25, 0.25])

# |uu><uu| - I/4, the deviation form of the pseudo-pure |uu>
PSEUDO_PURE_TARGET = np.diag([3.0, -1.0, -1.0, -1.0]).astype(complex) / 4


@dataclass(frozen=True)
class SpinSystem:
    """Carbon/proton pair: resonance frequencies, coupling and gyromagnetic ratio.

    ``gamma_ratio`` is gamma_C / gamma_H; at fixed field it equals the ratio of
    the resonance frequencies, 125.76 / 500.13.
    """

    nu1_mhz: float = 125.76
    nu2_mhz: float = 500.13
    j_hz: float = 215.0
    gamma_ratio: float = 0.2514

    def __post_init__(self):
        if not self.j_hz > 0:
            raise ValidationError(f"j_hz must be positive, got {self.j_hz}")
        if not (self.nu1_mhz > 0 and self.nu2_mhz > 0):
            raise ValidationError("resonance frequencies must be positive")
        if not math.isfinite(self.gamma_ratio):
            raise ValidationError("gamma_ratio must be finite")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "SpinSystem":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValidationError(f"unknown spin-system fields: {sorted(extra)}")
        return cls(**{k: float(v) for k, v in data.items()})


def _single(spin: int, m: np.ndarray) -> np.ndarray:
    return np.kron(m, _E2) if spin == 1 else np.kron(_E2, m)


def rotation(spins: Iterable[int], axis: str, angle: float) -> np.ndarray:
    """Unitary of the hard pulse ``[angle]_axis`` on the given spins."""
    sign = -1.0 if axis.startswith("-") else 1.0
    bare = axis.lstrip("+-")
    if bare not in ("x", "y"):
        raise ValidationError(f"axis must be x or y, got {axis!r}")
    c, s = math.cos(angle / 2), math.sin(angle / 2) * sign
    # exp(i a sigma/2) = cos(a/2) + i sin(a/2) sigma
    r = np.array([[c, 1j * s], [1j * s, c]]) if bare == "x" else np.array([[c, s], [-s, c]])
    r = r.astype(complex)
    spins = set(spins)
    return np.kron(r if 1 in spins else _E2, r if 2 in spins else _E2)


def coupling_propagator(duration) -> np.ndarray:
    """``exp(-i 2 pi J t I_z^1 I_z^2)`` for ``t = duration / J``."""
    return np.diag(np.exp(-2j * np.pi * float(duration) * _ZZ))


def event_unitary(event: PulseEvent) -> np.ndarray:
    if event.kind == "rf":
        return rotation(event.spins, event.axis, event.angle)
    if event.kind == "evolve":
        return coupling_propagator(event.duration)
    raise NonUnitarySequenceError("a gradient event has no unitary representation")


def equilibrium(sys: SpinSystem) -> np.ndarray:
    """``gamma_1 I_z^1 + gamma_2 I_z^2`` with ``gamma_2 = 1``."""
    return sys.gamma_ratio * IZ1 + IZ2


def _conjugate(u: np.ndarray, rho) -> np.ndarray:
    return u @ as_matrix(rho) @ dagger(u)


def apply_rf(rho, event: PulseEvent) -> np.ndarray:
    if event.kind != "rf":
        raise ValidationError(f"expected an rf event, got {event.kind}")
    return _conjugate(event_unitary(event), rho)


def free_evolution(rho, t, j_hz: float | None = None) -> np.ndarray:
    """Evolve under the coupling for ``t`` in units of 1/J, or seconds if ``j_hz`` is given."""
    if t < 0:
        raise ValidationError(f"evolution time must be >= 0, got {t}")
    duration = t * j_hz if j_hz is not None else t
    return _conjugate(coupling_propagator(duration), rho)


def gradient_crush(rho) -> np.ndarray:
    return np.diag(np.diag(as_matrix(rho)))


def apply_event(rho, event: PulseEvent) -> np.ndarray:
    if event.kind == "grad":
        return gradient_crush(rho)
    return _conjugate(event_unitary(event), rho)


def apply_sequence(rho, seq: PulseSequence | Iterable[PulseEvent]) -> np.ndarray:
    rho = as_matrix(rho)
    for event in seq:
        rho = apply_event(rho, event)
    return rho


def pseudo_pure_sequence(sys: SpinSystem) -> PulseSequence:
    """Spatial-averaging preparation of the pseudo-pure ``|uu>``."""
    if not 0 < sys.gamma_ratio < 2:
        raise ValidationError(f"gamma_ratio must lie in (0, 2) for arccos(gamma_ratio/2), got {sys.gamma_ratio}")
    alpha = math.acos(sys.gamma_ratio / 2)
    events = (
        rf(2, "+x", alpha),
        grad(),
        rf(1, "+x", math.pi / 4),
        evolve(Fraction(1, 4)),
        rf((1, 2), "+x", math.pi),
        evolve(Fraction(1, 4)),
        rf((1, 2), "+x", -math.pi),
        rf(1, "+y", -math.pi / 4),
        grad(),
    )
    return PulseSequence(events, "pseudo-pure |uu>")


def prepare_pseudo_pure(sys: SpinSystem) -> np.ndarray:
    return apply_sequence(equilibrium(sys), pseudo_pure_sequence(sys))


def pseudo_pure_scale(rho) -> float:
    """Coefficient ``c`` of the best fit ``rho ~ c (|uu><uu| - I/4)``."""
    rho = as_matrix(rho)
    t = PSEUDO_PURE_TARGET
    return float(np.real(np.trace(rho @ t)) / np.real(np.trace(t @ t)))


def validate_deviation(rho, tol: float = 1e-12) -> np.ndarray:
    rho = as_matrix(rho)
    scale = max(1.0, float(np.max(np.abs(rho))))
    if np.max(np.abs(rho - dagger(rho))) > tol * scale:
        raise ValidationError("deviation matrix is not Hermitian")
    if abs(np.trace(rho)) > tol * scale:
        raise ValidationError(f"deviation matrix is not traceless (trace {np.trace(rho):.3e})")
    return rho


def to_pure_state_check(rho, target) -> float:
    """Fidelity ``<t| rho_n |t>`` of the pseudo-pure part of a deviation matrix.

    ``rho_n`` is ``rho - lambda_min I`` normalized to unit trace: the smallest
    identity offset making ``rho`` positive semidefinite.
    """
    rho = validate_deviation(rho, tol=1e-9)
    target = np.asarray(target, dtype=complex)
    lam_min = float(np.linalg.eigvalsh(rho)[0])
    shifted = rho - lam_min * np.eye(rho.shape[0])
    tr = float(np.real(np.trace(shifted)))
    if tr <= 1e-12 or float(np.linalg.eigvalsh(shifted)[0]) < -1e-12 * tr:
        raise ValidationError("deviation matrix has no positive pseudo-pure part (zero after offset)")
    return float(np.real(np.vdot(target, shifted @ target)) / tr)
