"""Pulse programs for the two-spin Grover experiment and their verification.

Each ``compile_*`` function returns a :class:`CompiledOperator` bundling the
pulse program, the abstract target unitary, the unitary the program actually
implements, and the global phase relating the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._linalg import check_unitary, dagger
from .cases import CASES, EprCase, get_case
from .errors import UnsupportedTargetError, ValidationError
from .grover import phase_oracle, reflection_about_source, two_spin_rotation
from .nmr import event_unitary
from .sequence import PulseSequence, evolve, rf

__all__ = [
    "CompiledOperator",
    "sequence_unitary",
    "verify_up_to_global_phase",
    "refocused_coupling",
    "compile_preparation",
    "compile_phase_oracle",
    "compile_reflection",
    "compile_full_iteration",
    "compile_target",
    "TARGETS",
]

PI = math.pi
COMPILE_TOL = 1e-8


@dataclass(frozen=True)
class CompiledOperator:
    sequence: PulseSequence
    target: np.ndarray
    achieved: np.ndarray
    global_phase: complex

    @property
    def error(self) -> float:
        """Max-entry mismatch between ``achieved`` and ``global_phase * target``."""
        return float(np.max(np.abs(self.achieved - self.global_phase * self.target)))


def sequence_unitary(seq: PulseSequence) -> np.ndarray:
    """Ordered product of event unitaries; the first event acts first."""
    u = np.eye(4, dtype=complex)
    for event in seq:
        u = event_unitary(event) @ u
    return u


def verify_up_to_global_phase(a, b, tol: float = COMPILE_TOL) -> tuple[bool, complex | None]:
    """Check ``a = phase * b`` for some unit scalar.

    The phase is ``tr(b^dagger a) / |tr(b^dagger a)|``.  Returns ``(ok, phase)``;
    ``phase`` is ``None`` when the trace overlap vanishes and no phase can be
    extracted.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch {a.shape} vs {b.shape}")
    overlap = np.trace(dagger(b) @ a)
    if abs(overlap) < 1e-12:
        return False, None
    phase = complex(overlap / abs(overlap))
    ok = float(np.max(np.abs(a - phase * b))) < tol and abs(overlap) / a.shape[0] > 1 - tol
    return ok, phase


def _compiled(seq: PulseSequence, target: np.ndarray) -> CompiledOperator:
    achieved = sequence_unitary(seq)
    ok, phase = verify_up_to_global_phase(achieved, target)
    if not ok:
        raise ValidationError(f"pulse program {seq.label!r} does not implement its target")
    return CompiledOperator(seq, target, achieved, phase)


def refocused_coupling(duration) -> PulseSequence:
    """``d - [pi]_x^{1,2} - d - [-pi]_x^{1,2}``: coupling evolution for ``2d`` with a refocusing pair."""
    d = Fraction(duration)
    return PulseSequence(
        (evolve(d), rf((1, 2), "+x", PI), evolve(d), rf((1, 2), "+x", -PI)),
        f"[{2 * d}/J]",
    )


def compile_preparation(angles: tuple[float, float] = (PI / 2, PI / 2)) -> CompiledOperator:
    """``U = Y_1(phi1) Y_2(phi2)`` with ``phi1 = +-pi/2`` and ``phi2 = pi/2``."""
    phi1, phi2 = angles
    if not (math.isclose(abs(phi1), PI / 2) and math.isclose(phi2, PI / 2)):
        raise UnsupportedTargetError(
            f"preparation pulses are only defined for angles (+-pi/2, pi/2), got {angles}"
        )
    sign = "+" if phi1 > 0 else "-"
    seq = PulseSequence((rf(1, "+y", phi1), rf(2, "+y", phi2)), f"U({sign}pi/2, pi/2)")
    return _compiled(seq, two_spin_rotation(("y", "y"), (phi1, phi2)))


_ORACLES = {
    "I14_minus": ((0, 3), -PI / 2),
    "I23_plus": ((1, 2), PI / 2),
}


def compile_phase_oracle(which: str) -> CompiledOperator:
    """Both oracles come from the same refocused ``[1/2J]`` coupling block."""
    if which not in _ORACLES:
        raise UnsupportedTargetError(f"unknown phase oracle {which!r}; choose from {sorted(_ORACLES)}")
    marked, gamma = _ORACLES[which]
    seq = refocused_coupling(Fraction(1, 4))
    seq = PulseSequence(seq.events, which)
    return _compiled(seq, phase_oracle(marked, gamma, 4))


_REFLECTIONS = {
    -1: (Fraction(1, 8), -PI / 4),
    1: (Fraction(15, 8), PI / 4),
}


def compile_reflection(beta: float) -> CompiledOperator:
    """``I_s`` for ``s = |uu>`` and ``beta = +-pi/2``.

    Coupling block followed by ``[-pi/2]_y [theta]_x [pi/2]_y`` on both spins,
    which is a z-rotation sandwich.
    """
    if not math.isclose(abs(beta), PI / 2):
        raise UnsupportedTargetError(f"reflection is only compiled for beta = +-pi/2, got {beta}")
    sign = 1 if beta > 0 else -1
    delay, theta = _REFLECTIONS[sign]
    seq = refocused_coupling(delay).events + (
        rf((1, 2), "+y", -PI / 2),
        rf((1, 2), "+x", theta),
        rf((1, 2), "+y", PI / 2),
    )
    label = f"I_s({'+' if sign > 0 else '-'}pi/2)"
    return _compiled(PulseSequence(seq, label), reflection_about_source(0, beta, 4))


def compile_full_iteration(case: str | EprCase) -> CompiledOperator:
    """``U`` followed by one Grover iteration ``-U I_s U^dagger I_t``.

    ``U^dagger`` is the reversed ``U`` program with negated angles.
    """
    case = get_case(case) if isinstance(case, str) else case
    if case.prep_angles is None:
        raise UnsupportedTargetError(f"case {case.name} has no pulse-level preparation")
    prep = compile_preparation(case.prep_angles)
    oracle = compile_phase_oracle(case.oracle)
    refl = compile_reflection(case.beta)
    u_seq = prep.sequence
    seq = u_seq + oracle.sequence + u_seq.inverse() + refl.sequence + u_seq
    seq = PulseSequence(seq.events, f"{case.name}: U, I_t, U^-1, I_s, U")

    U = check_unitary(prep.target)
    grover_step = -U @ refl.target @ dagger(U) @ oracle.target
    return _compiled(seq, grover_step @ U)


def _target_table():
    table = {
        "U+": lambda: compile_preparation((PI / 2, PI / 2)),
        "U-": lambda: compile_preparation((-PI / 2, PI / 2)),
        "I14_minus": lambda: compile_phase_oracle("I14_minus"),
        "I23_plus": lambda: compile_phase_oracle("I23_plus"),
        "Is_minus": lambda: compile_reflection(-PI / 2),
        "Is_plus": lambda: compile_reflection(PI / 2),
    }
    for name, case in CASES.items():
        if case.prep_angles is not None:
            table[name] = lambda c=case: compile_full_iteration(c)
    return table


TARGETS = _target_table()


def compile_target(name: str) -> CompiledOperator:
    """Compile a named operator (``U+``, ``U-``, ``I14_minus``, ``I23_plus``,
    ``Is_minus``, ``Is_plus`` or a case name)."""
    key = name
    if key not in TARGETS:
        try:
            key = get_case(name).name
        except UnsupportedTargetError:
            pass
    if key not in TARGETS:
        raise UnsupportedTargetError(f"unknown compile target {name!r}; choose from {sorted(TARGETS)}")
    return TARGETS[key]()
