"""Named experiment presets: the four EPR syntheses and the 4-state original Grover search."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedTargetError
from .grover import two_spin_rotation, walsh_hadamard

__all__ = ["EprCase", "CASES", "get_case"]

_R2 = 1 / math.sqrt(2)


@dataclass(frozen=True)
class EprCase:
    name: str
    prep_angles: tuple[float, float] | None  # Y_1(phi1) Y_2(phi2); None means Walsh-Hadamard
    beta: float
    gamma: float
    marked: tuple[int, ...]
    oracle: str | None
    target: tuple[complex, ...]
    source: int = 0
    iterations: int = 1

    @property
    def dim(self) -> int:
        return len(self.target)

    @property
    def unitary(self) -> np.ndarray:
        if self.prep_angles is None:
            return walsh_hadamard(int(math.log2(self.dim)))
        return two_spin_rotation(("y", "y"), self.prep_angles)

    @property
    def target_state(self) -> np.ndarray:
        return np.array(self.target, dtype=complex)


_H = math.pi / 2

CASES = {
    "psi1": EprCase("psi1", (_H, _H), -_H, -_H, (0, 3), "I14_minus", (_R2, 0, 0, _R2)),
    "psi2": EprCase("psi2", (-_H, _H), -_H, -_H, (0, 3), "I14_minus", (_R2, 0, 0, -_R2)),
    "psi3": EprCase("psi3", (_H, _H), _H, _H, (1, 2), "I23_plus", (0, _R2, _R2, 0)),
    "psi4": EprCase("psi4", (-_H, _H), _H, _H, (1, 2), "I23_plus", (0, _R2, -_R2, 0)),
    "grover4": EprCase("grover4", None, math.pi, math.pi, (2,), None, (0, 0, 1, 0)),
}

EPR_NAMES = ("psi1", "psi2", "psi3", "psi4")


def get_case(name: str) -> EprCase:
    """Look up a preset; accepts ``psi1`` or ``ψ1`` spellings."""
    key = name.strip().replace("ψ", "psi").lower()
    try:
        return CASES[key]
    except KeyError:
        raise UnsupportedTargetError(f"unknown case {name!r}; choose from {sorted(CASES)}") from None
