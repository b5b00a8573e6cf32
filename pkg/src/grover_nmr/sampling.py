"""Random problem instances for property sweeps.

``GROVER_GEN_SEED`` in the environment fixes the default generator seed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

__all__ = ["default_rng", "random_rotation_unitary", "GroverInstance", "random_instance"]

DEFAULT_SEED = 20030


def default_rng(seed: int | None = None) -> np.random.Generator:
    if seed is None:
        seed = int(os.environ.get("GROVER_GEN_SEED", DEFAULT_SEED))
    return np.random.default_rng(seed)


def random_rotation_unitary(dim: int, rng: np.random.Generator, sweeps: int = 2) -> np.ndarray:
    """Product of random complex Givens rotations over every index pair, plus random phases."""
    u = np.diag(np.exp(2j * np.pi * rng.random(dim)))
    pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    for _ in range(sweeps):
        for k in rng.permutation(len(pairs)):
            i, j = pairs[k]
            theta = rng.uniform(0, np.pi / 2)
            phi, chi = rng.uniform(0, 2 * np.pi, 2)
            c, s = np.cos(theta), np.sin(theta)
            g = np.array([[c, -np.exp(-1j * chi) * s], [np.exp(1j * chi) * s, c]]) * np.exp(1j * phi)
            u[[i, j], :] = g @ u[[i, j], :]
    return u


@dataclass(frozen=True)
class GroverInstance:
    U: np.ndarray
    source: int
    marked: tuple[int, ...]
    beta: float
    gamma: float

    @property
    def dim(self) -> int:
        return self.U.shape[0]


def random_instance(
    rng: np.random.Generator,
    dims=(4, 8, 16, 32),
    min_column_modulus: float = 1e-6,
) -> GroverInstance:
    """Random unitary, source, non-empty proper marked subset and phases in [0, 2 pi)."""
    dim = int(rng.choice(dims))
    source = int(rng.integers(dim))
    while True:
        U = random_rotation_unitary(dim, rng)
        if np.min(np.abs(U[:, source])) > min_column_modulus:
            break
    r = int(rng.integers(1, dim))
    marked = tuple(sorted(int(i) for i in rng.choice(dim, size=r, replace=False)))
    beta, gamma = rng.uniform(0, 2 * np.pi, 2)
    return GroverInstance(U, source, marked, float(beta), float(gamma))
