"""Experiment configuration for the command-line runner."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ._linalg import check_unitary
from .cases import get_case
from .errors import ValidationError
from .grover import as_marked, two_spin_rotation, walsh_hadamard
from .nmr import SpinSystem

__all__ = ["ExperimentConfig", "load_config"]

FORMATS = ("json", "csv", "text")

_FIELDS = {"dim", "source_index", "marked", "beta", "gamma", "prep", "iterations", "spin_system", "output", "case"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Inputs for ``run``/``solve``/``nmr``.

    ``prep`` is ``"walsh_hadamard"``, ``"identity"``, a two-spin rotation
    ``{"axes": ["y", "y"], "angles": [phi1, phi2]}``, or an explicit
    ``{"matrix": [[[re, im], ...], ...]}``.  ``iterations`` is an integer or
    ``"auto"`` (first iteration at which unmarked amplitudes vanish).
    """

    dim: int = 4
    source_index: int = 0
    marked: tuple[int, ...] = ()
    beta: float = math.pi
    gamma: float = math.pi
    prep: object = "walsh_hadamard"
    iterations: int | str = 1
    spin_system: SpinSystem = field(default_factory=SpinSystem)
    output: str = "text"
    case: str | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError(f"dim must be positive, got {self.dim}")
        if not 0 <= self.source_index < self.dim:
            raise ValidationError(f"source_index {self.source_index} outside [0, {self.dim})")
        object.__setattr__(self, "marked", as_marked(self.marked, self.dim))
        if not (math.isfinite(self.beta) and math.isfinite(self.gamma)):
            raise ValidationError("beta and gamma must be finite")
        if self.iterations != "auto" and (not isinstance(self.iterations, int) or self.iterations < 0):
            raise ValidationError(f"iterations must be a non-negative integer or 'auto', got {self.iterations!r}")
        if self.output not in FORMATS:
            raise ValidationError(f"output must be one of {FORMATS}, got {self.output!r}")

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        unknown = set(data) - _FIELDS
        if unknown:
            raise ValidationError(f"unknown config fields: {sorted(unknown)}")
        kw = dict(data)
        if "spin_system" in kw:
            kw["spin_system"] = SpinSystem.from_mapping(kw["spin_system"])
        for key in ("beta", "gamma"):
            if key in kw:
                kw[key] = float(kw[key])
        if "case" in kw:
            base = cls.for_case(kw.pop("case"))
            return replace(base, **kw)
        return cls(**kw)

    @classmethod
    def for_case(cls, name: str) -> "ExperimentConfig":
        case = get_case(name)
        prep = "walsh_hadamard" if case.prep_angles is None else {"axes": ["y", "y"], "angles": list(case.prep_angles)}
        return cls(
            dim=case.dim,
            source_index=case.source,
            marked=case.marked,
            beta=case.beta,
            gamma=case.gamma,
            prep=prep,
            iterations=case.iterations,
            case=case.name,
        )

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def unitary(self) -> np.ndarray:
        prep = self.prep
        if prep == "walsh_hadamard":
            q = int(round(math.log2(self.dim)))
            if 2**q != self.dim:
                raise ValidationError(f"Walsh-Hadamard needs a power-of-two dimension, got {self.dim}")
            return walsh_hadamard(q)
        if prep == "identity":
            return np.eye(self.dim, dtype=complex)
        if isinstance(prep, dict) and "angles" in prep:
            if self.dim != 4:
                raise ValidationError("two-spin rotation preparation requires dim = 4")
            axes = tuple(prep.get("axes", ("y", "y")))
            return two_spin_rotation(axes, tuple(float(a) for a in prep["angles"]))
        if isinstance(prep, dict) and "matrix" in prep:
            m = np.array([[complex(re, im) for re, im in row] for row in prep["matrix"]])
            if m.shape != (self.dim, self.dim):
                raise ValidationError(f"prep matrix shape {m.shape} does not match dim {self.dim}")
            return check_unitary(m)
        raise ValidationError(f"unrecognized prep specification: {prep!r}")


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError("config file must contain a JSON object")
    return ExperimentConfig.from_mapping(data)
