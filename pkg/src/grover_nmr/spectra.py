"""Readout pulses, calibrated stick spectra and EPR-state classification.

After a ``[pi/2]_y`` readout pulse, the carbon spectrum shows the single-quantum
elements ``(0,2)`` and ``(1,3)`` of the deviation matrix and the proton
spectrum shows ``(0,1)`` and ``(2,3)``.  Peak phases are only meaningful
relative to a reference: the pseudo-pure state read out on each nucleus is
rotated so that its single observable element is real and negative, which is
displayed as a positive absorption peak.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from ._linalg import as_matrix
from .errors import CalibrationError, ValidationError
from .nmr import SpinSystem, apply_rf, prepare_pseudo_pure
from .sequence import rf

__all__ = [
    "OBSERVABLES",
    "READOUT_MATRICES",
    "REFERENCE_READOUTS",
    "Peak",
    "ReferencePhase",
    "apply_readout",
    "observable_elements",
    "calibrate_reference",
    "extract_peaks",
    "classify_epr",
    "emit_spectrum",
    "spectra_to_json",
    "spectra_from_json",
    "spectra_to_csv",
    "spectra_from_csv",
]

# first element of each pair sits at +J/2, the second at -J/2
OBSERVABLES = {
    "carbon": ((0, 2), (1, 3)),
    "proton": ((0, 1), (2, 3)),
}
_NUCLEUS_SPIN = {"carbon": 1, "proton": 2}

READOUT_MATRICES = {
    "psi1": np.array([[0, -1, 1, 1], [-1, 0, -1, -1], [1, -1, 0, 1], [1, -1, 1, 0]]) / 4,
    "psi2": np.array([[0, -1, -1, -1], [-1, 0, 1, 1], [-1, 1, 0, 1], [-1, 1, 1, 0]]) / 4,
    "psi3": np.array([[0, 1, 1, -1], [1, 0, 1, -1], [1, 1, 0, -1], [-1, -1, -1, 0]]) / 4,
    "psi4": np.array([[0, 1, -1, 1], [1, 0, -1, 1], [-1, -1, 0, -1], [1, 1, -1, 0]]) / 4,
}
"""Deviation matrices after ``[pi/2]_y^2`` for each synthesized EPR state."""

REFERENCE_READOUTS = {
    "carbon": np.array([[1, 0, -2, 0], [0, -1, 0, 0], [-2, 0, 1, 0], [0, 0, 0, -1]]) / 4,
    "proton": np.array([[1, -2, 0, 0], [-2, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]) / 4,
}
"""Pseudo-pure ``|uu>`` after ``[pi/2]_y^1`` (carbon) or ``[pi/2]_y^2`` (proton)."""

CLASSIFY_TOL = 0.1
_PHASE_EPS = 1e-12


@dataclass(frozen=True)
class Peak:
    nucleus: str
    element: tuple[int, int]
    frequency_offset_hz: float
    amplitude: complex

    @property
    def magnitude(self) -> float:
        return abs(self.amplitude)

    @property
    def phase_deg(self) -> float | None:
        if self.magnitude <= _PHASE_EPS:
            return None
        deg = round(math.degrees(math.atan2(self.amplitude.imag, self.amplitude.real)), 9) + 0.0
        return 180.0 if deg <= -180.0 else deg


@dataclass(frozen=True)
class ReferencePhase:
    carbon_phase: complex = 1.0
    proton_phase: complex = 1.0

    def __post_init__(self):
        for p in (self.carbon_phase, self.proton_phase):
            if abs(abs(p) - 1.0) > 1e-12:
                raise ValidationError(f"reference phase must have unit modulus, got {p}")

    def for_nucleus(self, nucleus: str) -> complex:
        return self.carbon_phase if nucleus == "carbon" else self.proton_phase


def apply_readout(rho, spin: int) -> np.ndarray:
    """Selective ``[pi/2]_y`` readout pulse on spin 1 (carbon) or 2 (proton)."""
    if spin not in (1, 2):
        raise ValidationError(f"readout spin must be 1 or 2, got {spin}")
    return apply_rf(rho, rf(spin, "+y", math.pi / 2))


def observable_elements(rho) -> dict[tuple[int, int], complex]:
    """The four single-quantum elements seen in the two spectra."""
    rho = as_matrix(rho)
    return {rc: complex(rho[rc]) for pair in OBSERVABLES.values() for rc in pair}


def _nucleus(name: str) -> str:
    if name not in OBSERVABLES:
        raise ValidationError(f"nucleus must be 'carbon' or 'proton', got {name!r}")
    return name


def _unit_to_negative_real(value: complex, nucleus: str) -> complex:
    if abs(value) <= _PHASE_EPS:
        raise CalibrationError(f"{nucleus} reference signal vanished; cannot calibrate phase")
    return -abs(value) / value


def calibrate_reference(sys: SpinSystem | None = None, carbon_reference=None, proton_reference=None) -> ReferencePhase:
    """Phase corrections that make each reference peak a positive absorption line.

    By default the references are simulated: pseudo-pure ``|uu>`` read out with
    ``[pi/2]_y^1`` for carbon and ``[pi/2]_y^2`` for proton.  Measured (or
    otherwise phase-distorted) reference matrices may be passed instead.
    """
    if carbon_reference is None or proton_reference is None:
        rho = prepare_pseudo_pure(sys or SpinSystem())
        if carbon_reference is None:
            carbon_reference = apply_readout(rho, 1)
        if proton_reference is None:
            proton_reference = apply_readout(rho, 2)
    c = as_matrix(carbon_reference)[OBSERVABLES["carbon"][0]]
    p = as_matrix(proton_reference)[OBSERVABLES["proton"][0]]
    return ReferencePhase(complex(_unit_to_negative_real(c, "carbon")), complex(_unit_to_negative_real(p, "proton")))


def extract_peaks(rho_r, nucleus: str, ref: ReferencePhase | None = None, sys: SpinSystem | None = None) -> list[Peak]:
    """Two calibrated peaks for ``nucleus`` from a post-readout deviation matrix."""
    nucleus = _nucleus(nucleus)
    rho_r = as_matrix(rho_r)
    ref = ref or ReferencePhase()
    half_j = (sys or SpinSystem()).j_hz / 2
    phase = ref.for_nucleus(nucleus)
    return [
        Peak(nucleus, rc, sign * half_j, complex(phase * rho_r[rc]))
        for rc, sign in zip(OBSERVABLES[nucleus], (1, -1))
    ]


def _signature(matrix) -> np.ndarray:
    m = as_matrix(matrix)
    return np.array([m[rc] for pair in OBSERVABLES.values() for rc in pair])


_PATTERNS = {name: _signature(m) for name, m in READOUT_MATRICES.items()}


def classify_epr(carbon_peaks: list[Peak], proton_peaks: list[Peak]) -> str:
    """Match the normalized ``(0,2), (1,3), (0,1), (2,3)`` quadruple to a known EPR state.

    Returns ``"psi1"`` .. ``"psi4"``, or ``"unknown"`` if nothing matches within
    0.1 of the largest element.
    """
    by_element = {p.element: p.amplitude for p in list(carbon_peaks) + list(proton_peaks)}
    try:
        quad = np.array([by_element[rc] for pair in OBSERVABLES.values() for rc in pair])
    except KeyError:
        return "unknown"
    scale = np.max(np.abs(quad))
    if scale <= _PHASE_EPS:
        return "unknown"
    quad = quad / scale
    for name, pattern in _PATTERNS.items():
        if np.max(np.abs(quad - pattern / np.max(np.abs(pattern)))) <= CLASSIFY_TOL:
            return name
    return "unknown"


def emit_spectrum(peaks: list[Peak], sys: SpinSystem | None = None) -> dict:
    """Serializable stick spectrum for one nucleus with absolute frequencies in Hz."""
    sys = sys or SpinSystem()
    if not peaks:
        raise ValidationError("no peaks to emit")
    nucleus = peaks[0].nucleus
    if any(p.nucleus != nucleus for p in peaks):
        raise ValidationError("peaks from different nuclei in one spectrum")
    base_hz = (sys.nu1_mhz if nucleus == "carbon" else sys.nu2_mhz) * 1e6
    return {
        "nucleus": nucleus,
        "peaks": [
            {
                "freq_hz": base_hz + p.frequency_offset_hz,
                "magnitude": p.magnitude,
                "phase_deg": p.phase_deg,
                "element": [p.element[0], p.element[1]],
            }
            for p in peaks
        ],
    }


def spectra_to_json(records: list[dict]) -> str:
    return json.dumps(records, indent=2) + "\n"


def spectra_from_json(text: str) -> list[dict]:
    return json.loads(text)


_CSV_FIELDS = ("nucleus", "freq_hz", "magnitude", "phase_deg", "element_r", "element_c")


def spectra_to_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_FIELDS)
    for rec in records:
        for pk in rec["peaks"]:
            phase = "" if pk["phase_deg"] is None else repr(pk["phase_deg"])
            writer.writerow(
                [rec["nucleus"], repr(pk["freq_hz"]), repr(pk["magnitude"]), phase, *pk["element"]]
            )
    return buf.getvalue()


def spectra_from_csv(text: str) -> list[dict]:
    records: dict[str, dict] = {}
    for row in csv.DictReader(io.StringIO(text)):
        rec = records.setdefault(row["nucleus"], {"nucleus": row["nucleus"], "peaks": []})
        rec["peaks"].append(
            {
                "freq_hz": float(row["freq_hz"]),
                "magnitude": float(row["magnitude"]),
                "phase_deg": float(row["phase_deg"]) if row["phase_deg"] else None,
                "element": [int(row["element_r"]), int(row["element_c"])],
            }
        )
    return list(records.values())
