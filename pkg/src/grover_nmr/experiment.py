"""End-to-end NMR runs: pseudo-pure preparation, one compiled Grover iteration, readout."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import dagger
from .cases import EprCase, get_case
from .grover import run_iterations
from .nmr import SpinSystem, prepare_pseudo_pure, pseudo_pure_scale, to_pure_state_check
from .pulses import CompiledOperator, compile_full_iteration
from .spectra import (
    READOUT_MATRICES,
    REFERENCE_READOUTS,
    Peak,
    ReferencePhase,
    apply_readout,
    calibrate_reference,
    classify_epr,
    extract_peaks,
    observable_elements,
)

__all__ = ["EprExperiment", "ReferenceRun", "run_epr_experiment", "run_reference"]


@dataclass(frozen=True)
class ReferenceRun:
    pseudo_pure: np.ndarray
    scale: float
    carbon_readout: np.ndarray  # normalized by ``scale``
    proton_readout: np.ndarray
    phases: ReferencePhase
    carbon_peaks: list[Peak]
    proton_peaks: list[Peak]

    @property
    def readout_error(self) -> float:
        return max(
            float(np.max(np.abs(self.carbon_readout - REFERENCE_READOUTS["carbon"]))),
            float(np.max(np.abs(self.proton_readout - REFERENCE_READOUTS["proton"]))),
        )


@dataclass(frozen=True)
class EprExperiment:
    case: EprCase
    pseudo_pure: np.ndarray
    scale: float
    pseudo_pure_fidelity: float
    compiled: CompiledOperator
    final: np.ndarray
    state_fidelity: float  # pure part of ``final`` against the state-vector simulation
    target_fidelity: float  # pure part of ``final`` against the named EPR state
    max_unread_observable: float
    readout: np.ndarray  # normalized by ``scale``
    phases: ReferencePhase
    carbon_peaks: list[Peak]
    proton_peaks: list[Peak]
    classification: str

    @property
    def readout_error(self) -> float:
        expected = READOUT_MATRICES.get(self.case.name)
        if expected is None:
            return float("nan")
        return float(np.max(np.abs(self.readout - expected)))


def run_reference(sys: SpinSystem | None = None) -> ReferenceRun:
    sys = sys or SpinSystem()
    rho = prepare_pseudo_pure(sys)
    scale = pseudo_pure_scale(rho)
    carbon = apply_readout(rho, 1)
    proton = apply_readout(rho, 2)
    phases = calibrate_reference(sys, carbon, proton)
    return ReferenceRun(
        rho,
        scale,
        carbon / scale,
        proton / scale,
        phases,
        extract_peaks(carbon / scale, "carbon", phases, sys),
        extract_peaks(proton / scale, "proton", phases, sys),
    )


def run_epr_experiment(case: str | EprCase, sys: SpinSystem | None = None) -> EprExperiment:
    """Equilibrium -> pseudo-pure -> compiled ``U`` + one iteration -> ``[pi/2]_y^2`` readout."""
    case = get_case(case) if isinstance(case, str) else case
    sys = sys or SpinSystem()
    ref = run_reference(sys)
    rho_pp = ref.pseudo_pure

    compiled = compile_full_iteration(case)
    u = compiled.achieved
    final = u @ rho_pp @ dagger(u)

    expected_state = run_iterations(case.unitary, case.source, case.marked, case.beta, case.gamma, case.iterations)
    unread = max(abs(v) for v in observable_elements(final).values())

    readout = apply_readout(final, 2) / ref.scale
    carbon = extract_peaks(readout, "carbon", ref.phases, sys)
    proton = extract_peaks(readout, "proton", ref.phases, sys)
    return EprExperiment(
        case=case,
        pseudo_pure=rho_pp,
        scale=ref.scale,
        pseudo_pure_fidelity=to_pure_state_check(rho_pp, np.eye(4)[case.source]),
        compiled=compiled,
        final=final,
        state_fidelity=to_pure_state_check(final, expected_state),
        target_fidelity=to_pure_state_check(final, case.target_state),
        max_unread_observable=unread,
        readout=readout,
        phases=ref.phases,
        carbon_peaks=carbon,
        proton_peaks=proton,
        classification=classify_epr(carbon, proton),
    )
