"""Generalized Grover search with multiple marked states, with an ideal
two-spin NMR model of the EPR-state synthesis experiment.

Submodules
----------
grover      state-vector simulation of the generalized iteration
recursion   closed-form amplitudes via the 2x2 transfer matrix
nmr         deviation density matrices, pulses, pseudo-pure preparation
pulses      pulse programs for U, I_t, I_s and their verification
spectra     readout, calibrated stick spectra, EPR classification
experiment  end-to-end NMR pipeline
"""

__version__ = "0.1.0"

from .cases import CASES, get_case
from .grover import (
    grover_operator,
    phase_oracle,
    prepare_initial,
    reflection_about_source,
    run_iterations,
    success_probability,
    two_spin_rotation,
    walsh_hadamard,
)
from .recursion import amplitudes_at, averages_at, find_target_iteration, transfer_matrix, weights
