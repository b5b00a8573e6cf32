"""
The chloroform experiment, pulse by pulse
=========================================

Thermal equilibrium, spatial-averaging preparation of the pseudo-pure
|uu>, the compiled Grover program, and a proton-selective readout pulse.
The predicted stick spectra carry the sign pattern that tells the four EPR
states apart.
"""

import numpy as np

from grover_nmr.experiment import run_epr_experiment, run_reference
from grover_nmr.nmr import SpinSystem, equilibrium, prepare_pseudo_pure
from grover_nmr.pulses import compile_full_iteration
from grover_nmr.spectra import emit_spectrum

np.set_printoptions(precision=4, suppress=True)
sys = SpinSystem()

print("equilibrium (gamma_H = 1):\n", equilibrium(sys).real)
rho = prepare_pseudo_pure(sys)
print("after preparation:\n", rho.real)
print("ratio to diag(3,-1,-1,-1)/4:", rho[0, 0].real / 0.75)

print("\nprogram for psi1:")
print(compile_full_iteration("psi1").sequence.to_text())

# reference spectra fix the receiver phase for each nucleus
ref = run_reference(sys)
for peaks in (ref.carbon_peaks, ref.proton_peaks):
    rec = emit_spectrum(peaks, sys)
    print(rec["nucleus"], [(round(p["freq_hz"] / 1e6, 6), round(p["magnitude"], 3), p["phase_deg"]) for p in rec["peaks"]])

for name in ("psi1", "psi2", "psi3", "psi4"):
    exp = run_epr_experiment(name, sys)
    c = [round(p.amplitude.real, 3) for p in exp.carbon_peaks]
    h = [round(p.amplitude.real, 3) for p in exp.proton_peaks]
    print(f"\n{name}: carbon {c}, proton {h} -> classified as {exp.classification}")
    print("  readout matrix (normalized):\n", exp.readout.real)
