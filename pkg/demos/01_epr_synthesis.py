"""
Synthesizing the four EPR states with one Grover iteration
==========================================================

Two marked states out of four, a y-rotation preparation and quarter-turn
phases: a single generalized Grover iteration lands exactly on a Bell state.
We check it two ways, by brute-force state-vector simulation and by the
closed-form amplitude recursion.
"""

import numpy as np

from grover_nmr import CASES, amplitudes_at, run_iterations
from grover_nmr.grover import fidelity

np.set_printoptions(precision=4, suppress=True)

for name in ("psi1", "psi2", "psi3", "psi4"):
    case = CASES[name]
    U = case.unitary
    print(f"{name}: marked {case.marked}, beta = gamma = {case.beta:+.4f}")
    print("  |g(0)> =", U[:, 0])

    # direct simulation: (G I_t) U|s>
    state = run_iterations(U, case.source, case.marked, case.beta, case.gamma, 1)
    print("  |g(1)> =", state)

    # the recursion: every marked amplitude is U[i,s] * kbar(1), unmarked U[i,s] * lbar(1)
    traj = amplitudes_at(U, case.source, case.marked, case.beta, case.gamma, 1)
    print(f"  kbar(1) = {traj.kbar:.4f}, lbar(1) = {abs(traj.lbar):.1e}")

    # global phase is irrelevant
    print(f"  fidelity to target: {fidelity(case.target_state, state):.12f}")
    print()
