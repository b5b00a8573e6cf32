"""
When half the states are marked
===============================

With r = N/2 the textbook search (Walsh-Hadamard preparation, pi phases) is
stuck: its success probability never moves off 1/2.  Quarter-turn phases
with a rotation preparation finish the job in one step.
"""

import math

from grover_nmr import CASES, run_iterations, success_probability, walsh_hadamard

marked = (0, 3)
H = walsh_hadamard(2)
probs = [success_probability(run_iterations(H, 0, marked, math.pi, math.pi, n), marked) for n in range(8)]
print("original Grover, r = 2 of 4:", [round(p, 6) for p in probs])

case = CASES["psi1"]
gen = [success_probability(run_iterations(case.unitary, 0, marked, case.beta, case.gamma, n), marked) for n in range(8)]
print("generalized,     r = 2 of 4:", [round(p, 6) for p in gen])

# for comparison, one marked state: the usual ~pi/4 sqrt(N) iterations
for q in (2, 3, 4, 5, 6):
    n_states = 2**q
    k = round(math.pi / 4 * math.sqrt(n_states) - 0.5)
    p = success_probability(run_iterations(walsh_hadamard(q), 0, [1], math.pi, math.pi, k), [1])
    print(f"N = {n_states:3d}, one marked, {k} iterations: p = {p:.4f}")
