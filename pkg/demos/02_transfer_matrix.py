"""
The 2x2 transfer matrix and its period
======================================

All of the algorithm's dynamics collapse onto two numbers, the weighted
average of the primed marked amplitudes and of the unmarked ones.  Here we
look at the matrix that advances them, its eigenvalues, and the fact that
its cube is a multiple of the identity.
"""

import cmath
import math

import numpy as np

from grover_nmr.recursion import Weights, averages_at, power_period, transfer_matrix

np.set_printoptions(precision=4, suppress=True)

tm = transfer_matrix(-math.pi / 2, -math.pi / 2, Weights(0.5, 0.5))
print("A =\n", tm.matrix)
for lam in tm.eigenvalues:
    print(f"eigenvalue {lam:.6f} = exp(i pi * {cmath.phase(lam) / math.pi:.6f})")

# A^3 = i I, so everything repeats every three iterations up to a phase
p, c = power_period(tm)
print(f"A^{p} = ({c:.6f}) I")

print("\n n   kbar(n)              |lbar(n)|")
for n in range(7):
    k, l = averages_at(tm, n)
    print(f"{n:2d}   {k.real:+.4f}{k.imag:+.4f}j   {abs(l):.4f}")

# flipping both phases to +pi/2 conjugates the matrix
tm_plus = transfer_matrix(math.pi / 2, math.pi / 2, Weights(0.5, 0.5))
print("\nconjugate relation holds:", np.allclose(tm_plus.matrix, tm.matrix.conj()))
