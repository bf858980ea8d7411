#! /usr/bin/env python3
"""Minimal solutions of homogeneous linear Diophantine systems."""

import numpy as np

from factorlab import DiophantineSystem, hilbert_basis, verify_basis
from factorlab.hilbert import find_unrepresented


# =============================================================================
# 2x = 3y has the single minimal solution (3, 2); every other nonnegative
# solution is a multiple of it.

hb = hilbert_basis(DiophantineSystem([[2, -3]]))
assert hb.solutions == [(3, 2)]

# A modular row asks for a zero sum modulo m.  x + 2y = 0 mod 3 describes
# zero-sum sequences over {1, 2} in Z/3.

z3 = hilbert_basis(DiophantineSystem([[1, 2]], [3]))
print("Z/3 zero-sum basis:", z3.solutions)

# verify_basis searches a box for a solution the basis cannot build.

assert verify_basis(z3, 10)
partial = hb.__class__([(3, 0)], z3.system)
print("witness against a truncated basis:", find_unrepresented(partial, 3))

# =============================================================================
# Larger systems: the solver picks between a completion search and a
# triangulation of the solution cone.  The basis is returned as tuples; numpy
# is handy for looking at it.

A = np.array([[3, 1, -2, -1, 0, -4], [0, 2, 1, -3, -1, 1]])
hb = hilbert_basis(DiophantineSystem(A.tolist()))
B = np.array(hb.solutions)
print(A)
print(len(B), "basis elements via", hb.meta["method"], "max degree", B.sum(axis=1).max())
assert (A @ B.T == 0).all()
assert verify_basis(hb, 8)
