#! /usr/bin/env python3
"""Zero-sum sequences over Z/n: elasticity n/2 and the structure of unions
of sets of lengths."""

from fractions import Fraction

import numpy as np

from factorlab import elasticity_via_H0, enumerate_atoms, load_bundled, structure_theorem_report
from factorlab.invariants import unions_profile


# =============================================================================
# B(Z/3 \ {0}) sits in the free monoid on the two "primes" 1 and 2.  Its atoms
# are the minimal zero-sum sequences 1^3, 2^3 and 1*2.

Z3 = load_bundled("blockZ3")
atoms = enumerate_atoms(Z3, 3)
print("atoms of B(Z/3):", atoms.atoms)

# (1^3)(2^3) = (1*2)^3 is the whole story of non-unique factorization here.

for n in range(3, 8):
    cert = elasticity_via_H0(enumerate_atoms(load_bundled(f"blockZ{n}"), n))
    assert cert.value == Fraction(n, 2)
    print(f"Z/{n}: rho = {cert.value} via {cert.method}")

# =============================================================================
# U_k collects every length that shares a set of lengths with k.  For Z/3 it
# is an interval from ceil(2k/3) to floor(3k/2).

prof = unions_profile(atoms, 30)
k = np.arange(1, 31)
lam = np.array([prof.lambda_k[i] for i in k])
rho = np.array([prof.rho_k[i] for i in k])
assert (lam == -(-2 * k // 3)).all() and (rho == 3 * k // 2).all()

# The report fits each U_k as an almost arithmetical progression and compares
# |U_k|/k with (rho - 1/rho) / min Delta = 5/6.

report = structure_theorem_report(atoms, 5, 30)
print(report.to_text())
print(report.to_csv().splitlines()[-1])
