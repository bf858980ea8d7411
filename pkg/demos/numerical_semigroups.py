#! /usr/bin/env python3
"""Factorizations in a numerical semigroup, from atoms to the class table."""

from fractions import Fraction

import numpy as np

from factorlab import (class_table, elasticity_via_H0, enumerate_atoms, factorizations,
                       load_bundled, parse_spec, set_of_lengths)


# =============================================================================
# A numerical semigroup lives inside the free monoid on one prime p, so its
# elements are 1-vectors.  The spec format is plain JSON.

H = parse_spec({"kind": "numerical", "generators": [2, 3]})
assert H == load_bundled("ns23")

assert not H.contains((1,))
assert H.contains((7,))
print("Frobenius number:", H.frobenius)

# Atoms are found inside a box.  For numerical semigroups the list is
# certified complete once the box reaches the largest minimal generator.

atoms = enumerate_atoms(H, 10)
print("atoms:", atoms.atoms, "complete:", atoms.complete)

# =============================================================================
# Factorizations are multiplicity vectors over the atom list.  6 = 2+2+2 = 3+3
# has two of them, of lengths 3 and 2.

for z in factorizations(atoms, (6,)):
    print(z.multiplicities, "length", z.length)

L = set_of_lengths(atoms, (6,))
assert L.values == (2, 3) and L.rho == Fraction(3, 2)

# The length sets of 2..40; numpy makes the max/min ratio
# easy to scan.

ratios = np.array([float(set_of_lengths(atoms, (n,)).rho) for n in range(2, 41)])
print("largest rho(L(n)) for n <= 40:", ratios.max())

# The elasticity of the whole monoid comes with a witness relation.

cert = elasticity_via_H0(atoms)
short, long_ = cert.witness_pair
print("rho(H) =", cert.value, "witnessed at", short.target, "by lengths",
      short.length, "and", long_.length)
assert cert.value == ratios.max()

# =============================================================================
# Two elements are equivalent when they complete to members of H in the same
# way.  <2,3> has three classes: {0}, {1} and everything from 2 on.

table = class_table(H, 10, 10)
print(table.to_text())
assert len(table) == 3 and table.certified_finite
