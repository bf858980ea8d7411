#! /usr/bin/env python3
"""Periodic patterns: when atoms never run out, and when primes can be
merged."""

from factorlab import (beta_transfer, class_table, enumerate_atoms, essential_prime_set,
                       essential_report, load_bundled)
from factorlab.factorization import LengthOracle
from factorlab.invariants import unions_profile


# =============================================================================
# pq-pattern: a vector is in H when both coordinates are positive or both
# are zero.  Every (1, b) and (a, 1) is an atom, so no box is ever enough.

H = load_bundled("pq-pattern")
for box in (5, 10, 15):
    atoms = enumerate_atoms(H, box)
    prof = unions_profile(atoms, 10)
    print(f"box {box}: {len(atoms)} atoms, complete={atoms.complete}, "
          f"rho_k for k=2..10: {[prof.rho_k[k] for k in range(2, 11)]}")

# No element of H has a one-prime support, so H is not simple, and no power of
# a single prime lies in H.

report = essential_report(H, enumerate_atoms(H, 6), 6)
print(report.as_dict())
assert not report.simple
assert essential_prime_set(H).primes == ()

# =============================================================================
# sym-pattern: everything except p and q themselves.  p and q fall into the
# same class, and merging them gives the numerical semigroup <2,3> with the
# same sets of lengths.

S = load_bundled("sym-pattern")
tr = beta_transfer(S, class_table(S, 6, 6))
print("merge:", tr.merge)
print("image members below 10:", [n for n in range(10) if tr.spec.contains((n,))])

src = LengthOracle(enumerate_atoms(S, 10))
img = LengthOracle(enumerate_atoms(tr.spec, 20))
for x in [(2, 2), (3, 1), (5, 4), (0, 7)]:
    assert src(x) == img(tr.apply(x))
    print(x, "->", tr.apply(x), "L =", src(x).values)
