"""Factorization invariants of submonoids of free abelian monoids."""

__version__ = "0.1.0"

from .monoid import (AtomList, SpecError, enumerate_atoms, load_spec, membership,
                     parse_spec, serialize_spec)
from .hilbert import DiophantineSystem, HilbertBasis, hilbert_basis, verify_basis
from .factorization import (Factorization, LengthOracle, LengthSet, NotInMonoidError,
                            factorizations, set_of_lengths)
from .invariants import (aap_decompose, delta_H_lower, elasticity_via_H0, phi_project,
                         structure_theorem_report, unions_profile)
from .classes import (beta_transfer, class_table, essential_prime_set, essential_report,
                      reduced_class_semigroup)
from .corpus import bundled_names, load_bundled

__all__ = [
    "AtomList", "SpecError", "enumerate_atoms", "load_spec", "membership", "parse_spec",
    "serialize_spec", "DiophantineSystem", "HilbertBasis", "hilbert_basis", "verify_basis",
    "Factorization", "LengthOracle", "LengthSet", "NotInMonoidError", "factorizations",
    "set_of_lengths", "aap_decompose", "delta_H_lower", "elasticity_via_H0", "phi_project",
    "structure_theorem_report", "unions_profile", "beta_transfer", "class_table",
    "essential_prime_set", "essential_report", "reduced_class_semigroup", "bundled_names",
    "load_bundled",
]
