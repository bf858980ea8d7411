"""The ten acceptance checks, one test each.  Every test records a
PASS/FAIL line that is printed in the pytest summary (and by running this
file directly)."""

import random
import time
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings, strategies as st

from factorlab.classes import beta_transfer, class_table, essential_report, reduced_class_semigroup
from factorlab.corpus import bundled_names, load_bundled
from factorlab.factorization import LengthOracle
from factorlab.hilbert import DiophantineSystem, hilbert_basis, verify_basis
from factorlab.invariants import (elasticity_via_H0, structure_theorem_report,
                                  unions_profile)
from factorlab.monoid import enumerate_atoms, parse_spec

from conftest import ACCEPTANCE_LINES
from oracles import length_table, max_rho, unions_from_table


def record(n, ok, detail, seconds):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{seconds:.2f}s]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def numerical(gens):
    return parse_spec({"kind": "numerical", "generators": list(gens)})


def block(n):
    return parse_spec({"kind": "block", "cyclic_orders": [n], "subset": list(range(1, n))})


def test_criterion_01_numerical_elasticity():
    start = time.perf_counter()
    notes, ok = [], True
    for gens, want in (((2, 3), Fraction(3, 2)), ((3, 7), Fraction(7, 3))):
        atoms = enumerate_atoms(numerical(gens), max(gens))
        t = time.perf_counter()
        cert = elasticity_via_H0(atoms)
        took = time.perf_counter() - t
        table = length_table(atoms.atoms, 300 // min(gens))
        best, witness = max_rho(table, {(n,) for n in range(301)})
        good = cert.value == want == best and cert.exact and took < 2
        ok &= good
        notes.append(f"<{gens[0]},{gens[1]}> rho={cert.value} oracle={best} at a={witness[0]} "
                     f"({took:.3f}s)")
    record(1, ok, "; ".join(notes), time.perf_counter() - start)


def lengths_dp(atoms):
    @lru_cache(maxsize=None)
    def lengths(x):
        if not any(x):
            return frozenset((0,))
        out = set()
        for u in atoms:
            r = tuple(a - b for a, b in zip(x, u))
            if min(r) >= 0:
                out.update(l + 1 for l in lengths(r))
        return frozenset(out)
    return lengths


def test_criterion_02_block_elasticity():
    start = time.perf_counter()
    ok, notes = True, []
    for n in range(3, 8):
        atoms = enumerate_atoms(block(n), n)
        t = time.perf_counter()
        cert = elasticity_via_H0(atoms)
        took = time.perf_counter() - t
        # (1^n)(-1^n) = (1 * -1)^n
        one = tuple(n if i == 0 else 0 for i in range(n - 1))
        neg = tuple(n if i == n - 2 else 0 for i in range(n - 1))
        pair = tuple(1 if i in (0, n - 2) else 0 for i in range(n - 1))
        realized = ({one, neg, pair} <= set(atoms.atoms)
                    and tuple(a + b for a, b in zip(one, neg)) == tuple(n * v for v in pair))
        lengths = lengths_dp(tuple(atoms.atoms))
        worst = Fraction(0)
        for size in (1, 2, 3):
            for combo in combinations_with_replacement(atoms.atoms, size):
                x = tuple(map(sum, zip(*combo)))
                L = lengths(x)
                worst = max(worst, Fraction(max(L), min(L)))
        good = (cert.value == Fraction(n, 2) and realized and worst <= cert.value
                and (n < 7 or took < 30))
        ok &= good
        notes.append(f"Z/{n}: {cert.value} ({cert.method}, {took:.2f}s, <=3-atom max {worst})")
    record(2, ok, "; ".join(notes), time.perf_counter() - start)


RATIONALITY_SEEN = {}


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(bundled_names()), st.randoms(use_true_random=False))
def _rationality_property(name, rnd):
    spec = load_bundled(name)
    box = max(spec.cyclic_orders) if spec.kind == "block" else (10 if spec.dim == 1 else 6)
    atoms = enumerate_atoms(spec, box)
    order = list(range(len(atoms)))
    rnd.shuffle(order)
    atoms = atoms.permuted(order)
    cert = elasticity_via_H0(atoms)
    assert isinstance(cert.value, Fraction)
    short, long_ = cert.witness_pair
    assert cert.check(atoms.atoms)
    # re-multiply by hand as well
    for z in (short, long_):
        total = [0] * spec.dim
        for a, c in zip(atoms.atoms, z.multiplicities):
            for j, v in enumerate(a):
                total[j] += c * v
        assert tuple(total) == short.target
    assert Fraction(long_.length, short.length) == cert.value
    prev = RATIONALITY_SEEN.setdefault(name, cert.value)
    assert prev == cert.value


def test_criterion_03_rationality_contract():
    start = time.perf_counter()
    try:
        for name in bundled_names():
            spec = load_bundled(name)
            box = max(spec.cyclic_orders) if spec.kind == "block" else (10 if spec.dim == 1 else 6)
            atoms = enumerate_atoms(spec, box)
            cert = elasticity_via_H0(atoms)
            assert cert.check(atoms.atoms)
            RATIONALITY_SEEN[name] = cert.value
        _rationality_property()
        ok, detail = True, "witness pairs re-multiply for " + ", ".join(
            f"{k}={v}" for k, v in sorted(RATIONALITY_SEEN.items()))
    except AssertionError as exc:
        ok, detail = False, f"counterexample: {exc}"
    record(3, ok, detail, time.perf_counter() - start)


def test_criterion_04_block_z3_unions():
    start = time.perf_counter()
    atoms = enumerate_atoms(block(3), 3)
    rep = structure_theorem_report(atoms, 5, 30)
    prof = unions_profile(atoms, 30)
    # a product of k <= 30 atoms has degree <= 90, hence at most 45 atoms
    table = length_table(atoms.atoms, 45)
    ok = len(rep.rows) == 26
    for row in rep.rows:
        k = row.k
        want = set(range(-(-2 * k // 3), 3 * k // 2 + 1))
        ok &= set(prof.unions[k].values) == want == unions_from_table(table, k)
        ok &= (row.lambda_k, row.rho_k, row.size) == (min(want), max(want), len(want))
        ok &= row.aap is not None and row.aap.d == 1 and row.aap_M == 0
    last = rep.rows[-1]
    dev = abs(last.density - Fraction(5, 6))
    ok &= last.k == 30 and last.density == Fraction(26, 30) and dev <= Fraction(1, 20)
    ok &= rep.predicted_density == Fraction(5, 6)
    took = time.perf_counter() - start
    ok &= took < 60
    record(4, ok, f"U_k = [ceil(2k/3), floor(3k/2)] for k in 5..30, AAP d=1 M=0; "
                  f"|U_30|/30 = {last.density} vs 5/6 (deviation {dev})", took)


def test_criterion_05_successive_gaps():
    start = time.perf_counter()
    notes, ok = [], True
    for name, box in (("blockZ3", 3), ("ns23", 3)):
        atoms = enumerate_atoms(load_bundled(name), box)
        rep = structure_theorem_report(atoms, 2, 30)
        ok &= rep.max_rho_step is not None and rep.max_rho_step <= 5
        ok &= rep.max_lambda_step is not None and rep.max_lambda_step <= 5
        notes.append(f"{name}: max rho step {rep.max_rho_step}, max lambda step "
                     f"{rep.max_lambda_step}")
    record(5, ok, "; ".join(notes), time.perf_counter() - start)


def test_criterion_06_hilbert_soundness():
    start = time.perf_counter()
    rng = random.Random(1)
    ok, sizes = True, []
    for _ in range(50):
        m, q = rng.randint(1, 4), rng.randint(2, 8)
        rows = [[rng.randint(-5, 5) for _ in range(q)] for _ in range(m)]
        hb = hilbert_basis(DiophantineSystem(rows))
        sols = hb.solutions
        minimal = not any(a != b and all(x <= y for x, y in zip(a, b))
                          for a in sols for b in sols)
        ok &= hb.complete and minimal and verify_basis(hb, 20)
        sizes.append(len(sols))
    took = time.perf_counter() - start
    ok &= took < 60
    record(6, ok, f"50 systems verified on box 20, basis sizes {min(sizes)}..{max(sizes)}", took)


def test_criterion_07_class_semigroup():
    start = time.perf_counter()
    table = reduced_class_semigroup(class_table(load_bundled("ns23"), 10, 10))
    took = time.perf_counter() - start
    ok = (table.representatives == ((0,), (1,), (2,))
          and table.cayley == ((0, 1, 2), (1, 2, 2), (2, 2, 2))
          and table.certified_finite and table.verdict.startswith("C-monoid")
          and took < 1)
    record(7, ok, f"{len(table)} classes [0],[1],[>=2]; verdict: {table.verdict}", took)


def test_criterion_08_simplicity():
    start = time.perf_counter()
    ok, notes = True, []
    rng = random.Random(5)
    nums = [load_bundled(n) for n in ("ns23", "ns25", "ns37")]
    while len(nums) < 8:
        gens = sorted(rng.sample(range(2, 20), 3))
        try:
            nums.append(numerical(gens))
        except ValueError:
            continue
    for spec in nums:
        ok &= essential_report(spec, enumerate_atoms(spec, 20), 20).simple
    notes.append(f"{len(nums)} numerical specs simple")
    for name in ("single-gen-pq", "pq-pattern"):
        spec = load_bundled(name)
        r = essential_report(spec, enumerate_atoms(spec, 6), 6)
        ok &= not r.simple and r.witness is not None and len(r.witness[0]) >= 2
        notes.append(f"{name} not simple, witness support "
                     f"{{{','.join(spec.primes[i] for i in r.witness[0])}}}")
    spec = load_bundled("pq-pattern")
    rho2 = []
    for box in (5, 10, 15):
        prof = unions_profile(enumerate_atoms(spec, box), 10)
        growth = [prof.rho_k[k] for k in range(2, 11)]
        ok &= all(a < b for a, b in zip(growth, growth[1:]))
        rho2.append(prof.rho_k[2])
    ok &= rho2[0] < rho2[1] < rho2[2]
    notes.append(f"pq-pattern rho_k strictly increasing on 2..10, rho_2 at boxes 5/10/15 = "
                 f"{'/'.join(map(str, rho2))}")
    record(8, ok, "; ".join(notes), time.perf_counter() - start)


def test_criterion_09_beta_transfer():
    start = time.perf_counter()
    spec = load_bundled("sym-pattern")
    tr = beta_transfer(spec, class_table(spec, 6, 6))
    src = LengthOracle(enumerate_atoms(spec, 20))
    img = LengthOracle(enumerate_atoms(tr.spec, 40))
    rng = random.Random(11)
    sampled = mismatches = 0
    while sampled < 100:
        x = (rng.randint(0, 20), rng.randint(0, 20))
        if not spec.contains(x):
            continue
        sampled += 1
        mismatches += src.raw(x) != img.raw(tr.apply(x))
    ok = mismatches == 0 and len(tr.groups) == 1
    record(9, ok, f"merged {'+'.join(spec.primes)} into one prime; {sampled} samples, "
                  f"{mismatches} mismatches", time.perf_counter() - start)


def test_criterion_10_determinism():
    import os

    from golden_cases import PARALLEL, cases
    from regen_golden import HERE, render, run

    start = time.perf_counter()
    bad = []
    all_cases = cases()
    for name, argv in all_cases:
        with open(os.path.join(HERE, name + ".txt"), encoding="utf-8", newline="") as fh:
            expected = fh.read()
        a, b = render(*run(argv)), render(*run(argv))
        if not a == b == expected:
            bad.append(name)
        if argv[0] in PARALLEL and render(*run(argv, workers=3)) != expected:
            bad.append(name + " (workers)")
    n_par = sum(argv[0] in PARALLEL for _, argv in all_cases)
    record(10, not bad, f"{len(all_cases)} golden outputs byte-identical over two runs, "
                        f"{n_par} also with 3 workers" + (f"; differing: {bad}" if bad else ""),
           time.perf_counter() - start)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
