import json

import pytest
from hypothesis import given, settings, strategies as st

from factorlab.corpus import bundled_names, load_bundled
from factorlab.factorization import factorizations
from factorlab.monoid import (BlockSpec, NumericalSpec, SpecError, box_elements, dump_spec,
                              enumerate_atoms, membership, parse_spec, serialize_spec, support,
                              vector_length)

from oracles import atoms_by_sweep, numerical_members

PQ_PATTERN = {"kind": "periodic", "primes": ["p", "q"], "alpha": 1, "modulus": 1,
              "accept": [[[0, 0], [0, 0]], [[1, 0], [1, 0]]]}


def test_parse_examples():
    s = parse_spec({"kind": "numerical", "generators": [2, 3]})
    assert isinstance(s, NumericalSpec) and s.generators == (2, 3)
    b = parse_spec('{"kind":"block","cyclic_orders":[3],"subset":[1,2]}')
    assert isinstance(b, BlockSpec) and b.subset == ((1,), (2,))
    with pytest.raises(SpecError) as err:
        parse_spec({"kind": "numerical", "generators": [4, 6]})
    assert err.value.path == "$.generators"


@pytest.mark.parametrize("doc, path", [
    ({"kind": "numerical"}, "$.generators"),
    ({"kind": "nope"}, "$.kind"),
    ({"schema": 2, "kind": "numerical", "generators": [2, 3]}, "$.schema"),
    ({"kind": "generators", "primes": ["p"], "gens": [[0]]}, "$.gens[0]"),
    ({"kind": "generators", "primes": ["p"], "gens": [[1], [1]]}, "$.gens[1]"),
    ({"kind": "block", "cyclic_orders": [3], "subset": [1, 5]}, "$.subset[1]"),
    ({"kind": "periodic", "primes": ["p"], "alpha": 1, "modulus": 1, "accept": [[[1, 0]]]},
     "$.accept"),
    ({"kind": "periodic", "primes": ["p"], "alpha": 1, "modulus": 2,
      "accept": [[[0, 0]], [[1, 1]]]}, "$.accept"),
])
def test_parse_errors_carry_paths(doc, path):
    with pytest.raises(SpecError) as err:
        parse_spec(doc)
    assert err.value.path == path


def test_invalid_json():
    with pytest.raises(SpecError):
        parse_spec("{not json")


@pytest.mark.parametrize("name", bundled_names())
def test_round_trip(name):
    spec = load_bundled(name)
    assert parse_spec(serialize_spec(spec)) == spec
    assert parse_spec(dump_spec(spec)) == spec
    assert json.loads(dump_spec(spec))["schema"] == 1


def test_membership_examples():
    s = parse_spec({"kind": "numerical", "generators": [2, 3]})
    assert not membership(s, (1,))
    assert membership(s, (7,))
    assert not membership(parse_spec(PQ_PATTERN), (3, 0))
    with pytest.raises(ValueError):
        membership(s, (1, 2))


@pytest.mark.parametrize("gens", [(2, 3), (3, 7), (4, 6, 9), (5, 7, 11, 13)])
def test_numerical_membership_matches_coin_table(gens):
    s = NumericalSpec(gens)
    table = numerical_members(gens, 100)
    assert [s.contains((n,)) for n in range(101)] == table
    assert s.frobenius == max(n for n in range(101) if not table[n])


def test_atom_examples():
    a = enumerate_atoms(parse_spec({"kind": "numerical", "generators": [2, 3]}), 10)
    assert a.atoms == ((2,), (3,)) and a.complete
    b = enumerate_atoms(parse_spec({"kind": "block", "cyclic_orders": [3], "subset": [1, 2]}), 3)
    assert set(b.atoms) == {(3, 0), (0, 3), (1, 1)} and b.complete
    g = enumerate_atoms(parse_spec({"kind": "generators", "primes": ["p", "q"],
                                    "gens": [[1, 1]]}), 5)
    assert g.atoms == ((1, 1),) and g.complete


def test_numerical_atoms_against_sweep():
    for gens in [(2, 3), (3, 5, 7), (4, 6, 9)]:
        s = NumericalSpec(gens)
        ok = numerical_members(gens, 100)
        brute = atoms_by_sweep(lambda x: ok[x[0]], (100,))
        assert list(enumerate_atoms(s, 100).atoms) == brute


@pytest.mark.parametrize("name, box", [("blockZ3", 3), ("blockZ4", 4), ("blockZ2", 2),
                                       ("pq-pattern", 5), ("sym-pattern", 6),
                                       ("single-gen-pq", 5)])
def test_atoms_against_sweep(name, box):
    spec = load_bundled(name)
    atoms = enumerate_atoms(spec, box)
    assert set(atoms.atoms) == set(atoms_by_sweep(spec.contains, (box,) * spec.dim))


def test_completeness_flags():
    assert not enumerate_atoms(parse_spec(PQ_PATTERN), 4).complete
    assert enumerate_atoms(load_bundled("sym-pattern"), 6).complete
    assert not enumerate_atoms(load_bundled("blockZ4"), 3).complete
    assert not enumerate_atoms(NumericalSpec((3, 7)), 5).complete


@pytest.mark.parametrize("name", ["ns23", "ns37", "blockZ3", "blockZ4", "sym-pattern",
                                  "single-gen-pq"])
def test_complete_atoms_reproduce_membership(name):
    spec = load_bundled(name)
    box = (8,) * spec.dim if spec.dim <= 2 else (4,) * spec.dim
    atoms = enumerate_atoms(spec, box)
    assert atoms.complete
    for x in box_elements(box):
        assert bool(factorizations(atoms, x)) == spec.contains(x), x


@pytest.mark.parametrize("name", bundled_names())
def test_atom_minimality(name):
    spec = load_bundled(name)
    atoms = enumerate_atoms(spec, 6 if spec.dim <= 3 else 3)
    for u in atoms:
        for v in atoms:
            if u != v:
                d = tuple(a - b for a, b in zip(u, v))
                assert min(d) < 0 or not spec.contains(d)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(bundled_names()), st.data())
def test_closure(name, data):
    spec = load_bundled(name)
    vec = st.tuples(*[st.integers(0, 9)] * spec.dim)
    a = data.draw(vec.filter(spec.contains))
    b = data.draw(vec.filter(spec.contains))
    assert spec.contains(tuple(x + y for x, y in zip(a, b)))


def test_vector_helpers():
    assert vector_length((0, 0)) == 0 and not support((0, 0))
    assert vector_length((2, 3)) == 5 and set(support((0, 3))) == {1}
