"""Presentations of reduced atomic monoids inside a free abelian monoid.

Elements are exponent vectors: tuples of nonnegative ints indexed by the
primes of the ambient free monoid, added coordinatewise.  Four kinds of
presentation are supported:

``numerical``  a numerical semigroup <g_1, ..., g_k> inside N = F({p})
``generators`` the submonoid of F(P) generated by explicit vectors
``block``      the monoid of zero-sum sequences B(G0), G0 a subset of a
               finite abelian group G; the "primes" are the elements of G0
``periodic``   membership decided by a table of truncated residue profiles
"""

import heapq
import json
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from math import gcd

from .hilbert import DiophantineSystem, hilbert_basis

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "SpecError",
    "NumericalSpec",
    "GeneratorsSpec",
    "BlockSpec",
    "PeriodicSpec",
    "AtomList",
    "parse_spec",
    "serialize_spec",
    "load_spec",
    "dump_spec",
    "membership",
    "enumerate_atoms",
    "vector_length",
    "support",
    "box_elements",
    "normalize_box",
]


class SpecError(ValueError):
    """Invalid presentation; ``path`` points at the offending field."""

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path


def vector_length(x):
    return sum(x)


def support(x):
    return frozenset(i for i, v in enumerate(x) if v)


def _lcm(a, b):
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class NumericalSpec:
    generators: tuple
    kind = "numerical"

    def __post_init__(self):
        gens = tuple(sorted(set(int(g) for g in self.generators)))
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise SpecError("no generators", "$.generators")
        if gens[0] < 1:
            raise SpecError("generators must be positive", "$.generators")
        if reduce(gcd, gens) != 1:
            raise SpecError(f"gcd of generators is {reduce(gcd, gens)}, must be 1", "$.generators")

    @property
    def primes(self):
        return ("p",)

    @property
    def dim(self):
        return 1

    @property
    def minimal_generators(self):
        """Generators not representable by the others."""
        out = []
        for g in self.generators:
            if not _coin_reachable(tuple(out), g):
                out.append(g)
        return tuple(out)

    @property
    def apery(self):
        return _apery_set(self.generators)

    @property
    def frobenius(self):
        m = self.generators[0]
        return max(self.apery) - m

    def contains(self, x):
        n = x[0]
        w = self.apery
        return n >= w[n % len(w)]


def _coin_reachable(gens, n):
    if n == 0:
        return True
    if not gens:
        return False
    reach = bytearray(n + 1)
    reach[0] = 1
    for v in range(1, n + 1):
        reach[v] = any(v >= g and reach[v - g] for g in gens)
    return bool(reach[n])


_APERY_CACHE = {}


def _apery_set(gens):
    """Smallest member of each residue class modulo the least generator
    (shortest paths on the residue graph)."""
    if gens in _APERY_CACHE:
        return _APERY_CACHE[gens]
    m = gens[0]
    dist = [None] * m
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if dist[r] is not None:
            continue
        dist[r] = d
        for g in gens[1:]:
            s = (r + g) % m
            if dist[s] is None:
                heapq.heappush(heap, (d + g, s))
    _APERY_CACHE[gens] = tuple(dist)
    return _APERY_CACHE[gens]


@dataclass(frozen=True)
class GeneratorsSpec:
    primes: tuple
    gens: tuple
    _memo: dict = field(default_factory=dict, compare=False, hash=False, repr=False)
    kind = "generators"

    def __post_init__(self):
        primes = tuple(str(p) for p in self.primes)
        object.__setattr__(self, "primes", primes)
        if not primes or len(set(primes)) != len(primes):
            raise SpecError("primes must be a nonempty list of distinct labels", "$.primes")
        gens = []
        for i, g in enumerate(self.gens):
            g = tuple(int(v) for v in g)
            if len(g) != len(primes):
                raise SpecError(f"expected {len(primes)} coordinates", f"$.gens[{i}]")
            if any(v < 0 for v in g):
                raise SpecError("negative exponent", f"$.gens[{i}]")
            if not any(g):
                raise SpecError("generator equals the identity", f"$.gens[{i}]")
            if g in gens:
                raise SpecError("duplicate generator", f"$.gens[{i}]")
            gens.append(g)
        if not gens:
            raise SpecError("no generators", "$.gens")
        object.__setattr__(self, "gens", tuple(gens))

    @property
    def dim(self):
        return len(self.primes)

    def contains(self, x):
        x = tuple(x)
        memo = self._memo
        if x in memo:
            return memo[x]
        if not any(x):
            return True
        # iterative DFS over remainders; a remainder is a member iff some
        # generator divides it and leaves a member
        stack = [x]
        order = []
        seen = set()
        while stack:
            y = stack.pop()
            if y in seen or y in memo:
                continue
            seen.add(y)
            order.append(y)
            for g in self.gens:
                r = tuple(a - b for a, b in zip(y, g))
                if min(r) >= 0 and any(r) and r not in memo and r not in seen:
                    stack.append(r)
        for y in sorted(order, key=sum):
            ok = False
            for g in self.gens:
                r = tuple(a - b for a, b in zip(y, g))
                if min(r) < 0:
                    continue
                if not any(r) or memo.get(r, False):
                    ok = True
                    break
            memo[y] = ok
        return memo[x]


@dataclass(frozen=True)
class BlockSpec:
    cyclic_orders: tuple
    subset: tuple
    kind = "block"

    def __post_init__(self):
        orders = tuple(int(n) for n in self.cyclic_orders)
        if not orders:
            raise SpecError("need at least one cyclic factor", "$.cyclic_orders")
        for i, n in enumerate(orders):
            if n < 2:
                raise SpecError("cyclic orders must be >= 2", f"$.cyclic_orders[{i}]")
        elems = []
        for i, g in enumerate(self.subset):
            if isinstance(g, int):
                g = (g,)
            g = tuple(int(v) for v in g)
            if len(g) != len(orders):
                raise SpecError(f"expected {len(orders)} residues", f"$.subset[{i}]")
            if any(not 0 <= v < n for v, n in zip(g, orders)):
                raise SpecError("residue outside its cyclic factor", f"$.subset[{i}]")
            if g in elems:
                raise SpecError("duplicate group element", f"$.subset[{i}]")
            elems.append(g)
        if not elems:
            raise SpecError("empty subset", "$.subset")
        object.__setattr__(self, "cyclic_orders", orders)
        object.__setattr__(self, "subset", tuple(elems))

    @property
    def dim(self):
        return len(self.subset)

    @property
    def primes(self):
        if len(self.cyclic_orders) == 1:
            return tuple(str(g[0]) for g in self.subset)
        return tuple("(" + ",".join(map(str, g)) + ")" for g in self.subset)

    def order(self, g):
        return reduce(_lcm, (n // gcd(v, n) for v, n in zip(g, self.cyclic_orders)), 1)

    @property
    def exponent(self):
        return reduce(_lcm, self.cyclic_orders, 1)

    def sigma(self, x):
        """Sum in G of the sequence with multiplicity vector ``x``."""
        return tuple(sum(c * g[i] for c, g in zip(x, self.subset)) % n
                     for i, n in enumerate(self.cyclic_orders))

    def contains(self, x):
        return not any(self.sigma(x))

    def system(self):
        rows = [[g[i] for g in self.subset] for i in range(len(self.cyclic_orders))]
        return DiophantineSystem(rows, self.cyclic_orders)


@dataclass(frozen=True)
class PeriodicSpec:
    """Membership depends on the profile of each coordinate ``v``:
    ``(v, 0)`` below the threshold and ``(alpha, v mod modulus)`` from the
    threshold on.  ``accept`` lists the admitted profile tuples."""

    primes: tuple
    alpha: int
    modulus: int
    accept: frozenset
    kind = "periodic"

    def __post_init__(self):
        primes = tuple(str(p) for p in self.primes)
        if not primes or len(set(primes)) != len(primes):
            raise SpecError("primes must be a nonempty list of distinct labels", "$.primes")
        alpha, m = int(self.alpha), int(self.modulus)
        if alpha < 0:
            raise SpecError("alpha must be >= 0", "$.alpha")
        if m < 1:
            raise SpecError("modulus must be >= 1", "$.modulus")
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "modulus", m)
        acc = set()
        for i, prof in enumerate(self.accept):
            prof = tuple((int(c), int(r)) for c, r in prof)
            if len(prof) != len(primes):
                raise SpecError(f"expected {len(primes)} [cap,res] pairs", f"$.accept[{i}]")
            for j, (c, r) in enumerate(prof):
                if not 0 <= c <= alpha:
                    raise SpecError("cap outside [0, alpha]", f"$.accept[{i}][{j}]")
                if c < alpha and r != 0:
                    raise SpecError("residue must be 0 below the threshold", f"$.accept[{i}][{j}]")
                if c == alpha and not 0 <= r < m:
                    raise SpecError("residue outside [0, modulus)", f"$.accept[{i}][{j}]")
            acc.add(prof)
        object.__setattr__(self, "accept", frozenset(acc))
        zero = self.profile((0,) * len(primes))
        if zero not in acc:
            raise SpecError("identity profile must be accepted", "$.accept")
        for a in acc:
            for b in acc:
                s = self.profile(tuple(u + v for u, v in zip(self.lift(a), self.lift(b))))
                if s not in acc:
                    raise SpecError(f"accepted profiles {list(a)} + {list(b)} leave the table", "$.accept")

    @property
    def dim(self):
        return len(self.primes)

    def coord_profile(self, v):
        a = self.alpha
        return (v, 0) if v < a else (a, v % self.modulus)

    def profile(self, x):
        return tuple(self.coord_profile(v) for v in x)

    def coord_lift(self, c, r):
        """Smallest exponent with profile ``(c, r)``."""
        if c < self.alpha:
            return c
        a, m = self.alpha, self.modulus
        return a + (r - a) % m

    def lift(self, prof):
        return tuple(self.coord_lift(c, r) for c, r in prof)

    def all_profiles(self):
        per = [(c, 0) for c in range(self.alpha)] + [(self.alpha, r) for r in range(self.modulus)]
        return list(product(per, repeat=self.dim))

    @property
    def period_box(self):
        """Every profile is realized by a vector with coordinates <= this."""
        return self.alpha + self.modulus - 1

    def contains(self, x):
        return self.profile(x) in self.accept


_KINDS = {"numerical": NumericalSpec, "generators": GeneratorsSpec,
          "block": BlockSpec, "periodic": PeriodicSpec}


def _require(doc, key, path="$"):
    if key not in doc:
        raise SpecError("missing field", f"{path}.{key}")
    return doc[key]


def _int_list(value, path):
    if not isinstance(value, list):
        raise SpecError("expected a list", path)
    for i, v in enumerate(value):
        if not isinstance(v, int) or isinstance(v, bool):
            raise SpecError("expected an integer", f"{path}[{i}]")
    return value


def parse_spec(document):
    """Validate a JSON document (str or already-decoded dict) into a spec."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpecError(f"not valid JSON ({exc.msg})") from exc
    if not isinstance(document, dict):
        raise SpecError("top level must be an object")
    schema = document.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise SpecError(f"unsupported schema version {schema!r}", "$.schema")
    kind = _require(document, "kind")
    if kind not in _KINDS:
        raise SpecError(f"unknown kind {kind!r}", "$.kind")
    if kind == "numerical":
        return NumericalSpec(tuple(_int_list(_require(document, "generators"), "$.generators")))
    if kind == "generators":
        primes = _require(document, "primes")
        if not isinstance(primes, list):
            raise SpecError("expected a list", "$.primes")
        gens = _require(document, "gens")
        if not isinstance(gens, list):
            raise SpecError("expected a list", "$.gens")
        for i, g in enumerate(gens):
            _int_list(g, f"$.gens[{i}]")
        return GeneratorsSpec(tuple(primes), tuple(tuple(g) for g in gens))
    if kind == "block":
        orders = _int_list(_require(document, "cyclic_orders"), "$.cyclic_orders")
        subset = _require(document, "subset")
        if not isinstance(subset, list):
            raise SpecError("expected a list", "$.subset")
        elems = []
        for i, g in enumerate(subset):
            if isinstance(g, int) and not isinstance(g, bool):
                elems.append((g,))
            else:
                elems.append(tuple(_int_list(g, f"$.subset[{i}]")))
        return BlockSpec(tuple(orders), tuple(elems))
    primes = _require(document, "primes")
    if not isinstance(primes, list):
        raise SpecError("expected a list", "$.primes")
    alpha = _require(document, "alpha")
    modulus = _require(document, "modulus")
    for key, v in (("alpha", alpha), ("modulus", modulus)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise SpecError("expected an integer", f"$.{key}")
    accept = _require(document, "accept")
    if not isinstance(accept, list):
        raise SpecError("expected a list", "$.accept")
    profiles = []
    for i, prof in enumerate(accept):
        if not isinstance(prof, list):
            raise SpecError("expected a list of [cap,res] pairs", f"$.accept[{i}]")
        pairs = []
        for j, pair in enumerate(prof):
            pairs.append(tuple(_int_list(pair, f"$.accept[{i}][{j}]")))
            if len(pair) != 2:
                raise SpecError("expected [cap,res]", f"$.accept[{i}][{j}]")
        profiles.append(tuple(pairs))
    return PeriodicSpec(tuple(primes), alpha, modulus, frozenset(profiles))


def serialize_spec(spec):
    """Inverse of :func:`parse_spec`; output is canonical (sorted where
    the presentation is a set)."""
    doc = {"schema": SCHEMA_VERSION, "kind": spec.kind}
    if spec.kind == "numerical":
        doc["generators"] = list(spec.generators)
    elif spec.kind == "generators":
        doc["primes"] = list(spec.primes)
        doc["gens"] = [list(g) for g in spec.gens]
    elif spec.kind == "block":
        doc["cyclic_orders"] = list(spec.cyclic_orders)
        doc["subset"] = [list(g) for g in spec.subset]
    else:
        doc["primes"] = list(spec.primes)
        doc["alpha"] = spec.alpha
        doc["modulus"] = spec.modulus
        doc["accept"] = [[list(p) for p in prof] for prof in sorted(spec.accept)]
    return doc


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def dump_spec(spec):
    return json.dumps(serialize_spec(spec), sort_keys=False)


def membership(spec, x):
    """True iff the exponent vector ``x`` lies in the monoid."""
    x = tuple(x)
    if len(x) != spec.dim:
        raise ValueError(f"dimension mismatch: got {len(x)}, spec has {spec.dim}")
    if any(v < 0 for v in x):
        return False
    return spec.contains(x)


def normalize_box(spec, box):
    if isinstance(box, int):
        box = (box,) * spec.dim
    box = tuple(int(b) for b in box)
    if len(box) != spec.dim:
        raise ValueError(f"box has {len(box)} coordinates, spec has {spec.dim}")
    return box


def box_elements(box):
    """All vectors ``0 <= x <= box`` in lexicographic order."""
    return product(*(range(b + 1) for b in box))


@dataclass(frozen=True)
class AtomList:
    atoms: tuple
    complete: bool
    search_box: tuple
    primes: tuple = ()

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __getitem__(self, i):
        return self.atoms[i]

    @property
    def dim(self):
        return len(self.search_box)

    def permuted(self, order):
        return AtomList(tuple(self.atoms[i] for i in order), self.complete,
                        self.search_box, self.primes)


def _ordered(atoms):
    return tuple(sorted(set(atoms), key=lambda a: (sum(a), a)))


def _sweep_atoms(spec, box):
    members = [x for x in box_elements(box) if any(x) and spec.contains(x)]
    member_set = set(members)
    atoms = []
    for x in members:
        decomposable = False
        for y in box_elements(x):
            if y == x or not any(y) or y not in member_set:
                continue
            if spec.contains(tuple(a - b for a, b in zip(x, y))):
                decomposable = True
                break
        if not decomposable:
            atoms.append(x)
    return atoms


def periodic_pure_steps(spec):
    """Per prime: least positive multiple ``c`` of the modulus with
    ``c * e_p`` in the monoid, or None.  Subtracting ``c * e_p`` from a
    vector whose p-coordinate is >= alpha + c keeps its profile, so every
    atom has p-coordinate < alpha + c."""
    out = []
    top = max(spec.alpha, 1) + spec.modulus
    for p in range(spec.dim):
        step = None
        for c in range(spec.modulus, top + spec.modulus, spec.modulus):
            e = [0] * spec.dim
            e[p] = c
            if spec.contains(tuple(e)):
                step = c
                break
        out.append(step)
    return out


def enumerate_atoms(spec, box):
    """Atoms of the monoid with every coordinate within ``box``.

    ``complete`` is True only when the kind supplies a proof that no atom
    lies outside the box.
    """
    box = normalize_box(spec, box)
    if any(b < 1 for b in box):
        raise ValueError("box must be positive in every coordinate")
    if spec.kind == "numerical":
        gens = spec.minimal_generators
        atoms = [(g,) for g in gens if g <= box[0]]
        complete = box[0] >= gens[-1]
    elif spec.kind == "generators":
        atoms = []
        for g in spec.gens:
            if any(v > b for v, b in zip(g, box)):
                continue
            reducible = False
            for h in spec.gens:
                r = tuple(a - c for a, c in zip(g, h))
                if h != g and min(r) >= 0 and spec.contains(r):
                    reducible = True
                    break
            if not reducible:
                atoms.append(g)
        # every atom is a generator
        complete = all(all(v <= b for v, b in zip(g, box)) for g in spec.gens)
    elif spec.kind == "block":
        basis = hilbert_basis(spec.system())
        atoms = [a for a in basis.solutions if all(v <= b for v, b in zip(a, box))]
        # a minimal zero-sum sequence holds g at most ord(g) times
        complete = basis.complete and all(b >= spec.order(g) for b, g in zip(box, spec.subset))
    else:
        atoms = _sweep_atoms(spec, box)
        steps = periodic_pure_steps(spec)
        complete = all(c is not None and b >= spec.alpha + c - 1 for c, b in zip(steps, box))
    return AtomList(_ordered(atoms), complete, box, spec.primes)
