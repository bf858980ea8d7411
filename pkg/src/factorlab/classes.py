"""Class semigroups of a monoid inside its ambient free monoid, essential
supports, the prime set E and the merge of equivalent primes."""

import csv
import io
from dataclasses import dataclass, field, replace
from itertools import product
from math import gcd, prod

import numpy as np

from .monoid import (GeneratorsSpec, PeriodicSpec, box_elements, normalize_box,
                     serialize_spec, support)

__all__ = [
    "ClassTable",
    "EssentialReport",
    "EssentialPrimes",
    "Transfer",
    "TransferError",
    "membership_grid",
    "class_table",
    "reduced_class_semigroup",
    "essential_report",
    "essential_prime_set",
    "beta_transfer",
    "MAX_GRID_CELLS",
]

MAX_GRID_CELLS = 5 * 10**7
C_MONOID = "C-monoid (desk-scale certificate)"
INCONCLUSIVE = "inconclusive at this box"


def _label(x):
    return "(" + ",".join(map(str, x)) + ")"


def membership_grid(spec, extent):
    """Boolean array ``G`` with ``G[x] = x in H`` for ``0 <= x <= extent``."""
    extent = tuple(int(e) for e in extent)
    cells = prod(e + 1 for e in extent)
    if cells > MAX_GRID_CELLS:
        raise ValueError(f"membership grid of {cells} cells exceeds {MAX_GRID_CELLS}; "
                         "lower --box or --probe")
    axes = [np.arange(e + 1) for e in extent]
    if spec.kind == "numerical":
        ap = np.array(spec.apery)
        n = axes[0]
        return n >= ap[n % len(ap)]
    if spec.kind == "block":
        ok = np.ones(tuple(e + 1 for e in extent), dtype=bool)
        for c, order in enumerate(spec.cyclic_orders):
            total = np.zeros(ok.shape, dtype=np.int64)
            for i, g in enumerate(spec.subset):
                shape = [1] * len(extent)
                shape[i] = -1
                total = total + (axes[i] * g[c]).reshape(shape)
            ok &= total % order == 0
        return ok
    if spec.kind == "periodic":
        a, m = spec.alpha, spec.modulus
        acc = np.zeros((a + m,) * spec.dim, dtype=bool)
        for prof in spec.accept:
            acc[tuple(c if c < a else a + r for c, r in prof)] = True
        codes = [np.where(v < a, v, a + v % m) for v in axes]
        return acc[np.ix_(*codes)]
    grid = np.zeros(tuple(e + 1 for e in extent), dtype=bool)
    for x in product(*(range(e + 1) for e in extent)):
        grid[x] = spec.contains(x)
    return grid


@dataclass(frozen=True)
class ClassTable:
    primes: tuple
    representatives: tuple
    members_in_box: tuple
    cayley: tuple
    box: tuple
    probe: int
    stabilization: tuple
    certified_finite: bool
    certificate: str
    checks: dict
    unresolved: tuple = ()
    boundary_shell: tuple = ()
    reduced: bool = False
    _index: dict = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.representatives)

    @property
    def identity(self):
        return self.class_of((0,) * len(self.box))

    def class_of(self, x):
        return self._index.get(tuple(x))

    @property
    def verdict(self):
        return C_MONOID if self.certified_finite else INCONCLUSIVE

    def as_dict(self):
        return {
            "primes": list(self.primes),
            "box": list(self.box),
            "probe": self.probe,
            "classes": [{"representative": list(r), "members_in_box": n}
                        for r, n in zip(self.representatives, self.members_in_box)],
            "cayley": [list(row) for row in self.cayley],
            "stabilization": [dict(s) for s in self.stabilization],
            "certified_finite": self.certified_finite,
            "certificate": self.certificate,
            "checks": dict(self.checks),
            "unresolved": [list(x) for x in self.unresolved],
            "boundary_shell": [list(x) for x in self.boundary_shell],
            "reduced": self.reduced,
            "verdict": self.verdict,
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        labels = [_label(r) for r in self.representatives]
        w.writerow([""] + labels)
        for lab, row in zip(labels, self.cayley):
            w.writerow([lab] + ["?" if c is None else labels[c] for c in row])
        return buf.getvalue()

    def to_text(self):
        labels = [_label(r) for r in self.representatives]
        width = max(len(s) for s in labels + ["?"])
        lines = [f"{len(self)} classes (box {list(self.box)}, probe {self.probe})"]
        for lab, n in zip(labels, self.members_in_box):
            lines.append(f"  [{lab}]  {n} members in box")
        lines.append("")
        lines.append(" " * (width + 2) + " ".join(s.rjust(width) for s in labels))
        for lab, row in zip(labels, self.cayley):
            cells = ["?" if c is None else labels[c] for c in row]
            lines.append(lab.rjust(width) + " |" + " ".join(s.rjust(width) for s in cells))
        lines.append("")
        lines.append(f"certified finite  {self.certified_finite} ({self.certificate})")
        lines.append(f"verdict           {self.verdict}")
        for s in self.stabilization:
            lines.append(f"prime {s['prime']}: threshold {s['threshold']}, period {s['period']}, "
                         f"stable {s['stable']}")
        for key, ok in self.checks.items():
            lines.append(f"check {key}: {'ok' if ok else 'FAILED'}")
        return "\n".join(lines) + "\n"


def _a_priori(spec, box, probe):
    """Kind-specific proof that the truncated fingerprints are the true
    classes and that the box meets every class."""
    low = min(box)
    if spec.kind == "numerical":
        need = spec.frobenius + 1
        if low >= need and probe >= need:
            return f"numerical: every element beyond the Frobenius number {spec.frobenius} is equivalent to it"
    elif spec.kind == "block":
        need = max(spec.order(g) for g in spec.subset) - 1
        if low >= need and probe >= need:
            return "block: class determined by the sum in G, seen below the element orders"
    elif spec.kind == "periodic":
        need = spec.period_box
        if low >= need and probe >= need:
            return "periodic: class determined by the residue profile, seen within one period"
    return None


def _line_period(seq):
    """Least (period, threshold) with seq[i] == seq[i + period] for all
    i >= threshold, preferring small periods."""
    n = len(seq)
    for r in range(1, n):
        t = n - r
        while t > 0 and seq[t - 1] == seq[t - 1 + r]:
            t -= 1
        if n - t >= 2 * r:
            return r, t
    return None


def _stabilization(cls, box, primes):
    out = []
    shell = []
    for p in range(len(box)):
        moved = np.moveaxis(cls, p, -1)
        lines = moved.reshape(-1, box[p] + 1)
        period, threshold, ok = 1, 0, True
        for line in lines:
            found = _line_period(list(line))
            if found is None:
                ok = False
                break
            r, t = found
            period = period * r // gcd(period, r)
            threshold = max(threshold, t)
        stable = ok and threshold + 2 * period <= box[p] + 1
        if stable:
            # the common period must hold on the outer shell of the box
            for x in box_elements(box):
                if x[p] != box[p] or x[p] - period < threshold:
                    continue
                y = list(x)
                y[p] -= period
                if cls[x] != cls[tuple(y)]:
                    stable = False
                    shell.append(x)
        else:
            shell.extend(x for x in box_elements(box) if x[p] == box[p])
        out.append({"prime": primes[p], "threshold": threshold if ok else None,
                    "period": period if ok else None, "stable": stable})
    return tuple(out), tuple(sorted(set(shell)))


def class_table(spec, box, probe_depth):
    """(H,F)-classes of the elements of ``box``.

    The fingerprint of x is the set of f in ``[0, probe_depth]^n`` with
    x + f in H; elements share a class iff fingerprints agree.  Classes
    are listed by their lexicographically smallest member.
    """
    box = normalize_box(spec, box)
    probe = int(probe_depth)
    if probe < 0 or any(b < 0 for b in box):
        raise ValueError("box and probe depth must be nonnegative")
    extent = tuple(2 * b + probe for b in box)
    grid = membership_grid(spec, extent)
    window = (probe + 1,) * spec.dim

    def fingerprint(x):
        return grid[tuple(slice(v, v + w) for v, w in zip(x, window))].tobytes()

    ids = {}
    reps, counts = [], []
    index = {}
    cls = np.zeros(tuple(b + 1 for b in box), dtype=np.int64)
    for x in box_elements(box):
        fp = fingerprint(x)
        c = ids.get(fp)
        if c is None:
            c = ids[fp] = len(reps)
            reps.append(x)
            counts.append(0)
        counts[c] += 1
        index[x] = c
        cls[x] = c
    # box_elements is lexicographic, so class ids already follow representatives
    k = len(reps)
    cayley = []
    unresolved = []
    for i in range(k):
        row = []
        for j in range(k):
            s = tuple(a + b for a, b in zip(reps[i], reps[j]))
            c = ids.get(fingerprint(s))
            if c is None:
                unresolved.append(s)
            row.append(c)
        cayley.append(tuple(row))
    resolved = not unresolved
    e = index[(0,) * spec.dim]
    checks = {
        "identity_neutral": all(cayley[e][i] == i and cayley[i][e] == i for i in range(k)),
        "associative": resolved and all(
            cayley[cayley[a][b]][c] == cayley[a][cayley[b][c]]
            for a in range(k) for b in range(k) for c in range(k)),
        "congruence": _congruence(index, box),
        "commutative": all(cayley[i][j] == cayley[j][i] for i in range(k) for j in range(k)),
    }
    stab, shell = _stabilization(cls, box, spec.primes)
    reason = _a_priori(spec, box, probe)
    if reason is None and all(s["stable"] for s in stab):
        reason = "ray periodicity observed for every prime"
    certified = reason is not None and resolved and all(checks.values())
    return ClassTable(tuple(spec.primes), tuple(reps), tuple(counts), tuple(cayley), box,
                      probe, stab, certified, reason or "none", checks,
                      tuple(sorted(set(unresolved))), () if certified else shell,
                      False, index)


def _congruence(index, box):
    """x ~ y implies x + e_p ~ y + e_p whenever both stay in the box."""
    step = {}
    for x, c in index.items():
        for p in range(len(box)):
            if x[p] == box[p]:
                continue
            y = list(x)
            y[p] += 1
            d = index[tuple(y)]
            if step.setdefault((c, p), d) != d:
                return False
    return True


def reduced_class_semigroup(table):
    """Classes of non-units together with the identity.  Units are trivial
    in every supported presentation, so the table is unchanged; the
    verdict is positive only for certified tables and never negative."""
    return replace(table, reduced=True)


@dataclass(frozen=True)
class EssentialReport:
    primes: tuple
    supports: tuple
    minimal_essential: tuple
    simple: bool
    witness: object
    exact: bool

    def as_dict(self):
        lab = lambda S: [self.primes[i] for i in S]  # noqa: E731
        return {
            "supports": [lab(S) for S in self.supports],
            "minimal_essential": [lab(S) for S in self.minimal_essential],
            "simple": self.simple,
            "witness": None if self.witness is None else
            {"support": lab(self.witness[0]), "element": list(self.witness[1])},
            "exact": self.exact,
        }


def _unions(sets):
    closure = set(sets)
    frontier = set(sets)
    while frontier:
        new = {a | b for a in frontier for b in sets} - closure
        closure |= new
        frontier = new
    return closure


def essential_report(spec, atoms, box):
    """Supports of non-unit elements and their inclusion-minimal members.

    Every nonzero element's support is a union of atom supports, so with
    a complete atom list the supports are exactly those unions.  With an
    incomplete list the box is swept by membership as well.
    """
    box = normalize_box(spec, box)
    witness_of = {}
    for a in atoms:
        S = frozenset(support(a))
        witness_of.setdefault(S, tuple(a))
    exact = getattr(atoms, "complete", True)
    if not exact:
        for x in box_elements(box):
            if any(x) and spec.contains(x):
                witness_of.setdefault(frozenset(support(x)), x)
    supports = _unions(set(witness_of))
    minimal = [S for S in supports if not any(T < S for T in supports)]
    key = lambda S: (len(S), sorted(S))  # noqa: E731
    supports = tuple(tuple(sorted(S)) for S in sorted(supports, key=key))
    minimal = sorted(minimal, key=key)
    simple = all(len(S) == 1 for S in minimal)
    witness = None
    if not simple:
        S = next(S for S in minimal if len(S) > 1)
        witness = (tuple(sorted(S)), witness_of[S])
    return EssentialReport(tuple(spec.primes), supports,
                           tuple(tuple(sorted(S)) for S in minimal), simple, witness, exact)


@dataclass(frozen=True)
class EssentialPrimes:
    primes: tuple
    exact: bool
    power_bound: int
    reason: str

    def as_dict(self):
        return {"E": list(self.primes), "exact": self.exact,
                "power_bound": self.power_bound, "reason": self.reason}


def essential_prime_set(spec, power_bound=64):
    """Primes p with some power p^n in H (units trivial).

    The scan over n <= power_bound is reported as exact when a kind
    specific argument shows that no larger n can add a prime.
    """
    if power_bound < 1:
        raise ValueError("power_bound must be >= 1")
    found = []
    for i, p in enumerate(spec.primes):
        for n in range(1, power_bound + 1):
            e = [0] * spec.dim
            e[i] = n
            if spec.contains(tuple(e)):
                found.append(p)
                break
    if spec.kind == "numerical":
        truth = list(spec.primes)
        reason = "a numerical semigroup contains every large power"
    elif spec.kind == "block":
        truth = list(spec.primes)
        reason = "g repeated ord(g) times is a zero-sum sequence"
    elif spec.kind == "generators":
        truth = [p for i, p in enumerate(spec.primes)
                 if any(set(support(g)) == {i} for g in spec.gens)]
        reason = "only generators supported on {p} alone can sum to a power of p"
    else:
        top = spec.alpha + spec.modulus
        truth = []
        for i, p in enumerate(spec.primes):
            for n in range(1, top + 1):
                e = [0] * spec.dim
                e[i] = n
                if spec.contains(tuple(e)):
                    truth.append(p)
                    break
        reason = "pure-power membership is periodic from alpha with the modulus"
    exact = found == truth
    if not exact:
        reason += f"; power bound {power_bound} too small to see all of them"
    return EssentialPrimes(tuple(found), exact, power_bound, reason)


class TransferError(ValueError):
    pass


@dataclass(frozen=True)
class Transfer:
    spec: object
    groups: tuple
    merge: dict
    identity: bool

    def apply(self, x):
        return tuple(sum(x[i] for i in g) for g in self.groups)

    def as_dict(self):
        return {"identity": self.identity, "merge": dict(self.merge),
                "groups": [list(g) for g in self.groups], "spec": serialize_spec(self.spec)}


def _image_member(spec, groups, y, cache):
    """Is y = beta(x) for some x in H?  Exhaustive over preimages."""
    if y in cache:
        return cache[y]
    parts = []
    for g, v in zip(groups, y):
        parts.append(list(_compositions(v, len(g))))
    dim = spec.dim
    ok = False
    for choice in product(*parts):
        x = [0] * dim
        for g, comp in zip(groups, choice):
            for i, c in zip(g, comp):
                x[i] = c
        if spec.contains(tuple(x)):
            ok = True
            break
    cache[y] = ok
    return ok


def _compositions(n, k):
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def beta_transfer(spec, table):
    """Merge primes lying in one (H,F)-class and push H forward.

    Returns the image presentation over the merged primes together with
    the merge map.  Numerical and block presentations never merge (one
    prime; distinct group elements have distinct classes) and transfer to
    themselves.
    """
    if not table.certified_finite:
        raise TransferError("class table is not certified finite; enlarge box/probe")
    if any(b < 1 for b in table.box):
        raise TransferError("the class table box must contain every prime")
    by_class = {}
    for i in range(spec.dim):
        e = [0] * spec.dim
        e[i] = 1
        by_class.setdefault(table.class_of(tuple(e)), []).append(i)
    groups = tuple(sorted(tuple(g) for g in by_class.values()))
    labels = [spec.primes[g[0]] if len(g) == 1 else "{" + ",".join(spec.primes[i] for i in g) + "}"
              for g in groups]
    merge = {spec.primes[i]: labels[k] for k, g in enumerate(groups) for i in g}
    if all(len(g) == 1 for g in groups):
        return Transfer(spec, groups, merge, True)
    if spec.kind == "generators":
        gens = []
        for g in spec.gens:
            img = tuple(sum(g[i] for i in grp) for grp in groups)
            if img not in gens:
                gens.append(img)
        return Transfer(GeneratorsSpec(tuple(labels), tuple(gens)), groups, merge, False)
    if spec.kind != "periodic":
        raise TransferError(f"unexpected prime merge for kind {spec.kind}")
    width = max(len(g) for g in groups)
    alpha = width * (spec.alpha + spec.modulus)
    m = spec.modulus
    cache = {}
    probe = PeriodicSpec(tuple(labels), alpha, m, frozenset([tuple((0, 0) for _ in groups)]))
    accept = set()
    for prof in probe.all_profiles():
        y = probe.lift(prof)
        if _image_member(spec, groups, y, cache):
            accept.add(prof)
    try:
        image = PeriodicSpec(tuple(labels), alpha, m, frozenset(accept))
    except Exception as exc:
        raise TransferError(f"merged accept table is not a monoid: {exc}") from exc
    # the profile table must reproduce the image beyond the lifted points
    for y in box_elements((alpha + 2 * m,) * len(groups)):
        if image.contains(y) != _image_member(spec, groups, y, cache):
            raise TransferError(f"image membership at {y} disagrees with the merged table; "
                                "rerun with a larger box")
    return Transfer(image, groups, merge, False)

