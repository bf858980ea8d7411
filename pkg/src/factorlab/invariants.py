"""Elasticity, unions of sets of lengths, distances and AAP structure."""

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cones import lp_maximize, primitive
from .factorization import Factorization, LengthOracle, LengthSet, delta_of, multiply
from .hilbert import DiophantineSystem, hilbert_basis

__all__ = [
    "ElasticityCertificate",
    "UnionsProfile",
    "AAPDecomposition",
    "StructureReport",
    "relation_system",
    "elasticity_via_H0",
    "phi_project",
    "unions_profile",
    "delta_H_lower",
    "aap_decompose",
    "structure_theorem_report",
    "ELASTICITY_NODE_CAP",
]

# completion budget for the Hilbert route of elasticity
ELASTICITY_NODE_CAP = 10**5
# "auto" only attempts the full relation basis up to this many atoms; past
# it the basis is typically far too large and the LP answers directly
ELASTICITY_HILBERT_ATOMS = 8


@dataclass(frozen=True)
class ElasticityCertificate:
    value: Fraction
    witness_pair: tuple
    basis_size: object
    exact: bool
    method: str
    structure: str

    def check(self, atoms):
        """Both witness factorizations evaluate to the same element and
        their lengths realize ``value``."""
        short, long_ = self.witness_pair
        a, b = short.evaluate(atoms), long_.evaluate(atoms)
        return (a == b == short.target == long_.target
                and Fraction(long_.length, short.length) == self.value)


def relation_system(atoms):
    """``[A | -A]`` whose nonnegative solutions are pairs of factorizations
    of one element."""
    atoms = [tuple(a) for a in atoms]
    dim = len(atoms[0])
    rows = [[a[p] for a in atoms] + [-a[p] for a in atoms] for p in range(dim)]
    return DiophantineSystem(rows)


def _split(v, s):
    return tuple(v[:s]), tuple(v[s:])


def _pair_certificate(atoms, x, y, basis_size, exact, method, structure):
    if not any(x) or not any(y):
        raise AssertionError("relation with an empty side in a reduced monoid")
    if sum(x) > sum(y):
        x, y = y, x
    target = multiply(atoms, x)
    if target != multiply(atoms, y):
        raise AssertionError("witness sides evaluate to different elements")
    value = Fraction(sum(y), sum(x))
    return ElasticityCertificate(value, (Factorization(x, target), Factorization(y, target)),
                                 basis_size, exact, method, structure)


def _elasticity_lp(atoms):
    """Maximize |y| subject to |x| = 1 on the relation cone.

    The optimum is a vertex of the slice, i.e. lies on an extreme ray; the
    primitive lattice vector of that ray is irreducible, so it is an atom
    of the relation monoid attaining the maximal ratio.
    """
    s = len(atoms)
    system = relation_system(atoms)
    M = [[1] * s + [0] * s] + [list(r) for r in system.matrix]
    b = [1] + [0] * len(system.matrix)
    c = [0] * s + [1] * s
    value, v = lp_maximize(M, b, c)
    den = 1
    for q in v:
        den = den * q.denominator // gcd(den, q.denominator)
    z = primitive([q * den for q in v])
    x, y = _split(z, s)
    return x, y


def elasticity_via_H0(atoms, method="auto", node_cap=ELASTICITY_NODE_CAP):
    """Elasticity as the largest length ratio over atoms of the monoid of
    factorization pairs ``{(x, y) : pi(x) = pi(y)}``.

    ``method="hilbert"`` computes that Hilbert basis in full; ``"lp"``
    finds the extreme ray of the relation cone with the largest ratio by
    exact simplex; ``"auto"`` tries the basis under ``node_cap`` for small
    atom lists and uses the LP otherwise or when the basis is cut off.
    The value is exact whenever the atom list is complete and the chosen
    route finished.
    """
    atoms_t = [tuple(a) for a in atoms]
    if not atoms_t:
        raise ValueError("no atoms")
    complete = getattr(atoms, "complete", True)
    s = len(atoms_t)
    if method == "hilbert" or (method == "auto" and s <= ELASTICITY_HILBERT_ATOMS):
        hb = hilbert_basis(relation_system(atoms_t), node_cap=node_cap)
        if hb.complete or method == "hilbert":
            best = None
            half = True
            factorial = True
            for sol in hb.solutions:
                x, y = _split(sol, s)
                if not any(x) or not any(y):
                    raise AssertionError("relation with an empty side in a reduced monoid")
                lx, ly = sum(x), sum(y)
                factorial &= x == y
                half &= lx == ly
                r = Fraction(max(lx, ly), min(lx, ly))
                if best is None or r > best[0]:
                    best = (r, x, y)
            structure = "factorial" if factorial else "half-factorial" if half else "non-half-factorial"
            return _pair_certificate(atoms_t, best[1], best[2], len(hb),
                                     complete and hb.complete, "hilbert", structure)
    elif method not in ("auto", "lp"):
        raise ValueError(f"unknown method {method!r}")
    x, y = _elasticity_lp(atoms_t)
    cert = _pair_certificate(atoms_t, x, y, None, complete, "lp", "")
    structure = "half-factorial" if cert.value == 1 else "non-half-factorial"
    return ElasticityCertificate(cert.value, cert.witness_pair, None, complete, "lp", structure)


def phi_project(spec, E, elements):
    """Restrict exponent vectors to the coordinates in ``E`` (labels or
    indices), keeping the ambient prime order."""
    idx = set()
    for e in E:
        idx.add(spec.primes.index(e) if isinstance(e, str) else int(e))
    keep = [i for i in range(spec.dim) if i in idx]
    return [tuple(x[i] for i in keep) for x in elements]


@dataclass
class UnionsProfile:
    k_range: tuple
    unions: dict
    rho_k: dict
    lambda_k: dict
    exact: bool
    truncated_at: object = None
    elements: int = 0
    delta_lower: frozenset = frozenset()

    def ks(self):
        return sorted(self.unions)


_WORKER_ORACLE = None


def _init_worker(atoms):
    global _WORKER_ORACLE
    _WORKER_ORACLE = LengthOracle(atoms)


def _lengths_chunk(chunk):
    return [_WORKER_ORACLE.raw(x) for x in chunk]


class _LengthMap:
    """Length sets for batches of targets, serially or over a process pool.
    Results never depend on the worker count."""

    def __init__(self, atoms, workers=1):
        self.oracle = LengthOracle(atoms)
        self.workers = workers
        self.pool = None
        if workers > 1:
            self.pool = ProcessPoolExecutor(workers, initializer=_init_worker,
                                            initargs=([tuple(a) for a in atoms],))

    def __call__(self, targets):
        targets = sorted(targets)
        if self.pool is None or len(targets) < 64:
            return [self.oracle.raw(x) for x in targets], targets
        size = -(-len(targets) // (4 * self.workers))
        chunks = [targets[i:i + size] for i in range(0, len(targets), size)]
        out = []
        for res in self.pool.map(_lengths_chunk, chunks):
            out.extend(res)
        return out, targets

    def close(self):
        if self.pool is not None:
            self.pool.shutdown()


def _next_level(level, atoms):
    return {tuple(a + b for a, b in zip(x, u)) for x in level for u in atoms}


def unions_profile(atoms, k_max, element_budget=10**6, workers=1):
    """Unions U_k of all sets of lengths containing k, for k = 1..k_max.

    U_k is the union of L(a) over the distinct products ``a`` of exactly k
    atoms.  Exploration stops before a level that would push the number
    of processed elements past ``element_budget``; the profile is then
    truncated at the last finished k and marked inexact.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    atoms_t = [tuple(a) for a in atoms]
    complete = getattr(atoms, "complete", True)
    lengths = _LengthMap(atoms_t, workers)
    unions, rho, lam = {}, {}, {}
    deltas = set()
    used = 0
    truncated = None
    level = set(atoms_t)
    try:
        for k in range(1, k_max + 1):
            if k > 1:
                level = _next_level(level, atoms_t)
            if used + len(level) > element_budget:
                truncated = k - 1
                break
            used += len(level)
            sets, _ = lengths(level)
            u = set()
            for L in sets:
                u.update(L)
                vals = sorted(L)
                deltas.update(b - a for a, b in zip(vals, vals[1:]))
            unions[k] = LengthSet(tuple(u), complete)
            rho[k] = max(u)
            lam[k] = min(u)
    finally:
        lengths.close()
    return UnionsProfile((1, k_max), unions, rho, lam,
                         complete and truncated is None, truncated, used, frozenset(deltas))


def delta_H_lower(atoms, element_budget=10**5, max_atoms=None, workers=1):
    """Union of Delta(L(a)) over products of atoms explored level by level.

    Always a subset of Delta(H); equality is never claimed.
    """
    atoms_t = [tuple(a) for a in atoms]
    lengths = _LengthMap(atoms_t, workers)
    seen = set()
    out = set()
    level = set(atoms_t)
    k = 1
    try:
        while level:
            fresh = level - seen
            if len(seen) + len(fresh) > element_budget:
                break
            seen |= fresh
            sets, _ = lengths(fresh)
            for L in sets:
                out |= delta_of(L)
            if max_atoms is not None and k >= max_atoms:
                break
            level = _next_level(level, atoms_t)
            k += 1
    finally:
        lengths.close()
    return frozenset(out)


@dataclass(frozen=True)
class AAPDecomposition:
    """``L = y + (L_minus | L_star | L_plus)`` with ``L_star`` an
    arithmetic progression of difference ``d`` starting at 0."""

    y: int
    d: int
    M: int
    L_minus: tuple
    L_star: tuple
    L_plus: tuple

    def reconstruct(self):
        return tuple(sorted(self.y + v for v in self.L_minus + self.L_star + self.L_plus))

    def is_valid(self, L=None):
        star = self.L_star
        if not star or star[0] != 0:
            return False
        if any(b - a != self.d for a, b in zip(star, star[1:])):
            return False
        if any(not -self.M <= v <= -1 for v in self.L_minus):
            return False
        top = star[-1]
        if any(not top + 1 <= v <= top + self.M for v in self.L_plus):
            return False
        rec = self.reconstruct()
        if any((v - self.y) % self.d for v in rec):
            return False
        return L is None or rec == tuple(sorted(set(L)))

    def as_dict(self):
        return {"y": self.y, "d": self.d, "M": self.M, "L_minus": list(self.L_minus),
                "L_star": list(self.L_star), "L_plus": list(self.L_plus)}


def _aap_fixed(vals, d):
    lo, hi = vals[0], vals[-1]
    if any((v - lo) % d for v in vals):
        return None
    present = set(vals)
    best = None
    # maximal-or-not runs s, s+d, ..., e inside L with no other element between
    for i, s in enumerate(vals):
        e = s
        while True:
            M = max(s - lo, hi - e)
            key = (M, -(e - s), s)
            if best is None or key < best[0]:
                best = (key, s, e)
            if e + d in present:
                e += d
            else:
                break
    (M, _, _), s, e = best
    minus = tuple(v - s for v in vals if v < s)
    star = tuple(range(0, e - s + 1, d))
    plus = tuple(v - s for v in vals if v > e)
    return AAPDecomposition(s, d, M, minus, star, plus)


def aap_decompose(L, d=None):
    """Decomposition of a finite integer set as an almost arithmetical
    progression with the smallest bound ``M``.

    With ``d`` given, returns None unless all elements are congruent mod
    ``d``.  Without ``d``, every divisor of the gcd of successive
    differences is tried; ties on ``M`` go to the smaller ``d``.  Ties
    within one ``d`` prefer the longer central progression, then the
    smaller shift.
    """
    vals = tuple(sorted(set(int(v) for v in (L.values if isinstance(L, LengthSet) else L))))
    if not vals:
        raise ValueError("empty set")
    if d is not None:
        if d < 1:
            raise ValueError("difference must be positive")
        return _aap_fixed(vals, d)
    g = 0
    for a, b in zip(vals, vals[1:]):
        g = gcd(g, b - a)
    cands = [1] if g == 0 else [q for q in range(1, g + 1) if g % q == 0]
    best = None
    for q in cands:
        dec = _aap_fixed(vals, q)
        if dec is not None and (best is None or dec.M < best.M):
            best = dec
    return best


@dataclass
class ReportRow:
    k: int
    lambda_k: int
    rho_k: int
    size: int
    density: Fraction
    aap: object
    max_gap: int

    @property
    def aap_M(self):
        return None if self.aap is None else self.aap.M


@dataclass
class StructureReport:
    k_min: int
    k_max: int
    rows: list
    d_hat: object
    delta_lower: tuple
    aap_bound: object
    onset: object
    max_rho_step: object
    max_lambda_step: object
    elasticity: object
    predicted_density: object
    density_deviation: object
    exact: bool
    truncated_at: object
    notes: list = field(default_factory=list)
    regime: str = "simple"
    growth: list = field(default_factory=list)

    def as_dict(self):
        def frac(q):
            return None if q is None else str(q)
        el = self.elasticity
        return {
            "k_range": [self.k_min, self.k_max],
            "exact": self.exact,
            "truncated_at": self.truncated_at,
            "regime": self.regime,
            "d_hat": self.d_hat,
            "delta_lower": list(self.delta_lower),
            "aap_bound": self.aap_bound,
            "aap_onset": self.onset,
            "max_rho_step": self.max_rho_step,
            "max_lambda_step": self.max_lambda_step,
            "elasticity": None if el is None else {
                "value": str(el.value), "exact": el.exact, "method": el.method,
                "structure": el.structure},
            "predicted_density": frac(self.predicted_density),
            "density_deviation": frac(self.density_deviation),
            "notes": list(self.notes),
            "rows": [{
                "k": r.k, "lambda_k": r.lambda_k, "rho_k": r.rho_k, "size_U_k": r.size,
                "density": str(r.density), "aap_M": r.aap_M, "max_delta_U_k": r.max_gap,
                "aap": None if r.aap is None else r.aap.as_dict()} for r in self.rows],
            "rho_growth": [[k, v] for k, v in self.growth],
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "lambda_k", "rho_k", "size_U_k", "density", "aap_M"])
        for r in self.rows:
            w.writerow([r.k, r.lambda_k, r.rho_k, r.size, str(r.density),
                        "" if r.aap_M is None else r.aap_M])
        return buf.getvalue()

    def to_text(self):
        head = ["k", "lambda_k", "rho_k", "|U_k|", "|U_k|/k", "AAP M", "max gap"]
        body = [[str(r.k), str(r.lambda_k), str(r.rho_k), str(r.size), str(r.density),
                 "-" if r.aap_M is None else str(r.aap_M), str(r.max_gap)] for r in self.rows]
        widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h)
                  for i, h in enumerate(head)]
        lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths))]
        lines += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
        el = self.elasticity
        lines.append("")
        lines.append(f"regime            {self.regime}")
        lines.append(f"exact             {self.exact}")
        lines.append(f"min delta (d)     {self.d_hat if self.d_hat is not None else 'none observed'}")
        lines.append(f"AAP bound M       {self.aap_bound}  (onset k = {self.onset})")
        lines.append(f"max rho step      {self.max_rho_step}")
        lines.append(f"max lambda step   {self.max_lambda_step}")
        if el is not None:
            tag = "exact" if el.exact else "lower bound"
            lines.append(f"elasticity        {el.value} ({tag}, {el.method})")
        if self.predicted_density is not None:
            lines.append(f"density limit     {self.predicted_density}"
                         f"  (deviation at k={self.rows[-1].k}: {self.density_deviation})")
        for note in self.notes:
            lines.append(f"note: {note}")
        if self.growth:
            lines.append("rho_k growth: " + ", ".join(f"{k}:{v}" for k, v in self.growth))
        return "\n".join(lines) + "\n"


def structure_theorem_report(atoms, k_min, k_max, element_budget=10**6,
                             simple=None, elasticity=None, workers=1):
    """Per-k table of U_k with AAP fits, step sizes of rho_k / lambda_k and
    the observed density |U_k|/k against (rho - 1/rho) / min Delta.

    ``simple=False`` switches to the non-simple regime: rho_k is expected
    to grow without bound, so the growth table is attached and no density
    limit is predicted.
    """
    if not 1 <= k_min <= k_max:
        raise ValueError("need 1 <= k_min <= k_max")
    profile = unions_profile(atoms, k_max, element_budget, workers)
    deltas = sorted(profile.delta_lower)
    d_hat = deltas[0] if deltas else None
    if elasticity is None:
        elasticity = elasticity_via_H0(atoms)
    notes = []
    rows = []
    for k in range(k_min, k_max + 1):
        if k not in profile.unions:
            break
        U = profile.unions[k]
        dec = aap_decompose(U, d_hat or 1)
        gaps = delta_of(U)
        rows.append(ReportRow(k, profile.lambda_k[k], profile.rho_k[k], len(U),
                              Fraction(len(U), k), dec, max(gaps) if gaps else 0))
    if profile.truncated_at is not None:
        notes.append(f"element budget exhausted; profile truncated at k={profile.truncated_at}")
    onset = None
    bound = None
    for i in range(len(rows) - 1, -1, -1):
        if rows[i].aap is None:
            break
        onset = rows[i].k
    if onset is not None:
        bound = max(r.aap_M for r in rows if r.k >= onset)
    ks = [k for k in profile.ks() if k >= k_min]
    rho_steps = [profile.rho_k[k + 1] - profile.rho_k[k] for k in ks if k + 1 in profile.unions]
    lam_steps = [profile.lambda_k[k] - profile.lambda_k[k + 1] for k in ks if k + 1 in profile.unions]
    predicted = deviation = None
    regime = "simple" if simple is not False else "non-simple"
    growth = []
    if simple is False:
        notes.append("non-simple: rho_k is expected to be unbounded for large k; "
                     "table values are lower bounds from a truncated atom list")
        growth = [(k, profile.rho_k[k]) for k in profile.ks()]
    elif d_hat is None:
        if elasticity.structure in ("factorial", "half-factorial"):
            notes.append(f"minDelta empty ({elasticity.structure}), density formula not applicable")
        else:
            notes.append("minDelta empty at this budget, density formula not applicable")
    else:
        rho = elasticity.value
        predicted = (rho - 1 / rho) / d_hat
        if rows:
            deviation = abs(rows[-1].density - predicted)
    return StructureReport(k_min, k_max, rows, d_hat, tuple(deltas), bound, onset,
                           max(rho_steps) if rho_steps else None,
                           max(lam_steps) if lam_steps else None,
                           elasticity, predicted, deviation, profile.exact,
                           profile.truncated_at, notes, regime, growth)
