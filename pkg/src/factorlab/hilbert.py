"""Hilbert bases of homogeneous linear Diophantine systems.

The solver is a level-by-level completion search: candidates of total
degree ``d`` are extended by a unit vector ``e_j`` only when the move
points back toward the kernel (``<A t, A e_j> < 0``), and any candidate
dominating an already accepted solution is discarded.  Rows may be
taken modulo an integer, in which case one slack column per modular row
is added internally and projected away again.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from itertools import product

import numpy as np

__all__ = [
    "DiophantineSystem",
    "HilbertBasis",
    "hilbert_basis",
    "verify_basis",
    "find_unrepresented",
    "DEFAULT_NODE_CAP",
    "brute_force_basis",
]

DEFAULT_NODE_CAP = 10**7

# int64 headroom for A @ t with the degrees seen at desk scale.
_INT_LIMIT = 2**62

# above this many parallelepiped points "auto" falls back to completion
SIMPLICIAL_POINT_LIMIT = 5 * 10**6
# "auto" first runs completion under this many expansions; small systems
# finish here far faster than the triangulation can be set up
AUTO_PROBE_NODES = 20_000


@dataclass(frozen=True)
class DiophantineSystem:
    """Integer matrix ``A``; row ``i`` reads ``A[i] . x == 0`` or, when
    ``moduli[i]`` is set, ``A[i] . x == 0 (mod moduli[i])``."""

    matrix: tuple
    moduli: tuple = None

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in row) for row in self.matrix)
        if not rows or not rows[0]:
            raise ValueError("system needs at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "matrix", rows)
        if self.moduli is not None:
            mods = tuple(None if m is None else int(m) for m in self.moduli)
            if len(mods) != len(rows):
                raise ValueError("moduli must align with rows")
            if any(m is not None and m < 2 for m in mods):
                raise ValueError("moduli must be >= 2")
            if all(m is None for m in mods):
                mods = None
            object.__setattr__(self, "moduli", mods)

    @property
    def n_rows(self):
        return len(self.matrix)

    @property
    def n_vars(self):
        return len(self.matrix[0])

    def modulus(self, i):
        return None if self.moduli is None else self.moduli[i]

    def is_solution(self, x):
        for i, row in enumerate(self.matrix):
            s = sum(a * v for a, v in zip(row, x))
            m = self.modulus(i)
            if (s % m if m else s) != 0:
                return False
        return True

    def homogenized(self):
        """Integer matrix with one slack column per modular row.

        Modular coefficients are reduced into ``[0, m)`` so the slack
        value ``sum / m`` is nonnegative and monotone in ``x``.
        """
        q = self.n_vars
        mod_rows = [i for i in range(self.n_rows) if self.modulus(i)]
        out = []
        for i, row in enumerate(self.matrix):
            m = self.modulus(i)
            r = [a % m for a in row] if m else list(row)
            slack = [0] * len(mod_rows)
            if m:
                slack[mod_rows.index(i)] = -m
            out.append(r + slack)
        return out, q


@dataclass
class HilbertBasis:
    solutions: list
    system: DiophantineSystem
    complete: bool = True
    expanded: int = 0
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)


def _dominates_any(cands, added, sols_by_col):
    """Mask of rows in ``cands`` that dominate some accepted solution.

    Row ``r`` was obtained by incrementing column ``added[r]`` of a parent
    that dominated nothing, so only solutions using that column can be
    dominated.
    """
    hit = np.zeros(len(cands), dtype=bool)
    for j in np.unique(added):
        group = sols_by_col.get(int(j))
        if group is None:
            continue
        rows = np.nonzero(added == j)[0]
        sub = cands[rows]
        for s in group:
            ok = ~hit[rows]
            if not ok.any():
                break
            le = (sub[ok] >= s).all(axis=1)
            hit[rows[ok]] |= le
    return hit


def _completion(A, node_cap):
    n_all = A.shape[1]
    row_bound = int(np.abs(A).sum(axis=1).max())
    gram = A.T @ A

    frontier = np.eye(n_all, dtype=np.int64)
    sols = []
    sols_by_col = {}
    expanded = 0
    degree = 1
    complete = True
    while len(frontier):
        if row_bound * (degree + 1) >= _INT_LIMIT:
            raise OverflowError("Hilbert basis search exceeded int64 range")
        image = frontier @ A.T
        zero = ~image.any(axis=1)
        for s in frontier[zero]:
            s = s.copy()
            sols.append(s)
            for j in np.nonzero(s)[0]:
                sols_by_col.setdefault(int(j), []).append(s)
        frontier = frontier[~zero]
        if not len(frontier):
            break
        expanded += len(frontier)
        if expanded > node_cap:
            complete = False
            break
        # <A t, A e_j> for every live candidate t and column j
        scores = frontier @ gram
        ti, tj = np.nonzero(scores < 0)
        if not len(ti):
            break
        cands = frontier[ti].copy()
        cands[np.arange(len(ti)), tj] += 1
        keep = ~_dominates_any(cands, tj, sols_by_col)
        cands = cands[keep]
        if len(cands):
            cands = np.unique(cands, axis=0)
        frontier = cands
        degree += 1
    return sols, complete, expanded


def hilbert_basis(system, node_cap=DEFAULT_NODE_CAP, method="auto"):
    """Minimal nonzero nonnegative solutions of ``system``.

    ``method`` is ``"completion"`` (graded completion search),
    ``"simplicial"`` (extreme rays, pulling triangulation and
    parallelepiped lattice points, see :mod:`factorlab.cones`) or
    ``"auto"``.  Auto runs a short completion probe of
    ``AUTO_PROBE_NODES`` expansions; if that does not finish it uses the
    simplicial route when its lattice-point count is at most
    ``SIMPLICIAL_POINT_LIMIT`` and full completion otherwise.

    If the completion search expands more than ``node_cap`` states it
    stops and the partial basis is flagged ``complete=False``.  Solutions
    come out ordered by total degree, then lexicographically.
    """
    from . import cones

    rows, q = system.homogenized()
    n_all = len(rows[0])
    if method not in ("auto", "completion", "simplicial"):
        raise ValueError(f"unknown method {method!r}")
    meta = {}
    A = np.array(rows, dtype=np.int64)
    if method == "auto":
        sols, complete, expanded = _completion(A, min(AUTO_PROBE_NODES, node_cap))
        if complete or node_cap <= AUTO_PROBE_NODES:
            meta["method"] = "completion"
            out = sorted({tuple(int(v) for v in s[:q]) for s in sols}, key=lambda s: (sum(s), s))
            return HilbertBasis(out, system, complete, expanded, meta)
    if method != "completion":
        plan = cones.SimplicialPlan.build(rows, n_all)
        meta["simplicial_points"] = plan.volume
        if method == "simplicial" or plan.volume <= SIMPLICIAL_POINT_LIMIT:
            out = plan.hilbert_basis()
            out = sorted({tuple(int(v) for v in s[:q]) for s in out},
                         key=lambda s: (sum(s), s))
            meta["method"] = "simplicial"
            return HilbertBasis(out, system, True, 0, meta)
    sols, complete, expanded = _completion(A, node_cap)
    meta["method"] = "completion"
    out = sorted({tuple(int(v) for v in s[:q]) for s in sols}, key=lambda s: (sum(s), s))
    return HilbertBasis(out, system, complete, expanded, meta)


def _box_ranges(system, box):
    if isinstance(box, int):
        return [box] * system.n_vars
    return list(box)


def _echelon(matrix, n_cols, pivot_order):
    """Reduced row echelon form over the rationals, pivoting on columns in
    ``pivot_order`` first.  Returns ``(pivots, rows)`` with each row scaled
    to integers: ``rows[k][pivots[k]] > 0`` and zero in other pivots."""
    rows = [[Fraction(a) for a in r] for r in matrix]
    pivots = []
    r = 0
    for c in pivot_order:
        if r == len(rows):
            break
        k = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        piv = rows[r][c]
        rows[r] = [a / piv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    out = []
    for row in rows[:r]:
        den = 1
        for a in row:
            den = den * a.denominator // gcd(den, a.denominator)
        out.append([int(a * den) for a in row])
    return pivots, out


def find_unrepresented(basis, box):
    """Search the box for a nonzero solution not generated by ``basis``.

    A nonzero solution in the box that dominates no basis element is
    missing from the monoid the basis generates; conversely, if every
    basis element solves the system and no such vector exists, every
    solution in the box decomposes, because its minimal parts lie in the
    box as well.  Returns the first witness found, or ``None``.

    Pivot coordinates of an echelon form are solved exactly from the free
    ones, so only the free coordinates are enumerated.  Pivots are pruned
    by interval arithmetic over the free coordinates still open, and
    "dominates no b" is propagated on the free coordinates: once all of
    ``b``'s support but one free coordinate ``t`` meets ``b``, the search
    imposes ``x_t < b_t``.
    """
    system = basis.system
    q = system.n_vars
    hom, _ = system.homogenized()
    n_all = len(hom[0])
    ub = _box_ranges(system, box)
    for i, row in enumerate(system.matrix):
        m = system.modulus(i)
        if m:
            ub.append(sum((a % m) * u for a, u in zip(row, ub[:q])) // m)
    elems = [tuple(b) for b in basis.solutions]
    supports = [[t for t in range(q) if b[t]] for b in elems]
    for b, sup in zip(elems, supports):
        if len(sup) == 1:
            t = sup[0]
            ub[t] = min(ub[t], b[t] - 1)
    if any(u < 0 for u in ub):
        return None

    # slack columns pivot first, then x columns from the right
    order = list(range(q, n_all)) + list(range(q - 1, -1, -1))
    pivots, ech = _echelon(hom, n_all, order)
    piv_set = set(pivots)
    free = [c for c in range(n_all) if c not in piv_set]
    fpos = {c: k for k, c in enumerate(free)}
    # den_k * x_{pivot_k} = -sum_f ech[k][f] * x_f
    dens = [ech[k][p] for k, p in enumerate(pivots)]
    coef = [[-ech[k][f] for f in free] for k in range(len(pivots))]
    n_free = len(free)

    # domination constraints enforceable during the free-coordinate walk
    free_touch = [[] for _ in range(n_free)]
    for k, sup in enumerate(supports):
        if len(sup) > 1 and all(t in fpos for t in sup):
            for t in sup:
                free_touch[fpos[t]].append(k)

    x = [0] * n_all
    part = [0] * len(pivots)

    def pivots_feasible(level):
        for k in range(len(pivots)):
            lo = hi = part[k]
            row = coef[k]
            for s in range(level, n_free):
                a = row[s] * ub[free[s]]
                if a < 0:
                    lo += a
                else:
                    hi += a
            if hi < 0 or lo > dens[k] * ub[pivots[k]]:
                return False
        return True

    def propagate(level):
        log = []
        for k in free_touch[level]:
            b = elems[k]
            left = None
            dominated = True
            for t in supports[k]:
                s = fpos[t]
                if s > level:
                    if left is not None:
                        dominated = False
                        break
                    left = t
                elif x[t] < b[t]:
                    dominated = False
                    break
            if not dominated:
                continue
            if left is None:
                for t, old in reversed(log):
                    ub[t] = old
                return None
            if ub[left] >= b[left]:
                log.append((left, ub[left]))
                ub[left] = b[left] - 1
        return log

    def leaf():
        for k, p in enumerate(pivots):
            num = part[k]
            if num < 0 or num % dens[k]:
                return None
            v = num // dens[k]
            if v > ub[p]:
                return None
            x[p] = v
        cand = tuple(x[:q])
        if not any(cand):
            return None
        for b in elems:
            if all(c >= e for c, e in zip(cand, b)):
                return None
        return cand

    def dfs(level):
        if level == n_free:
            return leaf()
        c = free[level]
        for v in range(ub[c] + 1):
            x[c] = v
            for k in range(len(pivots)):
                part[k] += coef[k][level] * v
            log = propagate(level)
            hit = None
            if log is not None:
                if pivots_feasible(level + 1):
                    hit = dfs(level + 1)
                for t, old in reversed(log):
                    ub[t] = old
            for k in range(len(pivots)):
                part[k] -= coef[k][level] * v
            if hit is not None or log is None:
                # a dominated prefix stays dominated for larger v
                break
        x[c] = 0
        return hit

    return dfs(0)


def verify_basis(basis, box):
    """True iff every nonzero solution in ``[0, box]^n`` is a nonnegative
    integer combination of ``basis.solutions``."""
    system = basis.system
    if not all(system.is_solution(b) for b in basis.solutions):
        return False
    return find_unrepresented(basis, box) is None


def brute_force_basis(system, box):
    """Minimal nonzero solutions with coordinates <= ``box`` by exhaustive
    enumeration.  Exponential; only for tiny systems in tests and demos."""
    sols = [v for v in product(range(box + 1), repeat=system.n_vars)
            if any(v) and system.is_solution(v)]
    sols.sort(key=lambda v: (sum(v), v))
    minimal = []
    for v in sols:
        if not any(all(a <= b for a, b in zip(m, v)) for m in minimal):
            minimal.append(v)
    return minimal
