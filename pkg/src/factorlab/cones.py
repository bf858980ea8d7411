"""Exact polyhedral helpers for cones of the form {x >= 0 : A x = 0}.

Everything here is integer or rational arithmetic; numpy is only used to
vectorize lattice-point enumeration once the exact data is fixed.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import comb, gcd

import numpy as np

# rays are found by trying every (r-1)-subset of constraints; refuse beyond this
MAX_RAY_SUBSETS = 50_000


def xgcd(a, b):
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, nx, y, ny = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
    if a < 0:
        a, x, y = -a, -x, -y
    return a, x, y


def primitive(v):
    g = reduce(gcd, (int(a) for a in v), 0)
    return tuple(int(a) // g for a in v) if g > 1 else tuple(int(a) for a in v)


def kernel_lattice(A, n):
    """Columns (as a list of rows) of a basis of ``{x in Z^n : A x = 0}``.

    Unimodular column operations on ``[A; I]``; the identity block records
    the transform, and the columns where ``A`` has been cleared span the
    kernel lattice.
    """
    m = len(A)
    M = [list(r) for r in A] + [[int(i == j) for j in range(n)] for i in range(n)]
    col = 0
    for i in range(m):
        if col == n:
            break
        for j in range(col + 1, n):
            a, b = M[i][col], M[i][j]
            if b == 0:
                continue
            g, x, y = xgcd(a, b)
            pa, pb = a // g, b // g
            for r in M:
                u, v = r[col], r[j]
                r[col], r[j] = x * u + y * v, -pb * u + pa * v
        if M[i][col] != 0:
            col += 1
    return [[M[m + r][c] for c in range(col, n)] for r in range(n)]


def rank(vecs):
    """Rank of an integer matrix by fraction-free elimination; rows are
    divided by their content to keep entries small."""
    rows = [[int(a) for a in v] for v in vecs]
    if not rows:
        return 0
    r = 0
    for c in range(len(rows[0])):
        k = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        p, top = rows[r][c], rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                row = [p * a - f * b for a, b in zip(rows[i], top)]
                g = reduce(gcd, row, 0)
                rows[i] = [a // g for a in row] if g > 1 else row
        r += 1
    return r


def _null_line(rows, r):
    """Primitive generator of a one-dimensional nullspace, else None."""
    M = [[Fraction(a) for a in row] for row in rows]
    piv = []
    ri = 0
    for c in range(r):
        k = next((i for i in range(ri, len(M)) if M[i][c] != 0), None)
        if k is None:
            continue
        M[ri], M[k] = M[k], M[ri]
        p = M[ri][c]
        M[ri] = [a / p for a in M[ri]]
        for i in range(len(M)):
            if i != ri and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[ri])]
        piv.append(c)
        ri += 1
    free = [c for c in range(r) if c not in piv]
    if len(free) != 1:
        return None
    f = free[0]
    w = [Fraction(0)] * r
    w[f] = Fraction(1)
    for i, c in enumerate(piv):
        w[c] = -M[i][f]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in w), 1)
    return primitive([x * den for x in w])


def det_adjugate(R):
    """Exact determinant and adjugate of a square integer matrix.

    Fraction-free Gauss-Jordan (Bareiss) on ``[R | I]``: every
    intermediate entry is a minor, so all divisions are exact, and the
    final blocks are ``d*I`` and ``d*R^-1`` with ``d = +-det R``.
    """
    r = len(R)
    M = [[int(a) for a in row] + [int(i == j) for j in range(r)] for i, row in enumerate(R)]
    prev = 1
    sign = 1
    for k in range(r):
        if M[k][k] == 0:
            i = next((i for i in range(k + 1, r) if M[i][k] != 0), None)
            if i is None:
                return 0, None
            M[k], M[i] = M[i], M[k]
            sign = -sign
        p = M[k][k]
        rk = M[k]
        for i in range(r):
            if i == k:
                continue
            ri = M[i]
            f = ri[k]
            M[i] = [(p * a - f * b) // prev for a, b in zip(ri, rk)]
        prev = p
    # rows that were finished before later pivots are scaled by those pivots
    # too, so the left block ends as prev * I
    d = prev
    adj = [row[r:] for row in M]
    if sign < 0:
        d = -d
        adj = [[-a for a in row] for row in adj]
    return d, adj


def hnf_diagonal(R):
    """Diagonal of a lower-triangular column Hermite form of ``R``.

    Vectors ``v`` with ``0 <= v_i < diag[i]`` are coset representatives of
    ``Z^r / R Z^r``.
    """
    r = len(R)
    M = [list(row) for row in R]
    diag = []
    for i in range(r):
        for j in range(i + 1, r):
            a, b = M[i][i], M[i][j]
            if b == 0:
                continue
            g, x, y = xgcd(a, b)
            pa, pb = a // g, b // g
            for row in M:
                u, v = row[i], row[j]
                row[i], row[j] = x * u + y * v, -pb * u + pa * v
        diag.append(abs(M[i][i]))
    return diag


def pulling_triangulation(rays, d):
    """Simplices (index tuples) of a pulling triangulation of cone(rays).

    ``rays`` live in the nonnegative orthant, so every face of the cone is
    cut out by coordinate hyperplanes; facets of a face are its maximal
    such sections of rank one less.
    """
    n = len(rays[0])
    cache = {}
    ranks = {}

    def face_rank(F):
        if F not in ranks:
            ranks[F] = rank([rays[i] for i in F])
        return ranks[F]

    def tri(idx, dim):
        key = idx
        if key in cache:
            return cache[key]
        if len(idx) == dim:
            out = [idx]
        else:
            apex = idx[0]
            faces = set()
            for c in range(n):
                F = tuple(i for i in idx if rays[i][c] == 0)
                if dim - 1 <= len(F) < len(idx):
                    faces.add(F)
            facets = [F for F in faces if face_rank(F) == dim - 1]
            facets = [F for F in facets if not any(set(F) < set(G) for G in facets)]
            out = []
            for F in sorted(facets):
                if apex in F:
                    continue
                for s in tri(F, dim - 1):
                    out.append(tuple(sorted((apex,) + s)))
        cache[key] = out
        return out

    return tri(tuple(range(len(rays))), d)


@dataclass
class SimplicialPlan:
    """Extreme rays and a triangulation of ``{x >= 0 : A x = 0}``.

    ``volume`` is the number of lattice points the Hilbert basis
    enumeration will touch (sum of simplex determinants), or ``inf`` when
    ray enumeration was refused as too large.
    """

    n: int
    kernel: list          # n x r, columns span the kernel lattice
    coords: list          # rays in kernel coordinates
    rays: list            # rays in x-space
    simplices: list
    volume: float

    @classmethod
    def build(cls, A, n):
        K = kernel_lattice(A, n)
        r = len(K[0]) if K and K[0] else 0
        if r == 0:
            return cls(n, K, [], [], [], 0)
        if comb(n, r - 1) > MAX_RAY_SUBSETS:
            return cls(n, K, [], [], [], float("inf"))
        coords, rays = cls._rays(K, n, r)
        if not rays:
            return cls(n, K, [], [], [], 0)
        d = rank(rays)
        if d < r:
            # cone lies in a proper subspace: add the implicit equalities
            zero = [c for c in range(n) if all(x[c] == 0 for x in rays)]
            A2 = [list(row) for row in A] + [[int(j == c) for j in range(n)] for c in zero]
            return cls.build(A2, n)
        simplices = pulling_triangulation(rays, d)
        volume = 0
        for S in simplices:
            R = [[coords[j][i] for j in S] for i in range(r)]
            det, _ = det_adjugate(R)
            volume += abs(det)
        return cls(n, K, coords, rays, simplices, volume)

    @staticmethod
    def _rays(K, n, r):
        lines = [[1]] if r == 1 else []
        if r > 1:
            for T in combinations(range(n), r - 1):
                w = _null_line([K[i] for i in T], r)
                if w is not None:
                    lines.append(w)
        found = {}
        for w in lines:
            for s in (1, -1):
                ws = tuple(s * a for a in w)
                x = tuple(sum(K[i][k] * ws[k] for k in range(r)) for i in range(n))
                if all(v >= 0 for v in x) and any(x):
                    found[ws] = x
        keys = sorted(found, key=lambda w: (sum(found[w]), found[w]))
        return [list(w) for w in keys], [found[w] for w in keys]

    def hilbert_basis(self):
        """Minimal nonzero lattice points of the cone.

        Every irreducible element is an extreme ray generator or a nonzero
        lattice point of the half-open parallelepiped of some simplex;
        the coordinatewise-minimal candidates are exactly the basis.
        """
        if not self.rays:
            return []
        r = len(self.kernel[0])
        K = np.array(self.kernel, dtype=np.int64)
        ray_arr = np.array(self.rays, dtype=np.int64)
        chunks = [ray_arr]
        for S in self.simplices:
            R = [[self.coords[j][i] for j in S] for i in range(r)]
            det, adj = det_adjugate(R)
            if abs(det) == 1:
                continue
            if det < 0:
                det, adj = -det, [[-a for a in row] for row in adj]
            diag = hnf_diagonal(R)
            V = np.indices(diag, dtype=np.int64).reshape(r, -1).T
            lam = V @ np.array(adj, dtype=np.int64).T
            P = V - (lam // det) @ np.array(R, dtype=np.int64).T
            P = P[P.any(axis=1)]
            X = P @ K.T
            # primitive ray generators are basis elements; drop what they reduce
            for ray in ray_arr:
                X = X[~(X >= ray).all(axis=1)]
            chunks.append(np.unique(X, axis=0))
        return minimal_elements(np.concatenate(chunks))


def minimal_elements(X):
    """Coordinatewise-minimal distinct rows of an integer array, ordered by
    total degree then lexicographically."""
    if not len(X):
        return []
    X = np.unique(X, axis=0)
    deg = X.sum(axis=1)
    order = np.lexsort(X.T[::-1])
    order = order[np.argsort(deg[order], kind="stable")]
    X, deg = X[order], deg[order]
    kept = []
    start = 0
    while start < len(X):
        stop = np.searchsorted(deg, deg[start], side="right")
        G = X[start:stop]
        alive = np.ones(len(G), dtype=bool)
        for m in kept:
            alive &= ~(G >= m).all(axis=1)
            if not alive.any():
                break
        kept.extend(G[alive])
        start = stop
    return [tuple(int(v) for v in m) for m in kept]


def lp_maximize(M, b, c):
    """Exact simplex: maximize ``c . v`` s.t. ``M v = b``, ``v >= 0``.

    Two phases, Bland's rule, ``Fraction`` arithmetic throughout.  Returns
    ``(value, v)`` or ``None`` if infeasible.  Raises ``ValueError`` when
    the objective is unbounded.
    """
    m, n = len(M), len(M[0])
    rows = []
    for i in range(m):
        row = [Fraction(a) for a in M[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row, rhs = [-a for a in row], -rhs
        rows.append(row + [Fraction(int(i == k)) for k in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m

    def pivot(r, col):
        p = rows[r][col]
        rows[r] = [a / p for a in rows[r]]
        for i in range(m):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * e for a, e in zip(rows[i], rows[r])]
        basis[r] = col

    def run(cost, allowed):
        while True:
            cb = [cost[j] for j in basis]
            entering = None
            for j in range(width):
                if j not in allowed or j in basis:
                    continue
                reduced = cost[j] - sum(cb[i] * rows[i][j] for i in range(m))
                if reduced > 0:
                    entering = j
                    break
            if entering is None:
                return
            best = None
            for i in range(m):
                a = rows[i][entering]
                if a > 0:
                    ratio = rows[i][-1] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                raise ValueError("unbounded objective")
            pivot(best[1], entering)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, set(range(width)))
    if any(rows[i][-1] != 0 for i in range(m) if basis[i] >= n):
        return None
    # drive leftover artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if rows[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    cost = [Fraction(a) for a in c] + [Fraction(0)] * m
    run(cost, set(range(n)))
    v = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            v[j] = rows[i][-1]
    return sum(ci * vi for ci, vi in zip(cost, v)), v
