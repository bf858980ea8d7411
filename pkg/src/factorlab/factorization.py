"""Factorizations over an atom list, sets of lengths, distances, elasticity."""

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Factorization",
    "LengthSet",
    "NotInMonoidError",
    "LengthOracle",
    "factorizations",
    "set_of_lengths",
    "delta_of",
    "rho_of",
    "multiply",
]


class NotInMonoidError(ValueError):
    pass


@dataclass(frozen=True)
class Factorization:
    multiplicities: tuple
    target: tuple

    @property
    def length(self):
        return sum(self.multiplicities)

    def evaluate(self, atoms):
        return multiply(atoms, self.multiplicities)

    def words(self, atoms):
        """Atoms of the factorization spelled out with repetition."""
        return [atoms[i] for i, c in enumerate(self.multiplicities) for _ in range(c)]


def multiply(atoms, mult):
    """The element ``sum_i mult[i] * atoms[i]``."""
    dim = len(atoms[0]) if len(atoms) else 0
    out = [0] * dim
    for c, a in zip(mult, atoms):
        if c:
            for j, v in enumerate(a):
                out[j] += c * v
    return tuple(out)


@dataclass(frozen=True)
class LengthSet:
    values: tuple
    exact: bool = True

    def __post_init__(self):
        vals = tuple(sorted(set(int(v) for v in self.values)))
        if not vals:
            raise ValueError("a set of lengths is nonempty")
        object.__setattr__(self, "values", vals)

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __contains__(self, k):
        return k in self.values

    @property
    def min(self):
        return self.values[0]

    @property
    def max(self):
        return self.values[-1]

    @property
    def delta(self):
        return delta_of(self.values)

    @property
    def rho(self):
        return rho_of(self.values)


def _values(L):
    return L.values if isinstance(L, LengthSet) else tuple(sorted(set(L)))


def delta_of(L):
    """Successive gaps of a finite set of integers."""
    vals = _values(L)
    return {b - a for a, b in zip(vals, vals[1:])}


def rho_of(L):
    """max/min as an exact rational, with rho({0}) = 1."""
    vals = _values(L)
    if not vals:
        raise ValueError("elasticity of the empty set")
    if vals == (0,):
        return Fraction(1)
    if vals[0] <= 0:
        raise ValueError("elasticity is defined for sets of positive integers or {0}")
    return Fraction(vals[-1], vals[0])


def factorizations(atoms, target):
    """All multiplicity vectors ``z`` with ``sum z_i * atoms[i] == target``.

    Depth-first over atoms in index order; the multiplicity of atom ``u``
    is bounded by ``min over p in supp(u) of target_p // u_p``.  The
    result is sorted lexicographically by multiplicity vector.
    """
    atoms = list(atoms)
    target = tuple(target)
    n = len(atoms)
    if not any(target):
        return [Factorization((0,) * n, target)]
    dim = len(target)
    # covered[i][p]: some atom with index >= i has coordinate p
    covered = [[False] * dim for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        covered[i] = [c or v > 0 for c, v in zip(covered[i + 1], atoms[i])]
    rest = list(target)
    mult = [0] * n
    out = []

    def dfs(i):
        if not any(rest):
            out.append(tuple(mult))
            return
        if i == n:
            return
        cov = covered[i]
        for p in range(dim):
            if rest[p] and not cov[p]:
                return
        a = atoms[i]
        bound = min(rest[p] // v for p, v in enumerate(a) if v)
        for c in range(bound + 1):
            mult[i] = c
            if c:
                for p, v in enumerate(a):
                    rest[p] -= v
            dfs(i + 1)
        for p, v in enumerate(a):
            rest[p] += v * bound
        mult[i] = 0

    dfs(0)
    out.sort()
    return [Factorization(z, target) for z in out]


def _exact(atoms):
    return getattr(atoms, "complete", True)


def set_of_lengths(atoms, target):
    zs = factorizations(atoms, target)
    if not zs:
        raise NotInMonoidError(f"{tuple(target)} is not a product of the given atoms")
    return LengthSet(tuple(z.length for z in zs), _exact(atoms))


class LengthOracle:
    """Memoized sets of lengths over a fixed atom list.

    ``lengths(x)`` is the union over atoms ``u <= x`` of ``lengths(x - u) + 1``;
    the table is shared across queries, which is what makes sweeping many
    targets cheap.
    """

    def __init__(self, atoms):
        self.atoms = [tuple(a) for a in atoms]
        self.exact = _exact(atoms)
        self._memo = {}

    def raw(self, x):
        x = tuple(x)
        memo = self._memo
        if x in memo:
            return memo[x]
        if not any(x):
            memo[x] = frozenset((0,))
            return memo[x]
        # explicit stack instead of recursion; children before parents
        stack = [x]
        while stack:
            y = stack[-1]
            if y in memo:
                stack.pop()
                continue
            pending = []
            for u in self.atoms:
                r = tuple(a - b for a, b in zip(y, u))
                if min(r) >= 0 and r not in memo:
                    pending.append(r)
            if pending:
                for r in pending:
                    if not any(r):
                        memo[r] = frozenset((0,))
                    else:
                        stack.append(r)
                continue
            stack.pop()
            acc = set()
            for u in self.atoms:
                r = tuple(a - b for a, b in zip(y, u))
                if min(r) >= 0:
                    acc.update(l + 1 for l in memo[r])
            memo[y] = frozenset(acc)
        return memo[x]

    def __call__(self, x):
        vals = self.raw(x)
        if not vals:
            raise NotInMonoidError(f"{tuple(x)} is not a product of the given atoms")
        return LengthSet(tuple(vals), self.exact)
