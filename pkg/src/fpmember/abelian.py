"""Integer linear algebra: Smith normal form, lattices and abelianizations.

Matrices are lists of rows of Python ints (unbounded precision).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .words import Presentation, exponent_sums


def identity_matrix(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def transpose(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> list:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(r) for r in zip(*m)]


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """``U . M . V == D`` with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: tuple
    D: tuple
    V: tuple

    @property
    def diagonal(self) -> tuple:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot rule: smallest absolute nonzero entry of the remaining block, first
    in row-major order on ties.
    """
    rows = len(m)
    ncols = len(m[0]) if rows else (cols or 0)
    a = [list(map(int, r)) for r in m]
    if any(len(r) != ncols for r in a):
        raise ValueError("ragged matrix")
    u = identity_matrix(rows)
    v = identity_matrix(ncols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):
        # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    t = 0
    while t < min(rows, ncols):
        pivot = None
        for i in range(t, rows):
            for j in range(t, ncols):
                x = a[i][j]
                if x and (pivot is None or abs(x) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        done = False
        while not done:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
            for j in range(t + 1, ncols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
            # a smaller remainder becomes the new pivot
            best = None
            for i in range(t + 1, rows):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(best[2])):
                    best = ("r", i, a[i][t])
            for j in range(t + 1, ncols):
                if a[t][j] and (best is None or abs(a[t][j]) < abs(best[2])):
                    best = ("c", j, a[t][j])
            if best is not None:
                done = False
                if best[0] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            p = a[t][t]
            for i in range(t + 1, rows):
                for j in range(t + 1, ncols):
                    if a[i][j] % p:
                        add_row(i, t, 1)
                        done = False
                        break
                if not done:
                    break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return SmithDecomposition(
        tuple(map(tuple, u)), tuple(map(tuple, a)), tuple(map(tuple, v))
    )


def check_smith(m, snf: SmithDecomposition) -> bool:
    rows = len(m)
    ncols = len(snf.V)
    if [list(r) for r in matmul(matmul(snf.U, m), snf.V)] != [list(r) for r in snf.D]:
        return False
    for i in range(rows):
        for j in range(ncols):
            if i != j and snf.D[i][j]:
                return False
    diag = snf.diagonal
    if any(d < 0 for d in diag):
        return False
    for x, y in zip(diag, diag[1:]):
        if (x == 0 and y != 0) or (x and y % x):
            return False
    return abs(det(snf.U)) == 1 and abs(det(snf.V)) == 1


@dataclass(frozen=True)
class Abelianization:
    matrix: tuple
    smith: SmithDecomposition
    ngens: int

    @property
    def invariant_factors(self) -> tuple:
        """Non-unit invariant factors; 0 marks a free Z summand."""
        diag = list(self.smith.diagonal) + [0] * (self.ngens - len(self.smith.diagonal))
        return tuple(d for d in diag if d != 1)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> tuple:
        return tuple(d for d in self.invariant_factors if d != 0)


def relation_matrix(pres: Presentation) -> list:
    return [exponent_sums(r, pres.ngens) for r in pres.relators]


def abelianize(pres: Presentation) -> Abelianization:
    m = relation_matrix(pres)
    return Abelianization(tuple(map(tuple, m)), smith_normal_form(m, pres.ngens), pres.ngens)


class NotMember:
    def __repr__(self):
        return "NotMember"

    def __bool__(self):
        return False


NOT_MEMBER = NotMember()


def lattice_membership(basis: Sequence[Sequence[int]], v: Sequence[int]):
    """Integer coordinates c with sum c_i basis_i == v, or ``NOT_MEMBER``."""
    dim = len(v)
    if any(len(b) != dim for b in basis):
        raise ValueError("dimension mismatch")
    k = len(basis)
    if k == 0:
        return () if all(x == 0 for x in v) else NOT_MEMBER
    # columns of B are the basis vectors: B c = v
    b = [[basis[j][i] for j in range(k)] for i in range(dim)]
    if dim == 0:
        return tuple([0] * k)
    snf = smith_normal_form(b)
    y = [sum(snf.U[i][j] * v[j] for j in range(dim)) for i in range(dim)]
    diag = snf.diagonal
    sol = [0] * k
    for i in range(dim):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if y[i] != 0:
                return NOT_MEMBER
        else:
            if y[i] % d:
                return NOT_MEMBER
            sol[i] = y[i] // d
    c = tuple(sum(snf.V[i][j] * sol[j] for j in range(k)) for i in range(k))
    return c


def integer_kernel(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> list:
    """Basis of {x : M x = 0} over Z; first nonzero entry of each vector is positive."""
    ncols = len(m[0]) if m else (cols or 0)
    snf = smith_normal_form(m, ncols)
    r = snf.rank
    out = []
    for j in range(r, ncols):
        vec = [snf.V[i][j] for i in range(ncols)]
        first = next(x for x in vec if x)
        if first < 0:
            vec = [-x for x in vec]
        out.append(tuple(vec))
    return out


def lattice_intersection(
    b1: Sequence[Sequence[int]], b2: Sequence[Sequence[int]], relations: Sequence[Sequence[int]] = ()
) -> list:
    """Coefficient vectors c (over ``b1``) spanning (L1 + Rel) ∩ (L2 + Rel)."""
    b1, b2, relations = list(b1), list(b2), list(relations)
    if not b1:
        return []
    dim = len(b1[0])
    gens = b1 + [[-x for x in w] for w in b2] + relations
    m = [[g[i] for g in gens] for i in range(dim)]
    ker = integer_kernel(m, len(gens))
    out = []
    for vec in ker:
        c = tuple(vec[: len(b1)])
        if any(c) and c not in out:
            out.append(c)
    return out


def gcd_all(values) -> int:
    g = 0
    for x in values:
        g = gcd(g, x)
    return g
