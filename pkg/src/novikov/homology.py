"""Smith normal form over Z and Betti numbers over Q and Q(z)."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, EmbeddingError, UnsupportedOperationError
from .linalg import rank
from .matrix import Matrix
from .rings import INTEGERS, ZZ, RationalFunctionField


@dataclass
class SmithResult:
    """Nonzero elementary divisors d1 | d2 | ... with U M V = diag when transforms are kept."""

    divisors: tuple
    U: Matrix | None = None
    V: Matrix | None = None
    shape: tuple = (0, 0)

    def diagonal(self) -> Matrix:
        n, m = self.shape
        rows = [[0] * m for _ in range(n)]
        for i, d in enumerate(self.divisors):
            rows[i][i] = d
        return Matrix(ZZ, rows, n, m)


def smith_normal_form(M: Matrix, transforms: bool = False) -> SmithResult:
    if getattr(M.ring, "kind", None) != INTEGERS:
        raise DomainError("Smith normal form needs an integer matrix")
    n, m = M.shape
    a = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row dst += f * row src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for r in a:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    t = 0
    while t < min(n, m):
        nz = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, m) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, n):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, m):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                            if a[i][j] % a[t][t]), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    divisors = tuple(a[i][i] for i in range(min(n, m)) if a[i][i])
    if not transforms:
        return SmithResult(divisors, shape=(n, m))
    return SmithResult(divisors, Matrix(ZZ, U, n, n), Matrix(ZZ, V, m, m), (n, m))


@dataclass
class BettiTable:
    ranks: tuple
    field: object = None

    def __getitem__(self, i):
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0

    def __eq__(self, other):
        if isinstance(other, BettiTable):
            other = other.ranks
        a, b = list(self.ranks), list(other)
        while a and a[-1] == 0:
            a.pop()
        while b and b[-1] == 0:
            b.pop()
        return a == b

    def euler(self) -> int:
        return sum((-1) ** i * r for i, r in enumerate(self.ranks))


def betti(C) -> BettiTable:
    R = C.ring
    if not R.field:
        raise DomainError(f"Betti numbers need a field, got {R}")
    ranks_d = {i: rank(C.d(i)) for i in range(1, C.top + 2)}
    out = tuple(C.rank(i) - ranks_d.get(i, 0) - ranks_d.get(i + 1, 0) for i in C.degrees())
    return BettiTable(out, R)


def compare_cone_coker(phi, splitting=None) -> bool:
    """Do the cone and the cokernel of an embedding have the same Betti numbers?"""
    from .chain import cokernel, mapping_cone
    if not phi.ring.field:
        raise DomainError("compare_cone_coker works over Q or Q(z)")
    cok = cokernel(phi, splitting)
    return betti(mapping_cone(phi)) == betti(cok.complex)


def novikov_betti(fd) -> BettiTable:
    """Ranks of the homology of the deformed complex over Q(z)."""
    from .novikov import exact_deformed_complex
    if not fd.ring.is_identity_alpha or fd.ring.kind not in ("Integers", "Rationals"):
        raise UnsupportedOperationError("Novikov Betti numbers need Z or Q with alpha = id")
    return betti(exact_deformed_complex(fd))


__all__ = ["SmithResult", "smith_normal_form", "BettiTable", "betti", "compare_cone_coker",
           "novikov_betti", "EmbeddingError", "RationalFunctionField"]
