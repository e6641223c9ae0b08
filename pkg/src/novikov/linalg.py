"""Determinants, inverses and ranks.

Fields use Gaussian elimination, the integers use fraction-free Bareiss
elimination, and the remaining commutative rings use the division-free
Berkowitz algorithm.  Inverses over truncated series go through the
augmentation: M = M0 + N with N divisible by z gives
M^-1 = sum_j (-M0^-1 N)^j M0^-1.
"""

from __future__ import annotations

from .errors import DomainError, ShapeError, UnsupportedOperationError
from .matrix import Matrix
from .rings import INTEGERS, NovikovSeries, SeriesRing, TwistedRing


def _require_square(M):
    if M.nrows != M.ncols:
        raise ShapeError(f"expected a square matrix, got {M.shape}")


def _require_commutative(M):
    if not M.ring.commutative:
        raise UnsupportedOperationError(
            "determinants over a twisted ring (alpha != id) are not supported")


def _is_integers(ring):
    return getattr(ring, "kind", None) == INTEGERS


def berkowitz(M: Matrix):
    """Coefficients [1, c1, ..., cn] of det(x - M) = x^n + c1 x^(n-1) + ... + cn."""
    _require_square(M)
    R = M.ring
    one, zero = R.one, R.zero
    rows = [list(r) for r in M.rows]
    n = len(rows)
    vec = [one]
    # grow from the bottom-right corner outwards
    for start in range(n - 1, -1, -1):
        a = rows[start][start]
        Rrow = rows[start][start + 1:]
        C = [rows[i][start] for i in range(start + 1, n)]
        sub = [r[start + 1:] for r in rows[start + 1:]]
        diags = [one, -a]
        v = C
        for _ in range(n - start - 1):
            s = zero
            for x, y in zip(Rrow, v):
                if x and y:
                    s = s + x * y
            diags.append(-s)
            v = [sum((x * y for x, y in zip(srow, v) if x and y), zero) for srow in sub]
        m = len(vec)
        new = []
        for i in range(m + 1):
            acc = zero
            for j in range(min(i + 1, m)):
                d = diags[i - j]
                if d and vec[j]:
                    acc = acc + d * vec[j]
            new.append(acc)
        vec = new
    return vec


def _bareiss(M: Matrix):
    a = [list(r) for r in M.rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if not a[k][k]:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def _gauss_det(M: Matrix):
    R = M.ring
    a = [list(r) for r in M.rows]
    n = len(a)
    det = R.one
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return R.zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        p = a[k][k]
        det = det * p
        inv = R.inverse(p)
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                a[i] = a[i][:k + 1] + [x - f * y for x, y in zip(a[i][k + 1:], a[k][k + 1:])]
    return det


def determinant(M: Matrix):
    """Exact determinant over a commutative ring."""
    _require_square(M)
    _require_commutative(M)
    R = M.ring
    if M.nrows == 0:
        return R.one
    if _is_integers(R):
        return _bareiss(M)
    if R.field:
        return _gauss_det(M)
    c = berkowitz(M)
    return c[-1] if M.nrows % 2 == 0 else -c[-1]


def adjugate(M: Matrix) -> Matrix:
    """adj(M) = (-1)^(n-1) (M^(n-1) + c1 M^(n-2) + ... + c_(n-1))."""
    _require_square(M)
    _require_commutative(M)
    R = M.ring
    n = M.nrows
    if n == 0:
        return M
    c = berkowitz(M)
    acc = Matrix.identity(R, n)
    for k in range(1, n):
        acc = M @ acc + Matrix.scalar(R, n, c[k])
    return acc if (n - 1) % 2 == 0 else -acc


def _gauss_jordan_inverse(M: Matrix) -> Matrix:
    R = M.ring
    n = M.nrows
    a = [list(r) + [R.one if i == j else R.zero for j in range(n)] for i, r in enumerate(M.rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise DomainError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = R.inverse(a[k][k])
        a[k] = [inv * x for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return Matrix._raw(R, tuple(tuple(r[n:]) for r in a), n, n)


def augmentation(M: Matrix) -> Matrix:
    """Entrywise z -> 0 over the ground ring; negative z-powers are an error."""
    R = M.ring
    return M.map(R.augment, R.ground)


def _series_inverse(M: Matrix) -> Matrix:
    R = M.ring
    n = M.nrows
    M0 = augmentation(M)
    M0inv = inverse(M0)
    M0s = M0inv.change_ring(R)
    N = M - M0.change_ring(R)
    X = -(M0s @ N)
    K = max([R.order] + [x.order for _, _, x in M.entries()])
    term = M0s
    total = M0s
    for _ in range(K + 1):
        term = X @ term
        if term.is_zero():
            break
        total = total + term
    return total


def inverse(M: Matrix) -> Matrix:
    _require_square(M)
    R = M.ring
    if M.nrows == 0:
        return M
    if R.field:
        return _gauss_jordan_inverse(M)
    if isinstance(R, SeriesRing):
        return _series_inverse(M)
    _require_commutative(M)
    det = determinant(M)
    if not R.is_unit(det):
        raise DomainError(f"determinant {R.render(det)} is not a unit")
    return adjugate(M).rscale(R.inverse(det))


def is_invertible(M: Matrix) -> bool:
    """Invertibility test for each ring: units of A, nonzero over fields,
    and the augmentation criterion over A_alpha[z] and its completion."""
    _require_square(M)
    R = M.ring
    if M.nrows == 0:
        return True
    if isinstance(R, (SeriesRing, TwistedRing)):
        if isinstance(R, TwistedRing) and any(x.terms and min(x.terms) < 0 for _, _, x in M.entries()):
            # over A_alpha[z, z^-1] only the polynomial part of the criterion is available
            if R.commutative:
                return R.is_unit(determinant(M))
            raise DomainError("negative z-powers: the augmentation criterion does not apply")
        return is_invertible(augmentation(M))
    if R.field:
        return rank(M) == M.nrows
    return R.is_unit(determinant(M))


def row_echelon(M: Matrix):
    """Reduced row echelon form over a field; returns (rows, pivot columns)."""
    R = M.ring
    if not R.field:
        raise DomainError("row reduction needs a field")
    a = [list(r) for r in M.rows]
    pivots = []
    r = 0
    for c in range(M.ncols):
        piv = next((i for i in range(r, M.nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = R.inverse(a[r][c])
        a[r] = [inv * x for x in a[r]]
        for i in range(M.nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == M.nrows:
            break
    return a, pivots


def rank(M: Matrix) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return len(row_echelon(M)[1])


def independent_rows(M: Matrix):
    """Indices of a maximal set of linearly independent rows (first-come)."""
    return row_echelon(M.transpose())[1]


def series_matrix(M: Matrix, K: int) -> Matrix:
    """Coerce a matrix over A, A_alpha[z,z^-1] or Q(z) into series of order K."""
    R = M.ring
    S = SeriesRing(R.ground, K)
    if isinstance(R, SeriesRing):
        return M.map(lambda x: x.truncate(K) if x.order > K else x, S)
    return M.map(lambda x: S.coerce(x) if not hasattr(x, "to_series") else x.to_series(K), S)


__all__ = [
    "berkowitz", "determinant", "adjugate", "inverse", "is_invertible",
    "augmentation", "row_echelon", "rank", "independent_rows", "series_matrix",
    "NovikovSeries",
]
