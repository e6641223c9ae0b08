"""The deformed complex F^ with d = d_F + z h_F (1 - z h_D)^-1 c, its torsion,
and its relation to the mapping cone of g - z h.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chain import (BasedComplex, ChainIsotopy, ChainMap, cokernel_block, cone_projection,
                    iso_from_isotopy, mapping_cone)
from .errors import DomainError, HomotopyError, InvariantBreach, UnsupportedOperationError
from .fundamental import FundamentalDomain, require_valid, truncated_union
from .linalg import adjugate, augmentation, berkowitz, determinant, inverse, is_invertible
from .matrix import Matrix
from .rings import (INTEGERS, RATIONALS, GroundRing, NovikovSeries, RationalFunction,
                    RationalFunctionField, SeriesRing, TwistedRing)


def _exact_available(ring: GroundRing) -> bool:
    return ring.kind in (INTEGERS, RATIONALS)


def series_geometric_inverse(h: Matrix, ring: GroundRing, K: int) -> Matrix:
    """(1 - z h)^-1 mod z^(K+1) via (z h)^j = z^j T_j, T_j = alpha^(j-1)(h) T_(j-1)."""
    if h.nrows != h.ncols:
        raise DomainError("h must be square")
    if h.ring != ring:
        raise DomainError(f"h lives over {h.ring}, expected {ring}")
    n = h.nrows
    powers = [Matrix.identity(ring, n)]
    for j in range(1, K + 1):
        powers.append(h.alpha(j - 1) @ powers[-1])
    S = SeriesRing(ring, K)
    rows = tuple(tuple(NovikovSeries.make(ring, 0, [T[a, b] for T in powers], K) for b in range(n))
                 for a in range(n))
    return Matrix._raw(S, rows, n, n)


def _z_times(M: Matrix, S: SeriesRing) -> Matrix:
    """z*M as a series matrix (M over A)."""
    K = S.order
    return M.map(lambda a: NovikovSeries.make(S.ground, 1, [a], K), S)


def deformed_series(fd: FundamentalDomain, K: int) -> BasedComplex:
    """F^ over A_alpha((z)) truncated at order K."""
    A = fd.ring
    S = SeriesRing(A, K)
    diffs = {}
    for i in range(1, fd.top + 1):
        G = series_geometric_inverse(fd.hD(i - 1), A, K)
        zhF = _z_times(fd.hF(i - 1), S)
        diffs[i] = fd.F.d(i).change_ring(S) + zhF @ G @ fd.cmat(i).change_ring(S)
    return BasedComplex(S, fd.F.ranks, diffs, fd.F.labels, check=False)


def exact_deformed_complex(fd: FundamentalDomain) -> BasedComplex:
    """F^ over Q(z): d = (delta d_F + z h_F adj(1 - z h_D) c) / delta, delta = det(1 - z h_D)."""
    A = fd.ring
    if not (_exact_available(A) and A.is_identity_alpha):
        raise UnsupportedOperationError("exact rational form needs A = Z or Q with alpha = id")
    T = TwistedRing(A)
    Q = RationalFunctionField(A)
    z = T.z
    diffs = {}
    for i in range(1, fd.top + 1):
        hD = fd.hD(i - 1).change_ring(T)
        M = Matrix.identity(T, hD.nrows) - hD.scale(z)
        delta = determinant(M)
        num = fd.F.d(i).change_ring(T).scale(delta) + fd.hF(i - 1).change_ring(T).scale(z) @ adjugate(M) @ fd.cmat(i).change_ring(T)
        den = RationalFunction.from_polynomial(delta, A)
        dinv = den.inverse()
        diffs[i] = num.map(lambda p: RationalFunction.from_polynomial(p, A) * dinv, Q)
    return BasedComplex(Q, fd.F.ranks, diffs, fd.F.labels, check=False)


class WittVector:
    """A unit power series 1 + z(...) under multiplication, known mod z^(K+1)."""

    __slots__ = ("series",)

    def __init__(self, series: NovikovSeries):
        if series.order >= 0 and series.coefficient(0) != series.ground.one:
            raise DomainError(f"{series.render()} does not have constant term 1")
        if series.low < 0:
            raise DomainError("Witt vectors have no negative powers")
        self.series = series

    @classmethod
    def one(cls, ground: GroundRing, K: int) -> "WittVector":
        return cls(SeriesRing(ground, K).one)

    @property
    def order(self):
        return self.series.order

    def coefficients(self):
        return self.series.coefficients(0)

    def __mul__(self, other):
        return WittVector(self.series * other.series)

    def inverse(self):
        return WittVector(self.series.inverse())

    def __eq__(self, other):
        if isinstance(other, WittVector):
            return self.series == other.series
        if isinstance(other, NovikovSeries):
            return self.series == other
        return NotImplemented

    def __hash__(self):
        return hash(self.series)

    def render(self):
        return self.series.render()

    __str__ = render

    def __repr__(self):
        return f"WittVector({self.render()!r})"


def torsion_witt(fd: FundamentalDomain, K: int) -> WittVector:
    """prod_i det(1 - z h_D,i)^((-1)^(i+1)) mod z^(K+1)."""
    A = fd.ring
    if not A.is_identity_alpha:
        raise UnsupportedOperationError("torsion needs a commutative ring (alpha = id)")
    T = TwistedRing(A)
    S = SeriesRing(A, K)
    acc = S.one
    for i in fd.D.degrees():
        hD = fd.hD(i).change_ring(T)
        if not hD.nrows:
            continue
        delta = determinant(Matrix.identity(T, hD.nrows) - hD.scale(T.z))
        s = S.coerce(delta)
        acc = acc * (s if i % 2 else s.inverse())
    return WittVector(acc)


@dataclass
class NovikovResult:
    fd: FundamentalDomain
    order: int
    series: BasedComplex
    exact: BasedComplex | None = None
    torsion: WittVector | None = None
    betti: object = None

    def coefficient(self, i: int, j: int) -> Matrix:
        """A-matrix of the z^j coefficient of d_i."""
        A = self.fd.ring
        return self.series.d(i).map(lambda s: s.coefficient(j), A)

    def exact_as_series(self) -> BasedComplex | None:
        if self.exact is None:
            return None
        S = self.series.ring
        return BasedComplex(S, self.exact.ranks,
                            {i: self.exact.d(i).map(lambda r: r.to_series(self.order), S)
                             for i in range(1, self.exact.top + 1)}, check=False)


def deformed_differential(fd: FundamentalDomain, K: int, with_betti: bool = True) -> NovikovResult:
    """Both forms of F^, the torsion Witt vector and (when exact) Betti numbers."""
    require_valid(fd)
    if K < 0:
        raise DomainError("order must be >= 0")
    series = deformed_series(fd, K)
    exact = torsion = betti_table = None
    A = fd.ring
    if A.is_identity_alpha:
        torsion = torsion_witt(fd, K)
        if _exact_available(A):
            exact = exact_deformed_complex(fd)
            if with_betti:
                from .homology import betti
                betti_table = betti(exact)
    return NovikovResult(fd, K, series, exact, torsion, betti_table)


# cone, cokernel and the projection between them

def _extension(fd: FundamentalDomain, K: int, exact: bool | None):
    A = fd.ring
    if exact is None:
        exact = A.is_identity_alpha and _exact_available(A)
    if exact:
        return RationalFunctionField(A)
    return SeriesRing(A, K)


def _embed(M: Matrix, R):
    return M.change_ring(R)


def _phi(fd: FundamentalDomain, R, hD=None, hF=None) -> ChainMap:
    """g - z h over the extension R."""
    hD = hD or fd.hD
    hF = hF or fd.hF
    Dt = fd.D.change_ring(R)
    Et = fd.E().change_ring(R)
    z = R.z
    maps = {}
    for i in fd.D.degrees():
        n = fd.D.rank(i)
        top = Matrix.identity(R, n) - _embed(hD(i), R).scale(z)
        bot = -(_embed(hF(i), R).scale(z))
        maps[i] = Matrix.vstack(R, [top, bot])
    return ChainMap(Dt, Et, maps, check=False)


@dataclass
class CokernelTheoremData:
    phi: ChainMap
    cone: BasedComplex
    coker: BasedComplex
    p: ChainMap
    torsion_of_p: object       # RationalFunction when exact, else None
    torsion_series: WittVector | None
    cokernel: object = None


def cokernel_theorem_data(fd: FundamentalDomain, K: int, exact: bool | None = None) -> CokernelTheoremData:
    require_valid(fd)
    R = _extension(fd, K, exact)
    phi = _phi(fd, R)
    if not phi.is_valid():
        raise InvariantBreach("g - z h is not a chain map on valid input")
    cone = mapping_cone(phi)
    cok = cokernel_block(phi)
    p = cone_projection(phi, cok)
    tors = tors_series = None
    if R.commutative:
        T = TwistedRing(fd.ring)
        prod = R.one if isinstance(R, RationalFunctionField) else None
        for i in fd.D.degrees():
            n = fd.D.rank(i)
            if not n:
                continue
            if prod is not None:
                det = determinant(phi(i).submatrix(range(n), range(n)))
                prod = prod * (det if i % 2 else det.inverse())
        tors = prod
        if fd.ring.is_identity_alpha:
            tors_series = torsion_witt(fd, K)
    return CokernelTheoremData(phi, cone, cok.complex, p, tors, tors_series, cok)


# invariance

def _as_family(data, shape_of, ring):
    items = data.items() if isinstance(data, dict) else enumerate(data or ())
    out = {}
    for i, m in items:
        if m is None:
            continue
        if not isinstance(m, Matrix):
            m = Matrix(ring, m, *shape_of(i))
        out[i] = m
    return out


def _k_family(fd, k):
    return _as_family(k, lambda i: (fd.D.rank(i + 1) + fd.F.rank(i + 1), fd.D.rank(i)), fd.ring)


def homotopy_defects(fd: FundamentalDomain, fd2: FundamentalDomain, k: dict):
    """Check h' - h = alpha(d_E) k + k d_D, k_i: D_i -> E_(i+1) = D_(i+1) + F_(i+1)."""
    out = []
    k = _k_family(fd, k)
    E = fd.E()
    for i in fd.D.degrees():
        lhs = fd2.h(i) - fd.h(i)
        rhs = E.d(i + 1).alpha(1) @ k_at(fd, k, i) + k_at(fd, k, i - 1) @ fd.D.d(i)
        if lhs != rhs:
            out.append(f"h' - h != alpha(d_E) k + k d_D in degree {i}")
    return out


def k_at(fd: FundamentalDomain, k: dict, i: int) -> Matrix:
    m = k.get(i)
    rows = fd.D.rank(i + 1) + fd.F.rank(i + 1)
    if m is None:
        return Matrix.zeros(fd.ring, rows, fd.D.rank(i))
    return m


def apply_homotopy(fd: FundamentalDomain, k: dict) -> FundamentalDomain:
    """fd with h replaced by h + alpha(d_E) k + k d_D."""
    k = _k_family(fd, k)
    E = fd.E()
    hD, hF = {}, {}
    for i in fd.D.degrees():
        new = fd.h(i) + E.d(i + 1).alpha(1) @ k_at(fd, k, i) + k_at(fd, k, i - 1) @ fd.D.d(i)
        n = fd.D.rank(i)
        hD[i] = new.submatrix(range(n), range(n))
        hF[i] = new.submatrix(range(n, new.nrows), range(n))
    return fd.with_h(hD, hF)


@dataclass
class InvarianceResult:
    r: dict
    fhat: BasedComplex
    fhat_prime: BasedComplex
    psi: ChainIsotopy
    operators: dict
    det_product: object
    r_det_product: object
    intertwines: bool
    sigma_ok: bool

    @property
    def ok(self) -> bool:
        one_ok = self.det_product is None or self.det_product == 1
        return self.intertwines and self.sigma_ok and one_ok


def invariance_iso(fd: FundamentalDomain, fd2: FundamentalDomain, k, K: int = 8,
                   exact: bool | None = None) -> InvarianceResult:
    """Chain isomorphism F^ -> F^' induced by a homotopy k: h ~ h' (twisted sense)."""
    require_valid(fd)
    require_valid(fd2)
    if fd.D != fd2.D or fd.F != fd2.F or any(fd.cmat(i) != fd2.cmat(i) for i in range(fd.top + 1)):
        raise HomotopyError("the two domains must share D, F and c")
    A = fd.ring
    k = _k_family(fd, k)
    bad = homotopy_defects(fd, fd2, k)
    if bad:
        raise HomotopyError("; ".join(bad))
    R = _extension(fd, K, exact)
    phi, phi2 = _phi(fd, R), _phi(fd2, R)
    E = phi.target
    z = R.z
    psi = {}
    for i in fd.D.degrees():
        n = fd.D.rank(i)
        theta = _embed(k_at(fd, k, i), R).scale(-z)
        phiD = phi(i).submatrix(range(n), range(n))
        left = theta @ inverse(phiD)
        psi[i] = Matrix.hstack(R, [left, Matrix.zeros(R, E.rank(i + 1), fd.F.rank(i))])
    iso = ChainIsotopy(E, psi, phi, phi2, check=False)
    breaches = iso.defects()
    if breaches:
        raise InvariantBreach("; ".join(breaches))
    ops = {i: iso.operator(i) for i in E.degrees()}
    sigma_ok = all(sigma_invertible(U) for U in ops.values())
    isos = iso_from_isotopy(iso, cokernel_block(phi), cokernel_block(phi2))
    Fh, Fh2 = isos.coker.complex, isos.coker_prime.complex
    r = {i: isos.r(i) for i in Fh.degrees()}
    inter = all(r[i - 1] @ Fh.d(i) == Fh2.d(i) @ r[i] for i in range(1, Fh.top + 1))
    det_prod = r_det = None
    if isinstance(R, RationalFunctionField):
        det_prod = R.one
        r_det = R.one
        for i, U in ops.items():
            d = determinant(U)
            det_prod = det_prod * (d if i % 2 == 0 else d.inverse())
        for i, m in r.items():
            if m.nrows:
                d = determinant(m)
                r_det = r_det * (d if i % 2 == 0 else d.inverse())
    return InvarianceResult(r, Fh, Fh2, iso, ops, det_prod, r_det, inter, sigma_ok)


def is_simple_unit(x) -> bool:
    """Is x = +-z^j (times a unit of A)?"""
    if isinstance(x, RationalFunction):
        return len(x.num) == 1 and x.den == (1,) and abs(x.num[0]) == 1
    return False


def sigma_invertible(M: Matrix) -> bool:
    """Is the augmentation z -> 0 of M invertible over A?"""
    R = M.ring
    if M.nrows != M.ncols:
        raise DomainError("sigma_invertible needs a square matrix")
    if M.nrows == 0:
        return True
    if isinstance(R, RationalFunctionField):
        aug = M.map(lambda r: R.base.coerce(r.augment()), R.base)
    elif isinstance(R, (TwistedRing, SeriesRing)):
        aug = augmentation(M)
    else:
        aug = M
    return is_invertible(aug)


# truncation tower

@dataclass
class TowerReport:
    kmax: int
    discrepancies: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def __str__(self):
        return "ok" if self.ok else "\n".join(self.discrepancies)


def tower_check(fd: FundamentalDomain, kmax: int) -> TowerReport:
    """Compare the band matrices of the truncated unions with the z-expansion of d^."""
    require_valid(fd)
    rep = TowerReport(kmax)
    series = deformed_series(fd, kmax)
    coeff = {(i, j): series.d(i).map(lambda s: s.coefficient(j), fd.ring)
             for i in range(1, fd.top + 1) for j in range(kmax + 1)}
    prev = None
    for k in range(kmax + 1):
        U = truncated_union(fd, k)
        if not U.is_valid():
            rep.discrepancies.append(f"k={k}: band differential does not square to zero")
        for i in range(1, fd.top + 1):
            a, b = fd.F.rank(i - 1), fd.F.rank(i)
            d = U.d(i)
            for r in range(k + 1):
                for s in range(k + 1):
                    blk = d.submatrix(range(r * a, (r + 1) * a), range(s * b, (s + 1) * b))
                    if s < r:
                        ok = blk.is_zero()
                    else:
                        ok = blk.alpha(s) == coeff[(i, s - r)]
                    if not ok:
                        rep.discrepancies.append(f"k={k}, degree {i}: block ({r}, {s}) differs from z^{s - r}")
            if prev is not None:
                pd = prev.d(i)
                sub = d.submatrix(range(k * a), range(k * b))
                if sub != pd:
                    rep.discrepancies.append(f"k={k}, degree {i}: first {k} copies differ from k={k - 1}")
        prev = U
    return rep




def _series_iso(M: Matrix, S: SeriesRing) -> Matrix:
    return M.map(S.coerce, S)


def _agree(X: Matrix, Y: Matrix) -> bool:
    """Entrywise equality up to the smaller known order."""
    if X.shape != Y.shape:
        return False
    for (_, _, a), (_, _, b) in zip(X.entries(), Y.entries()):
        K = min(a.order, b.order)
        if a.truncate(K) != b.truncate(K):
            return False
    return True


def exchange_check(ex, K: int) -> list:
    """Degrees where I d^ != d^' I for the two cuts of an exchange."""
    S = SeriesRing(ex.fd.ring, K)
    F1, F2 = deformed_series(ex.fd, K), deformed_series(ex.fd_prime, K)
    bad = []
    for i in range(1, max(F1.top, F2.top) + 1):
        lhs = _series_iso(ex.iso[i - 1], S) @ F1.d(i)
        rhs = F2.d(i) @ _series_iso(ex.iso[i], S)
        if not _agree(lhs, rhs):
            bad.append(f"I d^ != d^' I in degree {i}")
    return bad


__all__ = [
    "series_geometric_inverse", "deformed_series", "exact_deformed_complex", "WittVector", "torsion_witt",
    "NovikovResult", "deformed_differential", "CokernelTheoremData", "cokernel_theorem_data",
    "homotopy_defects", "apply_homotopy", "InvarianceResult", "invariance_iso", "sigma_invertible",
    "is_simple_unit", "TowerReport", "tower_check", "exchange_check",
]
