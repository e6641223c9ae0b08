"""Based chain complexes, chain maps, homotopies, isotopies, mapping cones
and cokernels of split embeddings.

Sign conventions (fixed once here and used everywhere):

* cone(phi)_i = E_i + D_(i-1) with d = [[d_E, (-1)^(i-1) phi], [0, d_D]];
* a homotopy theta: phi ~ phi' satisfies phi' - phi = d theta + theta d;
* the cone isomorphism of a homotopy is [[1, (-1)^i theta], [0, 1]] in degree i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmbeddingError, IsotopyError, ShapeError
from .linalg import independent_rows, inverse, is_invertible
from .matrix import Matrix
from .rings import INTEGERS


def _sign(i: int) -> int:
    return -1 if i % 2 else 1


class BasedComplex:
    """Free complex C_0 <- C_1 <- ... <- C_m with chosen bases."""

    __slots__ = ("ring", "ranks", "_d", "labels")

    def __init__(self, ring, ranks, differentials=None, labels=None, check: bool = True):
        self.ring = ring
        self.ranks = tuple(int(r) for r in ranks)
        d = {}
        items = differentials.items() if isinstance(differentials, dict) else \
            enumerate(differentials or ())
        for i, m in items:
            if m is not None and not isinstance(m, Matrix):
                m = Matrix(ring, m, self.rank(i - 1), self.rank(i)) if 1 <= i <= self.top else None
            if m is None or not (1 <= i <= self.top):
                if m is not None and (m.nrows or m.ncols) and not m.is_zero():
                    raise ShapeError(f"differential in degree {i} lies outside [1, {self.top}]")
                continue
            if m.shape != (self.rank(i - 1), self.rank(i)):
                raise ShapeError(f"d_{i} has shape {m.shape}, expected {(self.rank(i - 1), self.rank(i))}")
            if m.ring != ring:
                m = m.change_ring(ring)
            d[i] = m
        self._d = d
        self.labels = tuple(tuple(l) for l in labels) if labels else None
        if check:
            bad = self.defects()
            if bad:
                raise ShapeError("; ".join(bad))

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def rank(self, i: int) -> int:
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0

    def d(self, i: int) -> Matrix:
        m = self._d.get(i)
        if m is None:
            return Matrix.zeros(self.ring, self.rank(i - 1), self.rank(i))
        return m

    def degrees(self):
        return range(0, self.top + 1)

    def label(self, i: int):
        if self.labels and 0 <= i < len(self.labels):
            return self.labels[i]
        return tuple(f"e{i}_{k}" for k in range(self.rank(i)))

    def defects(self):
        """Degrees where d_(i-1) d_i != 0."""
        out = []
        for i in range(2, self.top + 1):
            prod = self.d(i - 1) @ self.d(i)
            if not prod.is_zero():
                out.extend(f"d_{i - 1} d_{i} != 0 at entry ({r}, {c})"
                           for r, c, x in prod.entries() if x)
        return out

    def is_valid(self) -> bool:
        return not self.defects()

    def map(self, f, ring) -> "BasedComplex":
        return BasedComplex(ring, self.ranks, {i: m.map(f, ring) for i, m in self._d.items()},
                            self.labels, check=False)

    def change_ring(self, ring) -> "BasedComplex":
        return self.map(ring.coerce, ring)

    def alpha(self, power: int = 1) -> "BasedComplex":
        return BasedComplex(self.ring, self.ranks, {i: m.alpha(power) for i, m in self._d.items()},
                            self.labels, check=False)

    def __eq__(self, other):
        if not isinstance(other, BasedComplex):
            return NotImplemented
        n = max(self.top, other.top)
        return (self.ring == other.ring
                and all(self.rank(i) == other.rank(i) for i in range(n + 1))
                and all(self.d(i) == other.d(i) for i in range(1, n + 1)))

    def __hash__(self):
        return hash(self.ranks)

    def __repr__(self):
        return f"BasedComplex(ranks={self.ranks})"

    @classmethod
    def zero(cls, ring, top: int = -1) -> "BasedComplex":
        return cls(ring, [0] * (top + 1))


class ChainMap:
    """Degreewise matrices f_i: source_i -> target_i."""

    __slots__ = ("source", "target", "_f", "inverse")

    def __init__(self, source: BasedComplex, target: BasedComplex, maps, check: bool = True, inverse=None):
        self.source = source
        self.target = target
        items = maps.items() if isinstance(maps, dict) else enumerate(maps)
        f = {}
        for i, m in items:
            if m is None:
                continue
            if m.shape != (target.rank(i), source.rank(i)):
                raise ShapeError(f"map in degree {i} has shape {m.shape}, expected "
                                 f"{(target.rank(i), source.rank(i))}")
            f[i] = m
        self._f = f
        self.inverse = inverse
        if check:
            bad = self.defects()
            if bad:
                raise ShapeError("; ".join(bad))

    @property
    def ring(self):
        return self.target.ring

    @property
    def top(self):
        return max(self.source.top, self.target.top)

    def __call__(self, i: int) -> Matrix:
        m = self._f.get(i)
        if m is None:
            return Matrix.zeros(self.ring, self.target.rank(i), self.source.rank(i))
        return m

    def defects(self):
        out = []
        for i in range(1, self.top + 1):
            lhs = self.target.d(i) @ self(i)
            rhs = self(i - 1) @ self.source.d(i)
            if lhs != rhs:
                out.append(f"chain map square fails in degree {i}")
        return out

    def is_valid(self) -> bool:
        return not self.defects()

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        return ChainMap(other.source, self.target,
                        {i: self(i) @ other(i) for i in range(self.top + 1)}, check=False)

    def __sub__(self, other):
        return ChainMap(self.source, self.target,
                        {i: self(i) - other(i) for i in range(self.top + 1)}, check=False)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        n = max(self.top, other.top)
        return all(self(i) == other(i) for i in range(n + 1))

    def __hash__(self):
        return id(self)

    @classmethod
    def identity(cls, C: BasedComplex) -> "ChainMap":
        return cls(C, C, {i: Matrix.identity(C.ring, C.rank(i)) for i in C.degrees()}, check=False)


class ChainHomotopy:
    """theta_i: D_i -> E_(i+1) with phi' - phi = d_E theta + theta d_D."""

    __slots__ = ("phi", "phi_prime", "_t")

    def __init__(self, phi: ChainMap, phi_prime: ChainMap, theta, check: bool = True):
        self.phi = phi
        self.phi_prime = phi_prime
        items = theta.items() if isinstance(theta, dict) else enumerate(theta)
        self._t = {}
        for i, m in items:
            if m is None:
                continue
            if m.shape != (phi.target.rank(i + 1), phi.source.rank(i)):
                raise ShapeError(f"homotopy in degree {i} has shape {m.shape}")
            self._t[i] = m
        if check:
            bad = self.defects()
            if bad:
                raise ShapeError("; ".join(bad))

    def __call__(self, i: int) -> Matrix:
        m = self._t.get(i)
        if m is None:
            return Matrix.zeros(self.phi.ring, self.phi.target.rank(i + 1), self.phi.source.rank(i))
        return m

    def defects(self):
        D, E = self.phi.source, self.phi.target
        out = []
        for i in range(0, self.phi.top + 1):
            lhs = self.phi_prime(i) - self.phi(i)
            rhs = E.d(i + 1) @ self(i) + self(i - 1) @ D.d(i)
            if lhs != rhs:
                out.append(f"homotopy identity fails in degree {i}")
        return out


class ChainIsotopy:
    """psi_i: E_i -> E_(i+1) with phi' = (1 + d psi + psi d) phi, all operators invertible."""

    __slots__ = ("carrier", "phi", "phi_prime", "_psi")

    def __init__(self, carrier: BasedComplex, psi, phi: ChainMap, phi_prime: ChainMap, check: bool = True):
        self.carrier = carrier
        self.phi = phi
        self.phi_prime = phi_prime
        items = psi.items() if isinstance(psi, dict) else enumerate(psi)
        self._psi = {}
        for i, m in items:
            if m is None:
                continue
            if m.shape != (carrier.rank(i + 1), carrier.rank(i)):
                raise ShapeError(f"isotopy in degree {i} has shape {m.shape}")
            self._psi[i] = m
        if check:
            bad = self.defects()
            if bad:
                raise IsotopyError("; ".join(bad))

    def __call__(self, i: int) -> Matrix:
        m = self._psi.get(i)
        if m is None:
            return Matrix.zeros(self.carrier.ring, self.carrier.rank(i + 1), self.carrier.rank(i))
        return m

    def operator(self, i: int) -> Matrix:
        E = self.carrier
        return Matrix.identity(E.ring, E.rank(i)) + E.d(i + 1) @ self(i) + self(i - 1) @ E.d(i)

    def defects(self):
        out = []
        for i in self.carrier.degrees():
            U = self.operator(i)
            if not is_invertible(U):
                out.append(f"1 + d psi + psi d is not invertible in degree {i}")
            if U @ self.phi(i) != self.phi_prime(i):
                out.append(f"phi' != (1 + d psi + psi d) phi in degree {i}")
        return out


# mapping cones

def mapping_cone(phi: ChainMap) -> BasedComplex:
    D, E = phi.source, phi.target
    R = phi.ring
    top = max(E.top, D.top + 1)
    ranks = [E.rank(i) + D.rank(i - 1) for i in range(top + 1)]
    diffs = {}
    for i in range(1, top + 1):
        diffs[i] = Matrix.block(R, [
            [E.d(i), phi(i - 1).scale(_sign(i - 1))],
            [Matrix.zeros(R, D.rank(i - 2), E.rank(i)), D.d(i - 1)],
        ])
    labels = [tuple(E.label(i)) + tuple(D.label(i - 1)) for i in range(top + 1)]
    return BasedComplex(R, ranks, diffs, labels, check=False)


@dataclass
class Cokernel:
    """Direct-sum system for a degreewise split embedding phi: D -> E.

    e phi = 1, j phi = 0, j k = 1, e k = 0 and phi e + k j = 1.
    """

    phi: ChainMap
    complex: BasedComplex
    e: dict = field(default_factory=dict)
    j: dict = field(default_factory=dict)
    k: dict = field(default_factory=dict)

    def projection(self) -> "ChainMap":
        """E -> coker."""
        return ChainMap(self.phi.target, self.complex, self.j, check=False)


def _split_over_field(f: Matrix):
    R = f.ring
    n, r = f.shape
    P = independent_rows(f) if r else []
    if len(P) != r:
        return None
    Q = [i for i in range(n) if i not in P]
    fP_inv = inverse(f.submatrix(P, range(r)))
    e_rows = [[R.zero] * n for _ in range(r)]
    for a in range(r):
        for b, p in enumerate(P):
            e_rows[a][p] = fP_inv[a, b]
    e = Matrix._raw(R, tuple(map(tuple, e_rows)), r, n)
    fQ = f.submatrix(Q, range(r))
    corr = -(fQ @ fP_inv)
    j_rows = [[R.zero] * n for _ in range(len(Q))]
    for a, q in enumerate(Q):
        j_rows[a][q] = R.one
        for b, p in enumerate(P):
            j_rows[a][p] = corr[a, b]
    j = Matrix._raw(R, tuple(map(tuple, j_rows)), len(Q), n)
    k = Matrix.identity(R, n).submatrix(range(n), Q)
    return e, j, k


def _split_over_integers(f: Matrix):
    from .homology import smith_normal_form
    n, r = f.shape
    snf = smith_normal_form(f, transforms=True)
    if len(snf.divisors) != r or any(abs(s) != 1 for s in snf.divisors):
        return None
    U, V = snf.U, snf.V
    Uinv = inverse(U)
    R = f.ring
    Sinv = Matrix.diagonal(R, snf.divisors)  # entries are +-1, self-inverse
    top = Matrix.identity(R, n).submatrix(range(r), range(n))
    bottom = Matrix.identity(R, n).submatrix(range(r, n), range(n))
    e = V @ Sinv @ top @ U
    j = bottom @ U
    k = Uinv @ bottom.transpose()
    return e, j, k


def split_embedding(f: Matrix, degree: int | None = None):
    """(e, j, k) for a split injection f, or EmbeddingError."""
    R = f.ring
    where = f" in degree {degree}" if degree is not None else ""
    if f.ncols == 0:
        I = Matrix.identity(R, f.nrows)
        return Matrix.zeros(R, 0, f.nrows), I, I
    if R.field:
        out = _split_over_field(f)
    elif getattr(R, "kind", None) == INTEGERS:
        out = _split_over_integers(f)
    else:
        raise EmbeddingError(f"cannot decide split injectivity over {R}{where}; use cokernel_block")
    if out is None:
        raise EmbeddingError(f"map is not a split injection{where}")
    return out


def cokernel(phi: ChainMap, splitting=None) -> Cokernel:
    D, E = phi.source, phi.target
    R = phi.ring
    top = max(E.top, D.top)
    e, j, k = {}, {}, {}
    for i in range(top + 1):
        if splitting is not None:
            e[i], j[i], k[i] = splitting[i]
        else:
            e[i], j[i], k[i] = split_embedding(phi(i), i)
    ranks = [k[i].ncols for i in range(top + 1)]
    diffs = {i: j[i - 1] @ E.d(i) @ k[i] for i in range(1, top + 1)}
    return Cokernel(phi, BasedComplex(R, ranks, diffs, check=False), e, j, k)


def cone_projection(phi: ChainMap, splitting=None) -> ChainMap:
    """p: cone(phi) -> coker(phi), p(x, y) = [x]."""
    cok = splitting if isinstance(splitting, Cokernel) else cokernel(phi, splitting)
    cone = mapping_cone(phi)
    R = phi.ring
    D = phi.source
    maps = {i: Matrix.hstack(R, [cok.j[i] if i in cok.j else Matrix.zeros(R, 0, phi.target.rank(i)),
                                 Matrix.zeros(R, cok.complex.rank(i), D.rank(i - 1))])
            for i in cone.degrees()}
    return ChainMap(cone, cok.complex, maps, check=False)


def cokernel_block(phi: ChainMap) -> Cokernel:
    """Cokernel of phi = (phi_D; phi_F): D -> E = D + F with d_E upper block triangular.

    The cokernel is F with d = d_F - phi_F phi_D^-1 c, identified through
    j = (-phi_F phi_D^-1, 1) and k = (0; 1).
    """
    D, E = phi.source, phi.target
    R = phi.ring
    top = max(E.top, D.top)
    fr = [E.rank(i) - D.rank(i) for i in range(top + 1)]
    if any(r < 0 for r in fr):
        raise ShapeError("target is smaller than source")
    e, j, k, pinv = {}, {}, {}, {}
    for i in range(top + 1):
        di = D.rank(i)
        f = phi(i)
        fD = f.submatrix(range(di), range(di))
        fF = f.submatrix(range(di, E.rank(i)), range(di))
        if di and not is_invertible(fD):
            raise EmbeddingError(f"phi_D is not invertible in degree {i}: its augmentation is singular")
        inv = inverse(fD)
        pinv[i] = inv
        e[i] = Matrix.hstack(R, [inv, Matrix.zeros(R, di, fr[i])])
        j[i] = Matrix.hstack(R, [-(fF @ inv), Matrix.identity(R, fr[i])])
        k[i] = Matrix.vstack(R, [Matrix.zeros(R, di, fr[i]), Matrix.identity(R, fr[i])])
    diffs = {}
    for i in range(1, top + 1):
        dE = E.d(i)
        lower_left = dE.submatrix(range(D.rank(i - 1), E.rank(i - 1)), range(D.rank(i)))
        if not lower_left.is_zero():
            raise ShapeError(f"d_E is not upper block triangular in degree {i}")
        c = dE.submatrix(range(D.rank(i - 1)), range(D.rank(i), E.rank(i)))
        dF = dE.submatrix(range(D.rank(i - 1), E.rank(i - 1)), range(D.rank(i), E.rank(i)))
        fF = phi(i - 1).submatrix(range(D.rank(i - 1), E.rank(i - 1)), range(D.rank(i - 1)))
        diffs[i] = dF - fF @ pinv[i - 1] @ c
    labels = [E.label(i)[D.rank(i):] for i in range(top + 1)]
    return Cokernel(phi, BasedComplex(R, fr, diffs, labels, check=False), e, j, k)


# isomorphisms

def iso_from_homotopy(theta: ChainHomotopy) -> ChainMap:
    """Chain isomorphism cone(phi) -> cone(phi'), [[1, (-1)^i theta], [0, 1]]."""
    phi, phi2 = theta.phi, theta.phi_prime
    C, C2 = mapping_cone(phi), mapping_cone(phi2)
    R = phi.ring
    D, E = phi.source, phi.target

    def build(s):
        return {i: Matrix.block(R, [
            [Matrix.identity(R, E.rank(i)), theta(i - 1).scale(s * _sign(i))],
            [Matrix.zeros(R, D.rank(i - 1), E.rank(i)), Matrix.identity(R, D.rank(i - 1))],
        ]) for i in C.degrees()}

    inv = ChainMap(C2, C, build(-1), check=False)
    return ChainMap(C, C2, build(1), check=False, inverse=inv)


def isotopy_inverse(psi: ChainIsotopy) -> ChainIsotopy:
    """psi^- = -(1 + d psi + psi d)^-1 psi, an isotopy from phi' back to phi."""
    E = psi.carrier
    new = {}
    for i in E.degrees():
        U = psi.operator(i + 1)
        if not is_invertible(U):
            raise IsotopyError(f"1 + d psi + psi d is not invertible in degree {i + 1}")
        new[i] = -(inverse(U) @ psi(i))
    return ChainIsotopy(E, new, psi.phi_prime, psi.phi)


def isotopy_compose(psi: ChainIsotopy, psi2: ChainIsotopy) -> ChainIsotopy:
    """psi'' = psi + psi' (1 + d psi + psi d), an isotopy phi -> phi''."""
    if psi.carrier != psi2.carrier:
        raise IsotopyError("isotopies live on different complexes")
    if psi.phi_prime != psi2.phi:
        raise IsotopyError("isotopy endpoints do not chain")
    E = psi.carrier
    new = {i: psi(i) + psi2(i) @ psi.operator(i) for i in E.degrees()}
    return ChainIsotopy(E, new, psi.phi, psi2.phi_prime)


@dataclass
class IsotopyIsos:
    q: ChainMap
    r: ChainMap
    s: ChainHomotopy
    coker: Cokernel
    coker_prime: Cokernel


def iso_from_isotopy(psi: ChainIsotopy, splitting=None, splitting_prime=None) -> IsotopyIsos:
    """q = [[1, (-1)^i psi phi], [0, 1]] on cones, r = [1 + d psi + psi d] on
    cokernels and s(x, y) = [psi x] with r p - p' q = d s + s d."""
    phi, phi2 = psi.phi, psi.phi_prime
    R = phi.ring
    D, E = phi.source, phi.target
    cok = splitting if isinstance(splitting, Cokernel) else cokernel(phi, splitting)
    cok2 = splitting_prime if isinstance(splitting_prime, Cokernel) else cokernel(phi2, splitting_prime)
    C, C2 = mapping_cone(phi), mapping_cone(phi2)
    qm = {i: Matrix.block(R, [
        [Matrix.identity(R, E.rank(i)), (psi(i - 1) @ phi(i - 1)).scale(_sign(i))],
        [Matrix.zeros(R, D.rank(i - 1), E.rank(i)), Matrix.identity(R, D.rank(i - 1))],
    ]) for i in C.degrees()}
    q = ChainMap(C, C2, qm, check=False)
    r = ChainMap(cok.complex, cok2.complex,
                 {i: cok2.j[i] @ psi.operator(i) @ cok.k[i] for i in cok.complex.degrees()}, check=False)
    p = cone_projection(phi, cok)
    p2 = cone_projection(phi2, cok2)
    sm = {}
    for i in C.degrees():
        jn = cok2.j.get(i + 1)
        if jn is None:
            continue
        sm[i] = Matrix.hstack(R, [jn @ psi(i), Matrix.zeros(R, jn.nrows, D.rank(i - 1))])
    s = ChainHomotopy(p2.compose(q), r.compose(p), sm, check=False)
    return IsotopyIsos(q, r, s, cok, cok2)


@dataclass
class ConeCokerEquivalence:
    p: ChainMap
    g: ChainMap
    h: dict
    coker: Cokernel

    def h_at(self, i):
        return self.h[i]


def cone_coker_equivalence(phi: ChainMap, splitting=None) -> ConeCokerEquivalence:
    """p: cone -> coker with homotopy inverse g = [k; (-1)^i c] and h = [[0, 0], [(-1)^(i+1) e, 0]].

    Here c = e d_E k, so p g = 1 and g p - 1 = d h + h d.
    """
    cok = splitting if isinstance(splitting, Cokernel) else cokernel(phi, splitting)
    R = phi.ring
    D, E = phi.source, phi.target
    for i, e in cok.e.items():
        if e @ phi(i) != Matrix.identity(R, D.rank(i)):
            raise EmbeddingError(f"supplied splitting does not satisfy e phi = 1 in degree {i}")
    C = mapping_cone(phi)
    p = cone_projection(phi, cok)
    gm = {}
    for i in C.degrees():
        k = cok.k.get(i, Matrix.zeros(R, E.rank(i), 0))
        if i - 1 in cok.e:
            c = cok.e[i - 1] @ E.d(i) @ k
        else:
            c = Matrix.zeros(R, D.rank(i - 1), k.ncols)
        gm[i] = Matrix.vstack(R, [k, c.scale(_sign(i))])
    g = ChainMap(cok.complex, C, gm, check=False)
    h = {}
    for i in range(-1, C.top + 1):
        e = cok.e.get(i, Matrix.zeros(R, D.rank(i), E.rank(i)))
        h[i] = Matrix.block(R, [
            [Matrix.zeros(R, E.rank(i + 1), E.rank(i)), Matrix.zeros(R, E.rank(i + 1), D.rank(i - 1))],
            [e.scale(-_sign(i)), Matrix.zeros(R, D.rank(i), D.rank(i - 1))],
        ])
    return ConeCokerEquivalence(p, g, h, cok)
