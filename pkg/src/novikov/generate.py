"""Deterministic random scenarios.

Everything starts from a cellular complex in which each cell has at most
one face, always a cycle, so d^2 = 0 holds by construction.  The
interesting complexes are conjugates P d0 P^-1 by block upper triangular
unimodular matrices, so the D-part stays a subcomplex.  Chain maps
right -> E are built on the cellular level (cell to cell, pair to pair)
and then transported by the conjugators; twisted null-homotopic terms
alpha(d_E) m + m d are added on top.  Each draw is rejected if an entry
leaves the entry bound; after enough rejections the draw degrades to
smaller and smaller shapes so the generator always terminates.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .chain import BasedComplex
from .fundamental import CobordismPiece, FundamentalDomain
from .matrix import Matrix
from .rings import LAURENT, QQ, ZZ, GroundElement, GroundRing
from .scenario import Scenario

RINGS = {
    "Z": ZZ,
    "Q": QQ,
    "Zu": GroundRing(LAURENT, 1, [[1]], [1]),
    "Zu-twist": GroundRing(LAURENT, 1, [[-1]], [1]),
}


@dataclass(frozen=True)
class GeneratorParams:
    seed: int = 0
    max_degree: int = 3
    max_rank: int = 3
    entry_bound: int = 3
    ring: str = "Z"
    richness: int = 1      # random null-homotopic terms per degree
    homotopy: bool = False  # also draw a homotopy k for the invariance check

    def __post_init__(self):
        if not 0 <= self.max_degree <= 5:
            raise ValueError("max_degree must lie in [0, 5]")
        if not 0 <= self.max_rank <= 4:
            raise ValueError("max_rank must lie in [0, 4]")
        if not 1 <= self.entry_bound <= 3:
            raise ValueError("entry_bound must lie in [1, 3]")
        if self.ring not in RINGS:
            raise ValueError(f"ring must be one of {sorted(RINGS)}")

    @property
    def ground(self) -> GroundRing:
        return RINGS[self.ring]


class _Cells:
    """Cells (part, degree) with at most one face each, always a cycle."""

    def __init__(self, parts=("L", "F")):
        self.parts = parts
        self.cells = []
        self.face = {}

    def copy(self):
        out = _Cells(self.parts)
        out.cells = list(self.cells)
        out.face = dict(self.face)
        return out

    def add(self, part, deg):
        self.cells.append((part, deg))
        return len(self.cells) - 1

    def count(self, part, deg):
        return sum(1 for c in self.cells if c == (part, deg))

    def basis(self, deg, parts=None):
        parts = parts or self.parts
        return [k for p in parts for k, c in enumerate(self.cells) if c == (p, deg)]

    def cycles(self, deg):
        return [k for k in self.basis(deg) if k not in self.face]

    def uppers(self, deg):
        return [k for k in self.basis(deg) if k in self.face]

    def top(self):
        return max((d for _, d in self.cells), default=-1)


class _Draw:
    def __init__(self, rng: random.Random, p: GeneratorParams):
        self.rng = rng
        self.p = p
        self.A = p.ground
        self.twisted = not self.A.is_identity_alpha

    def unit(self):
        """A random unit: +-1, or +-u^e over the Laurent ring."""
        s = self.rng.choice((1, -1))
        if self.A.kind == LAURENT and self.rng.random() < 0.4:
            return self.A.monomial((self.rng.choice((1, -1)),), s)
        return self.A.coerce(s)

    def lam(self):
        """A face coefficient; it must be alpha-invariant."""
        if self.A.kind == LAURENT and not self.twisted and self.rng.random() < 0.3:
            u = self.A.variable("u")
            return self.rng.choice((u - 1, 1 - u, u + 1))
        return self.A.coerce(self.rng.choice((1, 1, 2, 3, -1, -2)))

    def bounded(self, mats) -> bool:
        b = self.p.entry_bound
        for m in mats:
            for _, _, x in m.entries():
                if isinstance(x, GroundElement):
                    if any(abs(c) > b or any(abs(e) > b for e in mono) for mono, c in x.terms.items()):
                        return False
                elif abs(x) > b:
                    return False
        return True


def _pair_scalars(A, lam, lam2, t):
    """(a, b) with lam2 * a = lam * b, kept small over Z and Q."""
    if isinstance(lam, int) and isinstance(lam2, int):
        g = math.gcd(lam, lam2) or 1
        return A.coerce(t * lam // g), A.coerce(t * lam2 // g)
    return A.coerce(t) * lam, A.coerce(t) * lam2


def _cell_count(dr: _Draw, p: GeneratorParams) -> int:
    cap = (p.max_degree + 1) * p.max_rank
    return dr.rng.randint(min(cap, max(1, cap // 3)), cap)


class _Base:
    """A complex P d0 P^-1 together with its cells and conjugator."""

    def __init__(self, cells, P, Pinv, complex_):
        self.cells, self.P, self.Pinv, self.complex = cells, P, Pinv, complex_


def _d0(A, cells: _Cells, deg, parts=None):
    src = cells.basis(deg, parts)
    tgt = cells.basis(deg - 1, parts)
    pos = {k: n for n, k in enumerate(tgt)}
    rows = [[A.zero] * len(src) for _ in tgt]
    for j, k in enumerate(src):
        if k in cells.face:
            f, lam = cells.face[k]
            rows[pos[f]][j] = lam
    return Matrix(A, rows, len(tgt), len(src))


def _conjugator(dr: _Draw, cells: _Cells, deg, fixed=None, moves=2):
    """Block upper triangular unimodular P (and P^-1) on the degree-deg cells.

    With ``fixed = (P_L, P_L^-1)`` the L-block is P_L exactly."""
    A = dr.A
    basis = cells.basis(deg)
    part = [cells.cells[k][0] for k in basis]
    n = len(basis)
    if fixed is not None:
        nl = fixed[0].nrows
        P = Matrix.block(A, [[fixed[0], Matrix.zeros(A, nl, n - nl)],
                             [Matrix.zeros(A, n - nl, nl), Matrix.identity(A, n - nl)]])
        Pinv = Matrix.block(A, [[fixed[1], Matrix.zeros(A, nl, n - nl)],
                                [Matrix.zeros(A, n - nl, nl), Matrix.identity(A, n - nl)]])
    else:
        P = Pinv = Matrix.identity(A, n)
    for _ in range(dr.rng.randint(0, moves) if n > 1 else 0):
        p, q = dr.rng.sample(range(n), 2)
        if part[p] == "F" and part[q] == "L":
            continue
        if fixed is not None and part[p] == part[q] == "L":
            continue
        a = dr.unit()
        T = [[A.one if i == j else A.zero for j in range(n)] for i in range(n)]
        T[p][q] = a
        Tinv = [list(r) for r in T]
        Tinv[p][q] = -a
        P = P @ Matrix(A, T)
        Pinv = Matrix(A, Tinv) @ Pinv
    return P, Pinv


def _conjugate(A, cells, P, Pinv, top, parts=None):
    diffs = {i: P[i - 1] @ _d0(A, cells, i, parts) @ Pinv[i] for i in range(1, top + 1)}
    ranks = [len(cells.basis(i, parts)) for i in range(top + 1)]
    return BasedComplex(A, ranks, diffs, check=False)


def _base(dr: _Draw, attempt_limit=30) -> _Base:
    p = dr.p
    A = dr.A
    for attempt in range(attempt_limit + 1):
        cells = _Cells(("L",))
        for _ in range(_cell_count(dr, p)):
            deg = dr.rng.randint(0, p.max_degree)
            if deg >= 1 and dr.rng.random() < 0.5:
                if cells.count("L", deg) < p.max_rank and cells.count("L", deg - 1) < p.max_rank:
                    lo = cells.add("L", deg - 1)
                    cells.face[cells.add("L", deg)] = (lo, dr.lam())
            elif cells.count("L", deg) < p.max_rank:
                cells.add("L", deg)
        top = p.max_degree
        moves = 2 if attempt < attempt_limit else 0
        PP = [_conjugator(dr, cells, i, moves=moves) for i in range(top + 1)]
        P = [x for x, _ in PP]
        Pinv = [y for _, y in PP]
        C = _conjugate(A, cells, P, Pinv, top)
        if dr.bounded(C.d(i) for i in range(1, top + 1)):
            return _Base(cells, P, Pinv, C)
    raise AssertionError("unreachable: an unconjugated base is always bounded")


def _chain_map(dr: _Draw, src: _Cells, tgt: _Cells, deg_top, include_identity: bool):
    """Cellular chain map src -> tgt as {degree: Matrix}; src cells are all part L."""
    A = dr.A
    rng = dr.rng
    entries = {}  # (tgt cell, src cell) -> value

    def put(t, s, v):
        entries[(t, s)] = entries.get((t, s), A.zero) + v

    if include_identity:
        lam = A.coerce(rng.choice((1, 1, 2, -1, 0)))
        for k in range(len(src.cells)):
            put(k, k, lam)
    def pick(options):
        # lean towards F so that h_F is populated
        in_f = [k for k in options if tgt.cells[k][0] == "F"]
        return rng.choice(in_f if in_f and rng.random() < 0.7 else options)

    for s, (_, deg) in enumerate(src.cells):
        if rng.random() < 0.3:
            continue
        if s in src.face:
            f, lam = src.face[s]
            ups = tgt.uppers(deg)
            if ups and rng.random() < 0.6:
                w = pick(ups)
                x, lam2 = tgt.face[w]
                a, b = _pair_scalars(A, lam, lam2, rng.choice((1, -1)))
                put(w, s, a)
                put(x, f, b)
            else:
                cyc = tgt.cycles(deg)
                if cyc:
                    put(pick(cyc), s, A.coerce(rng.choice((1, -1))))
        elif not any(fv[0] == s for fv in src.face.values()):
            cyc = tgt.cycles(deg)
            if cyc:
                put(pick(cyc), s, A.coerce(rng.choice((1, -1, 2))))
    out = {}
    for i in range(deg_top + 1):
        sb, tb = src.basis(i, ("L",)), tgt.basis(i)
        rows = [[entries.get((t, s), A.zero) for s in sb] for t in tb]
        out[i] = Matrix(A, rows, len(tb), len(sb))
    return out


def _random_matrix(dr: _Draw, nrows, ncols, density=0.3):
    A = dr.A
    return Matrix(A, [[dr.unit() if dr.rng.random() < density else A.zero for _ in range(ncols)]
                      for _ in range(nrows)], nrows, ncols)


def _piece(dr: _Draw, left: _Base, right: _Base, twist: int, identity_part: bool,
           attempt_limit=40) -> CobordismPiece:
    """A random piece with the given ends; h: right -> alpha^twist(E)."""
    p = dr.p
    A = dr.A
    top = p.max_degree
    for attempt in range(attempt_limit + 1):
        last = attempt == attempt_limit
        cells = left.cells.copy()
        cells.parts = ("L", "F")
        if not last:
            for _ in range(_cell_count(dr, p)):
                deg = dr.rng.randint(0, p.max_degree)
                if cells.count("F", deg) >= p.max_rank:
                    continue
                r = dr.rng.random()
                below = cells.cycles(deg - 1) if deg >= 1 else []
                in_left = [k for k in below if cells.cells[k][0] == "L"]
                if deg >= 1 and r < 0.25 and cells.count("F", deg - 1) < p.max_rank:
                    lo = cells.add("F", deg - 1)
                    cells.face[cells.add("F", deg)] = (lo, dr.lam())
                elif below and r < 0.75:
                    pool = in_left if in_left and dr.rng.random() < 0.7 else below
                    cells.face[cells.add("F", deg)] = (dr.rng.choice(pool), dr.lam())
                else:
                    cells.add("F", deg)
        moves = 0 if attempt > attempt_limit // 2 else 2
        PP = [_conjugator(dr, cells, i, fixed=(left.P[i], left.Pinv[i]), moves=moves) for i in range(top + 1)]
        P = [x for x, _ in PP]
        Pinv = [y for _, y in PP]
        E = _conjugate(A, cells, P, Pinv, top)
        h0 = _chain_map(dr, right.cells, cells, top, identity_part and left is right) if not last else \
            {i: Matrix.zeros(A, E.rank(i), right.complex.rank(i)) for i in range(top + 1)}
        h = {i: P[i].alpha(twist) @ h0[i] @ right.Pinv[i] for i in range(top + 1)}
        if not last and attempt < attempt_limit // 2:
            for _ in range(p.richness):
                m = {i: _random_matrix(dr, E.rank(i + 1), right.complex.rank(i)) for i in range(top + 1)}
                for i in range(top + 1):
                    h[i] = h[i] + E.d(i + 1).alpha(twist) @ m[i]
                    if i >= 1:
                        h[i] = h[i] + m[i - 1] @ right.complex.d(i)
        nl = [left.complex.rank(i) for i in range(top + 1)]
        nf = [E.rank(i) - nl[i] for i in range(top + 1)]
        F = BasedComplex(A, nf, {i: E.d(i).submatrix(range(nl[i - 1], E.rank(i - 1)), range(nl[i], E.rank(i)))
                                 for i in range(1, top + 1)}, check=False)
        c = {i: E.d(i).submatrix(range(nl[i - 1]), range(nl[i], E.rank(i))) for i in range(1, top + 1)}
        hD = {i: h[i].submatrix(range(nl[i]), range(h[i].ncols)) for i in range(top + 1)}
        hF = {i: h[i].submatrix(range(nl[i], E.rank(i)), range(h[i].ncols)) for i in range(top + 1)}
        mats = [F.d(i) for i in range(1, top + 1)] + list(c.values()) + list(hD.values()) + list(hF.values())
        if dr.bounded(mats):
            return CobordismPiece(A, left.complex, right.complex, F, c, hD, hF, twist)
    raise AssertionError("unreachable: the degenerate piece is always bounded")


def gen_random(params: GeneratorParams) -> Scenario:
    """A valid fundamental domain (and optionally a homotopy k) for the seed."""
    dr = _Draw(random.Random(params.seed), params)
    base = _base(dr)
    piece = _piece(dr, base, base, 1, True)
    fd = FundamentalDomain(dr.A, piece.left, piece.F, piece.c, piece.h_D, piece.h_F,
                           name=f"random-{params.ring}-{params.seed}",
                           description=f"generated with {params}")
    k = None
    if params.homotopy:
        k = {i: _random_matrix(dr, fd.D.rank(i + 1) + fd.F.rank(i + 1), fd.D.rank(i), 0.4)
             for i in fd.D.degrees()}
    return Scenario(dr.A, fd, k, name=fd.name, description=fd.description)


def gen_pieces(params: GeneratorParams, kind: str = "glue") -> Scenario:
    """Three composable pieces (kind 'glue') or a plus/minus pair (kind 'exchange')."""
    dr = _Draw(random.Random(params.seed), params)
    if kind == "glue":
        ends = [_base(dr) for _ in range(4)]
        twists = [0, 0, dr.rng.choice((0, 1))]
        pieces = [_piece(dr, ends[n], ends[n + 1], twists[n], dr.rng.random() < 0.5) for n in range(3)]
    elif kind == "exchange":
        D, D2 = _base(dr), _base(dr)
        pieces = [_piece(dr, D, D2, 0, dr.rng.random() < 0.5), _piece(dr, D2, D, 1, dr.rng.random() < 0.5)]
    else:
        raise ValueError("kind must be 'glue' or 'exchange'")
    for n, pc in enumerate(pieces):
        pc.name = f"piece{n}"
    return Scenario(dr.A, pieces=pieces, pieces_kind=kind, name=f"random-{kind}-{params.ring}-{params.seed}",
                    description=f"generated with {params}")


__all__ = ["GeneratorParams", "RINGS", "gen_random", "gen_pieces"]
