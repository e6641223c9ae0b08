"""Fundamental-domain data (D, F, c, h_D, h_F) and cobordism pieces.

Matrix convention for the twisted maps: h is stored as an A-matrix such that
z*h is a chain map over A_alpha[z, z^-1].  Since X z = z alpha(X), this is
the entrywise condition alpha(d_E) h = h d_D, i.e.

    alpha(d_D) h_D + alpha(c) h_F = h_D d_D,    alpha(d_F) h_F = h_F d_D.

A piece with ``twist = 0`` is an ordinary cobordism (untwisted conditions);
a fundamental domain is a piece with twist 1 whose two ends agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chain import BasedComplex
from .errors import GlueMismatchError, ShapeError, UnsupportedOperationError, ValidationError
from .matrix import Matrix
from .rings import GroundRing, TwistedRing


@dataclass
class Violation:
    identity: str
    degree: int
    entries: list

    def __str__(self):
        where = ", ".join(f"({r}, {c})" for r, c in self.entries[:6])
        more = "" if len(self.entries) <= 6 else f" and {len(self.entries) - 6} more"
        return f"degree {self.degree}: {self.identity} fails at {where}{more}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def lines(self):
        return [str(v) for v in self.violations]

    def __str__(self):
        return "ok" if self.ok else "\n".join(self.lines())


def _family(ring, data, shape_of, name):
    out = {}
    items = data.items() if isinstance(data, dict) else enumerate(data or ())
    for i, m in items:
        if m is None:
            continue
        shape = shape_of(i)
        if not isinstance(m, Matrix):
            m = Matrix(ring, m, *shape)
        if m.shape != shape:
            if (m.nrows == 0 or m.ncols == 0) and (shape[0] == 0 or shape[1] == 0):
                m = Matrix.zeros(ring, *shape)
            else:
                raise ShapeError(f"{name}_{i} has shape {m.shape}, expected {shape}")
        out[i] = m
    return out


class CobordismPiece:
    """(left, right, F, c, h_D, h_F) with E = left + F.

    c_i: F_i -> left_(i-1), h_D,i: right_i -> left_i, h_F,i: right_i -> F_i.
    """

    def __init__(self, ring: GroundRing, left: BasedComplex, right: BasedComplex, F: BasedComplex,
                 c=None, h_D=None, h_F=None, twist: int = 0, name: str = ""):
        self.ring = ring
        self.left = left
        self.right = right
        self.F = F
        self.twist = int(twist)
        self.name = name
        self.c = _family(ring, c, lambda i: (left.rank(i - 1), F.rank(i)), "c")
        self.h_D = _family(ring, h_D, lambda i: (left.rank(i), right.rank(i)), "h_D")
        self.h_F = _family(ring, h_F, lambda i: (F.rank(i), right.rank(i)), "h_F")

    @property
    def top(self) -> int:
        return max(self.left.top, self.right.top, self.F.top)

    def degrees(self):
        return range(self.top + 1)

    def cmat(self, i):
        return self.c.get(i) or Matrix.zeros(self.ring, self.left.rank(i - 1), self.F.rank(i))

    def hD(self, i):
        return self.h_D.get(i) or Matrix.zeros(self.ring, self.left.rank(i), self.right.rank(i))

    def hF(self, i):
        return self.h_F.get(i) or Matrix.zeros(self.ring, self.F.rank(i), self.right.rank(i))

    def dE(self, i) -> Matrix:
        R = self.ring
        return Matrix.block(R, [
            [self.left.d(i), self.cmat(i)],
            [Matrix.zeros(R, self.F.rank(i - 1), self.left.rank(i)), self.F.d(i)],
        ])

    def E(self) -> BasedComplex:
        top = max(self.left.top, self.F.top)
        labels = [self.left.label(i) + self.F.label(i) for i in range(top + 1)]
        return BasedComplex(self.ring, [self.left.rank(i) + self.F.rank(i) for i in range(top + 1)],
                            {i: self.dE(i) for i in range(1, top + 1)}, labels, check=False)

    def h(self, i) -> Matrix:
        return Matrix.vstack(self.ring, [self.hD(i), self.hF(i)])

    def validate(self) -> ValidationReport:
        return _validate(self, self.left, self.right, self.twist)

    def __eq__(self, other):
        if not isinstance(other, CobordismPiece):
            return NotImplemented
        n = max(self.top, other.top)
        return (self.ring == other.ring and self.twist == other.twist
                and self.left == other.left and self.right == other.right and self.F == other.F
                and all(self.cmat(i) == other.cmat(i) and self.hD(i) == other.hD(i)
                        and self.hF(i) == other.hF(i) for i in range(n + 1)))

    __hash__ = None

    def __repr__(self):
        return f"CobordismPiece(left={self.left.ranks}, right={self.right.ranks}, F={self.F.ranks}, twist={self.twist})"


class FundamentalDomain(CobordismPiece):
    """Chain data (D, F, c, h_D, h_F) of a fundamental domain; g = (1; 0) is implicit."""

    def __init__(self, ring: GroundRing, D: BasedComplex, F: BasedComplex, c=None, h_D=None, h_F=None,
                 gradient_like: bool = False, name: str = "", description: str = ""):
        super().__init__(ring, D, D, F, c, h_D, h_F, twist=1, name=name)
        self.gradient_like = bool(gradient_like)
        self.description = description

    @property
    def D(self) -> BasedComplex:
        return self.left

    def g(self, i) -> Matrix:
        R = self.ring
        return Matrix.vstack(R, [Matrix.identity(R, self.D.rank(i)), Matrix.zeros(R, self.F.rank(i), self.D.rank(i))])

    def to_piece(self) -> CobordismPiece:
        return CobordismPiece(self.ring, self.D, self.D, self.F, self.c, self.h_D, self.h_F, twist=1, name=self.name)

    @classmethod
    def from_piece(cls, piece: CobordismPiece, **kw) -> "FundamentalDomain":
        if piece.left != piece.right:
            raise GlueMismatchError("the two ends of the piece differ")
        if piece.twist != 1 and not piece.ring.is_identity_alpha:
            raise GlueMismatchError("closing a piece into a fundamental domain needs twist 1")
        return cls(piece.ring, piece.left, piece.F, piece.c, piece.h_D, piece.h_F, **kw)

    def with_h(self, h_D, h_F) -> "FundamentalDomain":
        return FundamentalDomain(self.ring, self.D, self.F, self.c, h_D, h_F,
                                 self.gradient_like, self.name, self.description)

    def __repr__(self):
        return f"FundamentalDomain(D={self.D.ranks}, F={self.F.ranks}, ring={self.ring.kind})"


def _diff_entries(lhs, rhs):
    return [(r, c) for r, c, x in (lhs - rhs).entries() if x]


def _validate(p: CobordismPiece, left: BasedComplex, right: BasedComplex, twist: int) -> ValidationReport:
    out = []
    for name, C in (("d_D^2 = 0", left), ("d_D'^2 = 0", right), ("d_F^2 = 0", p.F)):
        if name == "d_D'^2 = 0" and right is left:
            continue
        for i in range(2, C.top + 1):
            prod = C.d(i - 1) @ C.d(i)
            bad = [(r, c) for r, c, x in prod.entries() if x]
            if bad:
                out.append(Violation(name, i, bad))
    for i in range(1, p.top + 1):
        lhs = left.d(i) @ p.cmat(i + 1)
        rhs = -(p.cmat(i) @ p.F.d(i + 1))
        bad = _diff_entries(lhs, rhs)
        if bad:
            out.append(Violation("d_D c + c d_F = 0", i, bad))
    tw = "alpha" if twist else ""
    for i in range(1, p.top + 1):
        lhs = left.d(i).alpha(twist) @ p.hD(i) + p.cmat(i).alpha(twist) @ p.hF(i)
        rhs = p.hD(i - 1) @ right.d(i)
        bad = _diff_entries(lhs, rhs)
        if bad:
            out.append(Violation(f"{tw}(d_D) h_D + {tw}(c) h_F = h_D d_D'" if tw
                                 else "d_D h_D + c h_F = h_D d_D'", i, bad))
        lhs = p.F.d(i).alpha(twist) @ p.hF(i)
        rhs = p.hF(i - 1) @ right.d(i)
        bad = _diff_entries(lhs, rhs)
        if bad:
            out.append(Violation(f"{tw}(d_F) h_F = h_F d_D'" if tw else "d_F h_F = h_F d_D'", i, bad))
    return ValidationReport(out)


def validate(fd: CobordismPiece) -> ValidationReport:
    """Every violated chain identity with its degree and entry coordinates."""
    return fd.validate()


def require_valid(fd: CobordismPiece) -> None:
    rep = fd.validate()
    if not rep.ok:
        raise ValidationError(rep)


def _complex_sum(ring, A: BasedComplex, B: BasedComplex, off) -> BasedComplex:
    """A + B with differential [[d_A, off(i)], [0, d_B]]."""
    top = max(A.top, B.top)
    diffs = {}
    for i in range(1, top + 1):
        diffs[i] = Matrix.block(ring, [
            [A.d(i), off(i)],
            [Matrix.zeros(ring, B.rank(i - 1), A.rank(i)), B.d(i)],
        ])
    labels = [A.label(i) + B.label(i) for i in range(top + 1)]
    return BasedComplex(ring, [A.rank(i) + B.rank(i) for i in range(top + 1)], diffs, labels, check=False)


def glue(left: CobordismPiece, right: CobordismPiece) -> CobordismPiece:
    """Compose adjacent pieces: the right end of ``left`` is the left end of ``right``.

    d_F = [[d_F', h'_F c''], [0, d_F'']], c = (c', h'_D c''),
    h_D = a(h'_D) h''_D, h_F = (a(h'_F) h''_D; h''_F), where a = alpha^t and t
    is the twist of the right piece.
    """
    if left.ring != right.ring:
        raise GlueMismatchError("pieces live over different rings")
    if left.right != right.left:
        raise GlueMismatchError(f"boundary mismatch: {left.right.ranks} vs {right.left.ranks}")
    R = left.ring
    if left.twist and not R.is_identity_alpha:
        raise UnsupportedOperationError("glueing onto the right of a twisted piece")
    t = right.twist
    top = max(left.top, right.top)
    F = _complex_sum(R, left.F, right.F, lambda i: left.hF(i - 1) @ right.cmat(i))
    c, hD, hF = {}, {}, {}
    for i in range(top + 1):
        if i >= 1:
            c[i] = Matrix.hstack(R, [left.cmat(i), left.hD(i - 1) @ right.cmat(i)])
        hD[i] = left.hD(i).alpha(t) @ right.hD(i)
        hF[i] = Matrix.vstack(R, [left.hF(i).alpha(t) @ right.hD(i), right.hF(i)])
    return CobordismPiece(R, left.left, right.right, F, c, hD, hF, twist=max(left.twist, t))


def glue_assoc_check(a: CobordismPiece, b: CobordismPiece, c: CobordismPiece) -> bool:
    return glue(glue(a, b), c) == glue(a, glue(b, c))


@dataclass
class GlueHomotopy:
    """Result of checking a user-supplied homotopy b between a and h'_F c''."""

    report: list
    I: dict
    h_F: dict

    @property
    def ok(self):
        return not self.report


def verify_glue_homotopy(left: CobordismPiece, right: CobordismPiece, a: dict, b: dict) -> GlueHomotopy:
    """Check b against the geometric connecting map a.

    Maps are indexed by the degree of F'': a_i: F''_i -> F'_(i-1) and
    b_i: F''_i -> F'_i.  The convention h'_F c'' - a = b d_F'' - d_F' b makes
    I = [[1, b], [0, 1]] a chain isomorphism from [[d_F', a], [0, d_F'']] to the
    glued d_F, and I h_F = (h'_F h''_D + b h''_F; h''_F).
    """
    R = left.ring
    Fl, Fr = left.F, right.F
    top = max(left.top, right.top)

    def A(i):
        return a.get(i) or Matrix.zeros(R, Fl.rank(i - 1), Fr.rank(i))

    def B(i):
        return b.get(i) or Matrix.zeros(R, Fl.rank(i), Fr.rank(i))

    report = []
    for i in range(1, top + 1):
        lhs = left.hF(i - 1) @ right.cmat(i) - A(i)
        rhs = B(i - 1) @ Fr.d(i) - Fl.d(i) @ B(i)
        if lhs != rhs:
            report.append(f"h'_F c'' - a != b d_F'' - d_F' b in degree {i}")
    I, hF = {}, {}
    for i in range(top + 1):
        I[i] = Matrix.block(R, [
            [Matrix.identity(R, Fl.rank(i)), B(i)],
            [Matrix.zeros(R, Fr.rank(i), Fl.rank(i)), Matrix.identity(R, Fr.rank(i))],
        ])
        hF[i] = Matrix.vstack(R, [left.hF(i) @ right.hD(i) + B(i) @ right.hF(i), right.hF(i)])
    return GlueHomotopy(report, I, hF)


@dataclass
class ExchangeResult:
    fd: FundamentalDomain
    fd_prime: FundamentalDomain
    iso: dict  # F^_i -> F^'_i, diag(z on F+, 1 on F-)
    reverse_iso: dict  # F^'_i -> F^_i, (x+, x-) -> (x+, z x-)


def exchange(plus: CobordismPiece, minus: CobordismPiece) -> ExchangeResult:
    """Fundamental domains cut at N (glue plus then minus) and at N' (minus then plus).

    ``plus`` runs D -> D' untwisted, ``minus`` runs D' -> D with twist 1.
    """
    R = plus.ring
    if minus.ring != R:
        raise GlueMismatchError("pieces live over different rings")
    if plus.right != minus.left or minus.right != plus.left:
        raise GlueMismatchError("pieces do not close up into a circle")
    if plus.twist != 0 or (minus.twist != 1 and not R.is_identity_alpha):
        raise GlueMismatchError("exchange expects an untwisted plus piece and a twisted minus piece")
    minus1 = minus if minus.twist == 1 else CobordismPiece(
        R, minus.left, minus.right, minus.F, minus.c, minus.h_D, minus.h_F, twist=1)
    fd = FundamentalDomain.from_piece(glue(plus, minus1))

    Fp, Fm = plus.F, minus.F
    D2 = plus.right
    top = max(plus.top, minus.top)
    # fd' is cut at N'; the F+ cells now sit one translate further along
    Fp_shift = Fp.alpha(-1)
    Fprime = BasedComplex(R, [Fp.rank(i) + Fm.rank(i) for i in range(top + 1)], {
        i: Matrix.block(R, [
            [Fp_shift.d(i), Matrix.zeros(R, Fp.rank(i - 1), Fm.rank(i))],
            [(minus.hF(i - 1) @ plus.cmat(i)).alpha(-1), Fm.d(i)],
        ]) for i in range(1, top + 1)},
        [Fp.label(i) + Fm.label(i) for i in range(top + 1)], check=False)
    c, hD, hF = {}, {}, {}
    for i in range(top + 1):
        if i >= 1:
            c[i] = Matrix.hstack(R, [(minus.hD(i - 1) @ plus.cmat(i)).alpha(-1), minus.cmat(i)])
        hD[i] = minus.hD(i) @ plus.hD(i)
        hF[i] = Matrix.vstack(R, [plus.hF(i), minus.hF(i) @ plus.hD(i)])
    fd2 = FundamentalDomain(R, D2, Fprime, c, hD, hF)

    T = TwistedRing(R)
    iso, rev = {}, {}
    for i in range(top + 1):
        a, b = Fp.rank(i), Fm.rank(i)
        iso[i] = Matrix.diagonal(T, [T.z] * a + [T.one] * b)
        rev[i] = Matrix.diagonal(T, [T.one] * a + [T.z] * b)
    return ExchangeResult(fd, fd2, iso, rev)


def truncated_union_block(fd: FundamentalDomain, i: int, r: int, s: int) -> Matrix:
    """Block (r, s) of the band differential in degree i (copy r <- copy s).

    With X[t] = alpha^-t(X): the diagonal is d_F[r] and for s > r the block is
    h_F[r+1] h_D[r+2] ... h_D[s] c[s].
    """
    R = fd.ring
    if s < r:
        return Matrix.zeros(R, fd.F.rank(i - 1), fd.F.rank(i))
    if s == r:
        return fd.F.d(i).alpha(-r)
    m = fd.cmat(i).alpha(-s)
    for t in range(s, r + 1, -1):
        m = fd.hD(i - 1).alpha(-t) @ m
    return fd.hF(i - 1).alpha(-(r + 1)) @ m


def truncated_union(fd: FundamentalDomain, k: int) -> BasedComplex:
    """k+1 consecutive translates of F with the upper-triangular band differential."""
    R = fd.ring
    F = fd.F
    top = fd.top
    diffs = {}
    for i in range(1, top + 1):
        diffs[i] = Matrix.block(R, [[truncated_union_block(fd, i, r, s) for s in range(k + 1)]
                                    for r in range(k + 1)])
    labels = [tuple(f"{x}[{r}]" for r in range(k + 1) for x in F.label(i)) for i in range(top + 1)]
    return BasedComplex(R, [(k + 1) * F.rank(i) for i in range(top + 1)], diffs, labels, check=False)


__all__ = [
    "Violation", "ValidationReport", "CobordismPiece", "FundamentalDomain", "validate", "require_valid",
    "glue", "glue_assoc_check", "verify_glue_homotopy", "GlueHomotopy", "exchange", "ExchangeResult",
    "truncated_union", "truncated_union_block",
]
