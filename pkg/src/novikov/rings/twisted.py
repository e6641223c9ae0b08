"""The alpha-twisted Laurent polynomial ring A_alpha[z, z^-1].

Elements are kept in the normal form sum_j z^j a_j with coefficients on the
right, and multiply by (z^i a)(z^j b) = z^(i+j) alpha^j(a) b.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DomainError, RingMismatchError
from .ground import GroundElement, GroundRing
from .text import format_coeff, join_strings, term_str


class TwistedRing:
    __slots__ = ("ground",)

    field = False

    def __init__(self, ground: GroundRing):
        self.ground = ground

    def __eq__(self, other):
        return isinstance(other, TwistedRing) and self.ground == other.ground

    def __hash__(self):
        return hash(("twisted", self.ground))

    def __repr__(self):
        return f"TwistedRing({self.ground!r})"

    @property
    def commutative(self) -> bool:
        return self.ground.is_identity_alpha

    @property
    def zero(self):
        return TwistedElement._raw(self, {})

    @property
    def one(self):
        return self.coerce(1)

    @property
    def z(self):
        return TwistedElement._raw(self, {1: self.ground.one})

    def monomial(self, j: int, a=1):
        a = self.ground.coerce(a)
        return TwistedElement._raw(self, {j: a} if a else {})

    def element(self, terms: dict):
        """Build sum_j z^j terms[j]."""
        A = self.ground
        out = {}
        for j, a in terms.items():
            a = A.coerce(a)
            if a:
                out[int(j)] = a
        return TwistedElement._raw(self, out)

    def coerce(self, x):
        if isinstance(x, TwistedElement):
            if x.ring != self:
                raise RingMismatchError(f"{x.ring} vs {self}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        a = self.ground.coerce(x)
        return TwistedElement._raw(self, {0: a} if a else {})

    def contains(self, x) -> bool:
        return isinstance(x, TwistedElement) and x.ring == self

    def alpha(self, x, power: int = 1):
        """Apply alpha**power to every coefficient (z is fixed)."""
        if power == 0 or self.ground.is_identity_alpha:
            return x
        A = self.ground
        return TwistedElement._raw(self, {j: A.alpha(a, power) for j, a in x.terms.items()})

    def augment(self, x):
        """The augmentation z -> 0, defined on A_alpha[z]."""
        if x.terms and min(x.terms) < 0:
            raise DomainError(f"{self.render(x)} has negative z-powers")
        return x.terms.get(0, self.ground.zero)

    def is_unit(self, x) -> bool:
        return len(x.terms) == 1 and self.ground.is_unit(next(iter(x.terms.values())))

    def inverse(self, x):
        if not self.is_unit(x):
            raise DomainError(f"{self.render(x)} is not a unit")
        (j, a), = x.terms.items()
        # (z^j a)^-1 = a^-1 z^-j = z^-j alpha^-j(a^-1)
        A = self.ground
        return TwistedElement._raw(self, {-j: A.alpha(A.inverse(a), -j)})

    def divide(self, a, b):
        return a * self.inverse(self.coerce(b))

    def variable(self, name):
        if name == "z":
            return self.z
        return self.coerce(self.ground.variable(name))

    def render(self, x) -> str:
        A = self.ground
        parts = []
        for j in sorted(x.terms):
            a = x.terms[j]
            zs = "" if j == 0 else "z" if j == 1 else f"z^{j}"
            if not zs:
                parts.extend(term_str(c, m) for c, m in A.term_list(a))
                continue
            tl = A.term_list(a)
            if len(tl) == 1:
                c, m = tl[0]
                parts.append(term_str(c, zs + ("*" + m if m else "")))
            else:
                parts.append(f"{zs}*({A.render(a)})")
        return join_strings(parts)

    def parse(self, s: str):
        from .text import parse_expression
        return self.coerce(parse_expression(s, self))


class TwistedElement:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: TwistedRing, terms: dict):
        tmp = ring.element(terms)
        self.ring = ring
        self.terms = tmp.terms
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    def _coerce(self, other):
        if isinstance(other, TwistedElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, GroundElement)):
            return self.ring.coerce(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        res = dict(self.terms)
        for j, b in other.terms.items():
            v = res[j] + b if j in res else b
            if v:
                res[j] = v
            else:
                res.pop(j, None)
        return TwistedElement._raw(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return TwistedElement._raw(self.ring, {j: -a for j, a in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return twisted_mul(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return twisted_mul(other, self)

    def __pow__(self, n: int):
        if n < 0:
            return self.ring.inverse(self) ** (-n)
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, TwistedElement):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, GroundElement)):
            try:
                return self == self.ring.coerce(other)
            except (DomainError, RingMismatchError):
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def coefficient(self, j: int):
        return self.terms.get(j, self.ring.ground.zero)

    @property
    def min_power(self):
        return min(self.terms) if self.terms else None

    @property
    def max_power(self):
        return max(self.terms) if self.terms else None

    def __repr__(self):
        return f"TwistedElement({self.ring.render(self)!r})"

    def __str__(self):
        return self.ring.render(self)


def twisted_mul(p: TwistedElement, q: TwistedElement) -> TwistedElement:
    """Product in normal form using (z^i a)(z^j b) = z^(i+j) alpha^j(a) b."""
    if p.ring is not q.ring and p.ring != q.ring:
        raise RingMismatchError(f"{p.ring} vs {q.ring}")
    A = p.ring.ground
    plain = A.is_identity_alpha
    res = {}
    for j, b in q.terms.items():
        for i, a in p.terms.items():
            aj = a if plain or j == 0 else A.alpha(a, j)
            k = i + j
            v = res[k] + aj * b if k in res else aj * b
            if v:
                res[k] = v
            else:
                res.pop(k, None)
    return TwistedElement._raw(p.ring, res)


__all__ = ["TwistedRing", "TwistedElement", "twisted_mul", "format_coeff"]
