"""Exact rational functions Q(z) for commutative untwisted A in {Z, Q}.

Canonical form: r = z^val * num / den with num, den dense Fraction
polynomials (ascending), num(0) != 0, den(0) = 1 and gcd(num, den) = 1.
Rendering clears denominators so that ``(2 - z)/(1 - 3*z)`` prints as is.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from ..errors import DomainError, ExpansionError, RingMismatchError
from .ground import INTEGERS, QQ, RATIONALS, ZZ, GroundRing
from .series import NovikovSeries, SeriesRing
from .text import join_terms
from .twisted import TwistedElement, TwistedRing

_ONE = (Fraction(1),)


def _trim(p):
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return tuple(p[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _pmul(a, b):
    if not a or not b:
        return ()
    if len(b) == 1:
        c = b[0]
        return tuple(x * c for x in a) if c != 1 else a
    if len(a) == 1:
        c = a[0]
        return tuple(x * c for x in b) if c != 1 else b
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[k + i] -= c * y
    return _trim(q), _trim(a[: len(b) - 1])


def _pgcd(a, b):
    while b:
        a, b = b, _pdivmod(a, b)[1]
    lead = a[-1]
    return tuple(c / lead for c in a)


def _strip_low(p):
    k = 0
    while k < len(p) and not p[k]:
        k += 1
    return p[k:], k


class RationalFunctionField:
    """Q(z), remembering whether series expansions should land in Z((z)) or Q((z))."""

    __slots__ = ("base",)

    field = True
    commutative = True

    def __init__(self, base: GroundRing = ZZ):
        if base.kind not in (INTEGERS, RATIONALS):
            raise DomainError("rational functions are only provided over Z or Q")
        self.base = base

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and self.base == other.base

    def __hash__(self):
        return hash(("ratfun", self.base))

    def __repr__(self):
        return f"RationalFunctionField({self.base.kind})"

    @property
    def ground(self):
        return self.base

    @property
    def zero(self):
        return RationalFunction._raw(self.base, (), _ONE, 0)

    @property
    def one(self):
        return RationalFunction._raw(self.base, _ONE, _ONE, 0)

    @property
    def z(self):
        return RationalFunction._raw(self.base, _ONE, _ONE, 1)

    def coerce(self, x):
        if isinstance(x, RationalFunction):
            if x.base != self.base:
                raise RingMismatchError(f"{x.base} vs {self.base}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, TwistedElement):
            return RationalFunction.from_polynomial(x, self.base)
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            x = Fraction(x)
            return RationalFunction._raw(self.base, (x,) if x else (), _ONE, 0)
        raise DomainError(f"{x!r} does not coerce into Q(z)")

    def contains(self, x):
        return isinstance(x, RationalFunction) and x.base == self.base

    def alpha(self, x, power=1):
        return x

    def augment(self, x):
        return x.augment()

    def is_unit(self, x):
        return bool(x)

    def inverse(self, x):
        return x.inverse()

    def divide(self, a, b):
        return self.coerce(a) / self.coerce(b)

    def variable(self, name):
        if name != "z":
            raise KeyError(name)
        return self.z

    def polynomial(self, coeffs, val: int = 0):
        """z^val * sum coeffs[i] z^i."""
        return RationalFunction.make(self.base, tuple(Fraction(c) for c in coeffs), _ONE, val)

    def render(self, x):
        return x.render()

    def parse(self, s):
        from .text import parse_expression
        return self.coerce(parse_expression(s, self))


class RationalFunction:
    __slots__ = ("base", "num", "den", "val")

    @classmethod
    def _raw(cls, base, num, den, val):
        obj = cls.__new__(cls)
        obj.base = base
        obj.num = num
        obj.den = den
        obj.val = val
        return obj

    @classmethod
    def make(cls, base, num, den, val=0):
        num = _trim(num)
        den = _trim(den)
        if not den:
            raise DomainError("zero denominator")
        if not num:
            return cls._raw(base, (), _ONE, 0)
        num, k = _strip_low(num)
        den, l = _strip_low(den)
        val += k - l
        if len(den) > 1 and len(num) > 0:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
        c = den[0]
        if c != 1:
            num = tuple(Fraction(x) / c for x in num)
            den = tuple(Fraction(x) / c for x in den)
        return cls._raw(base, num, den, val)

    @classmethod
    def from_polynomial(cls, p: TwistedElement, base: GroundRing = ZZ):
        A = p.ring.ground
        if A.kind not in (INTEGERS, RATIONALS):
            raise DomainError("only polynomials over Z or Q embed in Q(z)")
        if not p.terms:
            return cls._raw(base, (), _ONE, 0)
        lo, hi = min(p.terms), max(p.terms)
        num = tuple(Fraction(p.terms.get(j, 0)) for j in range(lo, hi + 1))
        return cls._raw(base, num, _ONE, lo)

    def _check(self, other):
        if isinstance(other, RationalFunction):
            if other.base is not self.base and other.base != self.base:
                raise RingMismatchError(f"{self.base} vs {other.base}")
            return other
        if isinstance(other, (int, Fraction, TwistedElement)):
            return RationalFunctionField(self.base).coerce(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        v = min(self.val, other.val)
        a = (0,) * (self.val - v) + self.num
        b = (0,) * (other.val - v) + other.num
        if self.den == other.den:
            return RationalFunction.make(self.base, _padd(a, b), self.den, v)
        num = _padd(_pmul(a, other.den), _pmul(b, self.den))
        return RationalFunction.make(self.base, num, _pmul(self.den, other.den), v)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(self.base, tuple(-c for c in self.num), self.den, self.val)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return RationalFunction._raw(self.base, (), _ONE, 0)
        if self.den == _ONE and other.den == _ONE:
            return RationalFunction._raw(self.base, _pmul(self.num, other.num), _ONE, self.val + other.val)
        return RationalFunction.make(self.base, _pmul(self.num, other.num),
                                     _pmul(self.den, other.den), self.val + other.val)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DomainError("division by zero in Q(z)")
        return RationalFunction.make(self.base, self.den, self.num, -self.val)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        base = self if n >= 0 else self.inverse()
        out = RationalFunctionField(self.base).one
        for _ in range(abs(n)):
            out = out * base
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return (self.base == other.base and self.val == other.val
                    and self.num == other.num and self.den == other.den)
        if isinstance(other, (int, Fraction, TwistedElement)):
            try:
                return self == self._check(other)
            except (DomainError, RingMismatchError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den, self.val))

    # structure

    @property
    def is_polynomial(self) -> bool:
        return self.den == _ONE

    def augment(self):
        """Value at z = 0."""
        if not self.num or self.val > 0:
            return Fraction(0)
        if self.val < 0:
            raise DomainError(f"{self.render()} has a pole at z = 0")
        return self.num[0]

    def integer_form(self):
        """(N, D) primitive integer polynomials with D(0) > 0 and r = N/D."""
        num = list(self.num)
        den = list(self.den)
        if self.val > 0:
            num = [Fraction(0)] * self.val + num
        elif self.val < 0:
            den = [Fraction(0)] * (-self.val) + den
        m = lcm(*(c.denominator for c in num + den)) if num else 1
        N = [int(c * m) for c in num]
        D = [int(c * m) for c in den]
        g = gcd(*(N + D))
        N = [c // g for c in N]
        D = [c // g for c in D]
        if next(c for c in D if c) < 0:
            N = [-c for c in N]
            D = [-c for c in D]
        return N, D

    def numerator(self) -> TwistedElement:
        N, _ = self.integer_form()
        return TwistedRing(ZZ).element(dict(enumerate(N)))

    def denominator(self) -> TwistedElement:
        _, D = self.integer_form()
        return TwistedRing(ZZ).element(dict(enumerate(D)))

    def to_series(self, K: int) -> NovikovSeries:
        return ratfun_to_series(self, K)

    def render(self) -> str:
        if not self.num:
            return "0"
        N, D = self.integer_form()
        ns = _poly_str(N)
        if D == [1]:
            return ns
        ds = _poly_str(D)
        if sum(1 for c in N if c) > 1:
            ns = f"({ns})"
        if sum(1 for c in D if c) > 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"RationalFunction({self.render()!r})"

    def __str__(self):
        return self.render()


def _poly_str(coeffs) -> str:
    pairs = []
    for j, c in enumerate(coeffs):
        if c:
            pairs.append((c, "" if j == 0 else "z" if j == 1 else f"z^{j}"))
    return join_terms(pairs)


def ratfun_to_series(r: RationalFunction, K: int) -> NovikovSeries:
    """Expand r in A((z)) modulo z^(K+1) by long division."""
    base = r.base
    if base.kind == INTEGERS:
        _, D = r.integer_form()
        d0 = next(c for c in D if c)
        if d0 not in (1, -1):
            raise ExpansionError(
                f"denominator of {r.render()} has lowest coefficient {d0}, not a unit in Z")
    n = K - r.val + 1
    out = []
    num, den = r.num, r.den
    for k in range(max(0, n)):
        acc = num[k] if k < len(num) else Fraction(0)
        for i in range(1, min(k, len(den) - 1) + 1):
            acc -= den[i] * out[k - i]
        out.append(acc)
    if base.kind == INTEGERS:
        for j, c in enumerate(out):
            if c.denominator != 1:
                raise ExpansionError(
                    f"coefficient {c} of z^{r.val + j} in {r.render()} is not an integer")
        coeffs = [int(c) for c in out]
    else:
        coeffs = out
    return NovikovSeries.make(base, r.val, coeffs, K)


QZ = RationalFunctionField(ZZ)
