"""Truncated Novikov series in A_alpha((z)).

A :class:`NovikovSeries` stores ``sum_{j=low}^{order} z^j a_j`` and stands
for an element known modulo z^(order+1).  Arithmetic between series of
different orders keeps only what is determined by both operands.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DomainError, ExpansionError, RingMismatchError
from .ground import GroundElement, GroundRing
from .text import join_strings
from .twisted import TwistedElement, TwistedRing


class SeriesRing:
    """A_alpha((z)) truncated at a default order K."""

    __slots__ = ("ground", "order", "twisted")

    field = False

    def __init__(self, ground: GroundRing, order: int):
        self.ground = ground
        self.order = int(order)
        self.twisted = TwistedRing(ground)

    def __eq__(self, other):
        return isinstance(other, SeriesRing) and self.ground == other.ground and self.order == other.order

    def __hash__(self):
        return hash(("series", self.ground, self.order))

    def __repr__(self):
        return f"SeriesRing({self.ground!r}, K={self.order})"

    @property
    def commutative(self):
        return self.ground.is_identity_alpha

    @property
    def zero(self):
        return NovikovSeries._raw(self.ground, self.order + 1, (), self.order)

    @property
    def one(self):
        return self.coerce(1)

    @property
    def z(self):
        return self.coerce(self.twisted.z)

    def coerce(self, x, order: int | None = None):
        K = self.order if order is None else order
        if isinstance(x, NovikovSeries):
            if x.ground != self.ground:
                raise RingMismatchError(f"{x.ground} vs {self.ground}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, TwistedElement):
            if x.ring.ground != self.ground:
                raise RingMismatchError(f"{x.ring.ground} vs {self.ground}")
            if not x.terms:
                return NovikovSeries._raw(self.ground, K + 1, (), K)
            lo = min(x.terms)
            hi = min(max(x.terms), K)
            Z = self.ground.zero
            coeffs = tuple(x.terms.get(j, Z) for j in range(lo, hi + 1))
            return NovikovSeries.make(self.ground, lo, coeffs, K)
        if hasattr(x, "to_series"):
            return x.to_series(K)
        a = self.ground.coerce(x)
        if not a:
            return NovikovSeries._raw(self.ground, K + 1, (), K)
        return NovikovSeries._raw(self.ground, 0, (a,), K)

    def contains(self, x) -> bool:
        return isinstance(x, NovikovSeries) and x.ground == self.ground

    def alpha(self, x, power: int = 1):
        if power == 0 or self.ground.is_identity_alpha:
            return x
        A = self.ground
        return NovikovSeries._raw(A, x.low, tuple(A.alpha(a, power) for a in x.coeffs), x.order)

    def augment(self, x):
        if x.low < 0:
            raise DomainError(f"{self.render(x)} has negative z-powers")
        return x.coefficient(0)

    def is_unit(self, x) -> bool:
        return bool(x.coeffs) and self.ground.is_unit(x.coeffs[0])

    def inverse(self, x):
        return x.inverse()

    def divide(self, a, b):
        return self.coerce(a) * self.coerce(b).inverse()

    def variable(self, name):
        return self.coerce(self.twisted.variable(name))

    def render(self, x) -> str:
        return x.render()

    def parse(self, s: str):
        return parse_series(s, self.ground, self.order)


class NovikovSeries:
    __slots__ = ("ground", "low", "coeffs", "order")

    def __init__(self, ground: GroundRing, low: int, coeffs, order: int):
        s = NovikovSeries.make(ground, low, tuple(ground.coerce(c) for c in coeffs), order)
        self.ground, self.low, self.coeffs, self.order = s.ground, s.low, s.coeffs, s.order

    @classmethod
    def _raw(cls, ground, low, coeffs, order):
        obj = cls.__new__(cls)
        obj.ground = ground
        obj.low = low
        obj.coeffs = coeffs
        obj.order = order
        return obj

    @classmethod
    def make(cls, ground, low, coeffs, order):
        """Normalize: drop coefficients above ``order`` and zeros at both ends."""
        coeffs = tuple(coeffs)[: max(0, order - low + 1)]
        k = 0
        while k < len(coeffs) and not coeffs[k]:
            k += 1
        if k == len(coeffs):
            return cls._raw(ground, order + 1, (), order)
        n = len(coeffs)
        while not coeffs[n - 1]:
            n -= 1
        return cls._raw(ground, low + k, coeffs[k:n], order)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, NovikovSeries):
            if other.ground is not self.ground and other.ground != self.ground:
                raise RingMismatchError(f"{self.ground} vs {other.ground}")
            return other
        if isinstance(other, (int, Fraction, GroundElement, TwistedElement)):
            return SeriesRing(self.ground, self.order).coerce(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        K = min(self.order, other.order)
        if not other.coeffs:
            return self if K == self.order else self.truncate(K)
        if not self.coeffs:
            return other if K == other.order else other.truncate(K)
        lo = min(self.low, other.low)
        if lo > K:
            return NovikovSeries._raw(self.ground, K + 1, (), K)
        Z = self.ground.zero
        out = [Z] * (K - lo + 1)
        for s in (self, other):
            for i, a in enumerate(s.coeffs):
                p = s.low + i - lo
                if p >= len(out):
                    break
                out[p] = out[p] + a
        return NovikovSeries.make(self.ground, lo, out, K)

    __radd__ = __add__

    def __neg__(self):
        return NovikovSeries._raw(self.ground, self.low, tuple(-a for a in self.coeffs), self.order)

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
        return _series_mul(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _series_mul(other, self)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = SeriesRing(self.ground, self.order).one
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, NovikovSeries):
            return (self.ground == other.ground and self.order == other.order
                    and self.low == other.low and self.coeffs == other.coeffs)
        if isinstance(other, (int, Fraction, GroundElement, TwistedElement)):
            try:
                return self == self._coerce(other)
            except (DomainError, RingMismatchError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.low, self.coeffs, self.order))

    # accessors

    def coefficient(self, j: int):
        if j > self.order:
            raise DomainError(f"coefficient z^{j} is beyond the known order {self.order}")
        if self.low <= j < self.low + len(self.coeffs):
            return self.coeffs[j - self.low]
        return self.ground.zero

    def coefficients(self, start: int = 0):
        """Coefficients of z^start .. z^order as a list."""
        return [self.coefficient(j) for j in range(start, self.order + 1)]

    @property
    def valuation(self):
        return self.low if self.coeffs else None

    def truncate(self, K: int) -> "NovikovSeries":
        if K > self.order:
            raise DomainError(f"cannot raise precision from {self.order} to {K}")
        return NovikovSeries.make(self.ground, self.low, self.coeffs, K)

    def polynomial(self) -> TwistedElement:
        """The stored part as a Laurent polynomial."""
        return TwistedRing(self.ground).element({self.low + i: a for i, a in enumerate(self.coeffs)})

    def inverse(self) -> "NovikovSeries":
        """Two-sided inverse when the lowest coefficient is a unit of A."""
        A = self.ground
        if not self.coeffs or not A.is_unit(self.coeffs[0]):
            lead = A.render(self.coeffs[0]) if self.coeffs else "0"
            raise ExpansionError(f"series with lowest coefficient {lead} is not invertible")
        v = self.low
        n = self.order - v + 1
        u = list(self.coeffs) + [A.zero] * max(0, n - len(self.coeffs))
        u0inv = A.inverse(u[0])
        w = [u0inv]
        for m in range(1, n):
            acc = A.zero
            for j in range(m):
                acc = acc + A.alpha(u[m - j], j) * w[j]
            # alpha^m(u0) w_m = -acc
            w.append(-(A.alpha(u0inv, m) * acc))
        # s^-1 = w z^-v, and (z^j w_j) z^-v = z^(j-v) alpha^-v(w_j)
        order = self.order - 2 * v
        coeffs = [A.alpha(c, -v) for c in w]
        return NovikovSeries.make(A, -v, coeffs, order)

    def render(self) -> str:
        body = TwistedRing(self.ground).render(self.polynomial()) if self.coeffs else ""
        k = self.order + 1
        tail = "O(1)" if k == 0 else "O(z)" if k == 1 else f"O(z^{k})"
        return join_strings([body, tail]) if body else tail

    def __repr__(self):
        return f"NovikovSeries({self.render()!r})"

    def __str__(self):
        return self.render()


def _series_mul(p: NovikovSeries, q: NovikovSeries) -> NovikovSeries:
    A = p.ground
    v1, v2 = p.low, q.low
    K = min(p.order, q.order, p.order + v2, q.order + v1)
    lo = v1 + v2
    if not p.coeffs or not q.coeffs or lo > K:
        return NovikovSeries._raw(A, K + 1, (), K)
    plain = A.is_identity_alpha
    out = [A.zero] * (K - lo + 1)
    for j, b in enumerate(q.coeffs):
        qj = v2 + j
        if lo + j > K:
            break
        for i, a in enumerate(p.coeffs):
            k = i + j
            if lo + k > K:
                break
            if a and b:
                out[k] = out[k] + (a if plain or qj == 0 else A.alpha(a, qj)) * b
    return NovikovSeries.make(A, lo, out, K)


def parse_series(s: str, ground: GroundRing, default_order: int | None = None) -> NovikovSeries:
    """Parse ``... + O(z^k)``; the tail fixes the order k-1."""
    import re

    from ..errors import ParseError
    m = re.search(r"(?:^|([+-]))\s*O\(\s*(1|z(?:\s*\^\s*(-?\d+))?)\s*\)\s*$", s)
    if m:
        if m.group(2) == "1":
            order = -1
        else:
            order = int(m.group(3)) - 1 if m.group(3) else 0
        head = s[: m.start()].strip()
    else:
        if default_order is None:
            raise ParseError(f"missing O(z^k) tail in {s!r}")
        order, head = default_order, s
    R = SeriesRing(ground, order)
    if not head:
        return R.zero
    poly = TwistedRing(ground).parse(head)
    return R.coerce(poly)
