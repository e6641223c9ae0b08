"""Coefficient rings A: the integers, the rationals, and Laurent group rings
Z[u1^{+-1}, ..., un^{+-1}] of free abelian groups, each with a monomial
automorphism alpha.

Elements of Z and Q are plain ``int`` and ``Fraction`` values.  Elements of a
Laurent group ring are :class:`GroundElement` instances, sparse maps from
exponent vectors to integer coefficients.

>>> A = GroundRing.laurent(1, [[-1]])
>>> u = A.gen(0)
>>> A.render(A.alpha(u * u + 3))
'3 + u1^-2'
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..errors import DomainError, ParseError, RingMismatchError

INTEGERS = "Integers"
RATIONALS = "Rationals"
LAURENT = "LaurentGroupRing"


def _int_det(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return int(det)


def _int_inverse(rows):
    n = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [a / p for a in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(tuple(int(x) for x in r[n:]) for r in m)


def _sign_of(signs, exp):
    neg = 0
    for s, e in zip(signs, exp):
        if s < 0:
            neg += e
    return -1 if neg % 2 else 1


def _image(rows, exp):
    n = len(rows)
    out = [0] * n
    for e, row in zip(exp, rows):
        if e:
            for k in range(n):
                out[k] += e * row[k]
    return tuple(out)


@lru_cache(maxsize=None)
def _alpha_power(ring: "GroundRing", power: int):
    """Images (rows, signs) of the generators under alpha**power."""
    n = ring.ngens
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    if power == 0:
        return ident, (1,) * n
    if power > 0:
        step_rows, step_signs = ring.exponents, ring.signs
    else:
        step_rows = _int_inverse(ring.exponents)
        step_signs = tuple(_sign_of(ring.signs, w) for w in step_rows)
    if abs(power) == 1:
        return step_rows, step_signs
    prev_rows, prev_signs = _alpha_power(ring, power - 1 if power > 0 else power + 1)
    rows = tuple(_image(step_rows, w) for w in prev_rows)
    signs = tuple(s * _sign_of(step_signs, w) for s, w in zip(prev_signs, prev_rows))
    return rows, signs


class GroundElement:
    """Element of a Laurent group ring: ``{exponent tuple: int}``."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: "GroundRing", terms):
        clean = {}
        for e, c in dict(terms).items():
            e = tuple(int(x) for x in e)
            if len(e) != ring.ngens:
                raise DomainError(f"exponent vector {e} has wrong length for {ring}")
            if c != int(c):
                raise DomainError(f"coefficient {c} is not an integer")
            if c:
                clean[e] = clean.get(e, 0) + int(c)
        self.ring = ring
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    def _coerce(self, other):
        if isinstance(other, GroundElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int) or (isinstance(other, Fraction) and other.denominator == 1):
            return self.ring.coerce(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        res = dict(self.terms)
        for e, c in other.terms.items():
            v = res.get(e, 0) + c
            if v:
                res[e] = v
            else:
                res.pop(e, None)
        return GroundElement._raw(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return GroundElement._raw(self.ring, {e: -c for e, c in self.terms.items()})

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
        res = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = res.get(e, 0) + c1 * c2
                if v:
                    res[e] = v
                else:
                    res.pop(e, None)
        return GroundElement._raw(self.ring, res)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, GroundElement):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * self.ring.ngens: other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if not self.terms:
                self._hash = hash(0)
            elif len(self.terms) == 1 and (0,) * self.ring.ngens in self.terms:
                self._hash = hash(self.terms[(0,) * self.ring.ngens])
            else:
                self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"GroundElement({self.ring.render(self)!r})"

    def __str__(self):
        return self.ring.render(self)


class GroundRing:
    """Descriptor of A and alpha.

    ``exponents[k]`` is the exponent vector of alpha(u_k) and ``signs[k]`` its
    sign, so alpha(u_k) = signs[k] * u^exponents[k].
    """

    __slots__ = ("kind", "ngens", "exponents", "signs", "_key")

    def __init__(self, kind: str = INTEGERS, ngens: int = 0, exponents=None, signs=None):
        if kind in (INTEGERS, RATIONALS):
            if ngens or exponents or signs:
                raise DomainError(f"{kind} carries no generators")
            exponents, signs = (), ()
        elif kind == LAURENT:
            if ngens < 1:
                raise DomainError("a Laurent group ring needs at least one generator")
            if exponents is None:
                exponents = [[int(i == j) for j in range(ngens)] for i in range(ngens)]
            exponents = tuple(tuple(int(x) for x in r) for r in exponents)
            if len(exponents) != ngens or any(len(r) != ngens for r in exponents):
                raise DomainError("alpha needs one exponent vector of length n per generator")
            if _int_det(exponents) not in (1, -1):
                raise DomainError("alpha exponent matrix must have determinant +-1")
            signs = tuple(int(s) for s in (signs if signs is not None else [1] * ngens))
            if len(signs) != ngens or any(s not in (1, -1) for s in signs):
                raise DomainError("alpha signs must be +-1, one per generator")
        else:
            raise DomainError(f"unknown ring kind {kind!r}")
        self.kind = kind
        self.ngens = ngens
        self.exponents = exponents
        self.signs = signs
        self._key = (kind, ngens, exponents, signs)

    @classmethod
    def integers(cls):
        return cls(INTEGERS)

    @classmethod
    def rationals(cls):
        return cls(RATIONALS)

    @classmethod
    def laurent(cls, ngens, exponents=None, signs=None):
        return cls(LAURENT, ngens, exponents, signs)

    def __eq__(self, other):
        return isinstance(other, GroundRing) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.kind != LAURENT:
            return f"GroundRing({self.kind})"
        return f"GroundRing({self.kind}, n={self.ngens}, alpha={self.exponents}, signs={self.signs})"

    # structure

    @property
    def field(self) -> bool:
        return self.kind == RATIONALS

    commutative = True

    @property
    def is_identity_alpha(self) -> bool:
        if self.kind != LAURENT:
            return True
        ident = tuple(tuple(int(i == j) for j in range(self.ngens)) for i in range(self.ngens))
        return self.exponents == ident and all(s == 1 for s in self.signs)

    @property
    def zero(self):
        if self.kind == INTEGERS:
            return 0
        if self.kind == RATIONALS:
            return Fraction(0)
        return GroundElement._raw(self, {})

    @property
    def one(self):
        return self.coerce(1)

    @property
    def ground(self):
        return self

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if self.kind == INTEGERS:
            if isinstance(x, bool) or not isinstance(x, (int, Fraction)) or x != int(x):
                raise DomainError(f"{x!r} is not an integer")
            return int(x)
        if self.kind == RATIONALS:
            if isinstance(x, GroundElement) or not isinstance(x, (int, Fraction)):
                raise DomainError(f"{x!r} is not rational")
            return Fraction(x)
        if isinstance(x, GroundElement):
            if x.ring != self:
                raise RingMismatchError(f"{x.ring} vs {self}")
            return x
        if isinstance(x, (int, Fraction)) and x == int(x):
            x = int(x)
            return GroundElement._raw(self, {(0,) * self.ngens: x} if x else {})
        raise DomainError(f"{x!r} does not coerce into {self}")

    def contains(self, x) -> bool:
        if self.kind == INTEGERS:
            return isinstance(x, int) and not isinstance(x, bool)
        if self.kind == RATIONALS:
            return isinstance(x, Fraction)
        return isinstance(x, GroundElement) and x.ring == self

    def gen(self, k: int):
        if self.kind != LAURENT:
            raise DomainError(f"{self.kind} has no generators")
        e = [0] * self.ngens
        e[k] = 1
        return GroundElement._raw(self, {tuple(e): 1})

    def monomial(self, exp, coeff: int = 1):
        return GroundElement(self, {tuple(exp): coeff})

    # alpha

    def alpha(self, x, power: int = 1):
        """Apply alpha**power."""
        if power == 0 or self.kind != LAURENT or not x:
            return x
        rows, signs = _alpha_power(self, power)
        out = {}
        for e, c in x.terms.items():
            img = _image(rows, e)
            out[img] = out.get(img, 0) + c * _sign_of(signs, e)
        return GroundElement._raw(self, {e: c for e, c in out.items() if c})

    # units

    def is_unit(self, x) -> bool:
        if self.kind == INTEGERS:
            return x in (1, -1)
        if self.kind == RATIONALS:
            return x != 0
        return len(x.terms) == 1 and next(iter(x.terms.values())) in (1, -1)

    def inverse(self, x):
        if not self.is_unit(x):
            raise DomainError(f"{self.render(x)} is not a unit in {self.kind}")
        if self.kind == INTEGERS:
            return x
        if self.kind == RATIONALS:
            return 1 / Fraction(x)
        (e, c), = x.terms.items()
        return GroundElement._raw(self, {tuple(-a for a in e): c})

    def divide(self, a, b):
        if self.kind == RATIONALS:
            if not b:
                raise DomainError("division by zero")
            return Fraction(a) / Fraction(b)
        if self.kind == INTEGERS:
            if not b or a % b:
                raise DomainError(f"{a}/{b} is not an integer")
            return a // b
        return a * self.inverse(b)

    # text

    def var_names(self):
        if self.kind != LAURENT:
            return {}
        names = {f"u{k + 1}": k for k in range(self.ngens)}
        if self.ngens == 1:
            names["u"] = 0
        return names

    def variable(self, name: str):
        k = self.var_names().get(name)
        if k is None:
            raise KeyError(name)
        return self.gen(k)

    def monomial_str(self, e) -> str:
        parts = []
        for k, a in enumerate(e):
            if a == 1:
                parts.append(f"u{k + 1}")
            elif a:
                parts.append(f"u{k + 1}^{a}")
        return "*".join(parts)

    def term_list(self, x):
        """Sorted (coefficient, monomial string) pairs of x."""
        if self.kind != LAURENT:
            return [(x, "")] if x else []
        return [(x.terms[e], self.monomial_str(e))
                for e in sorted(x.terms, key=lambda e: (sum(map(abs, e)), e))]

    def render(self, x) -> str:
        from .text import join_terms
        return join_terms([(c, m) for c, m in self.term_list(x)])

    def parse(self, s: str):
        from .text import parse_expression
        return parse_expression(s, self)

    # serialization

    def descriptor(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == LAURENT:
            d["generators"] = self.ngens
            d["alpha"] = {"exponents": [list(r) for r in self.exponents],
                          "signs": list(self.signs)}
        return d

    @classmethod
    def from_descriptor(cls, d: dict) -> "GroundRing":
        kind = d.get("kind")
        if kind != LAURENT:
            return cls(kind)
        alpha = d.get("alpha") or {}
        return cls(LAURENT, int(d["generators"]), alpha.get("exponents"), alpha.get("signs"))


ZZ = GroundRing.integers()
QQ = GroundRing.rationals()
