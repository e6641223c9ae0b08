"""Slow reference computations that share no code with the main paths.

* rewrite_coefficient expands z h_F (z h_D)^(j-1) c entry by entry as words
  in z and ground elements and normalizes each word by the rewrite rule
  a z -> z alpha(a), one step at a time.
* torsion_trace_series uses det(1 - z h)^-1 = exp(sum_k tr(h^k) z^k / k)
  with exact rationals, so it never computes a determinant.
* geometric_fraction_series expands p/q by long division.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .rings import INTEGERS, RATIONALS


def _normalize(word, A):
    """Move every z to the front of a word of 'z' and ground elements; return (power, coefficient)."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        for n in range(len(w) - 1):
            if w[n] != "z" and w[n + 1] == "z":
                w[n], w[n + 1] = "z", A.alpha(w[n], 1)
                changed = True
    power = 0
    while power < len(w) and w[power] == "z":
        power += 1
    coeff = A.one
    for x in w[power:]:
        coeff = coeff * x
    return power, coeff


def rewrite_coefficient(fd, i: int, j: int):
    """Rows of the z^j coefficient of the deformed differential in degree i."""
    A = fd.ring
    F = fd.F
    nrow, ncol = F.rank(i - 1), F.rank(i)
    if j == 0:
        return [list(r) for r in fd.F.d(i).rows]
    hF, hD, c = fd.hF(i - 1), fd.hD(i - 1), fd.cmat(i)
    n = hD.nrows
    out = [[A.zero] * ncol for _ in range(nrow)]
    for a in range(nrow):
        for b in range(ncol):
            acc = A.zero
            for path in product(range(n), repeat=j):
                # z hF[a,p0] z hD[p0,p1] ... z hD[p_{j-2},p_{j-1}] c[p_{j-1},b]
                factors = [hF[a, path[0]]] + [hD[path[t], path[t + 1]] for t in range(j - 1)] + [c[path[-1], b]]
                if any(not x for x in factors):
                    continue
                word = []
                for x in factors[:-1]:
                    word += ["z", x]
                word.append(factors[-1])
                power, coeff = _normalize(word, A)
                assert power == j
                acc = acc + coeff
            out[a][b] = acc
    return out


def _mat_mul(X, Y):
    return [[sum((X[r][k] * Y[k][s] for k in range(len(Y))), Fraction(0)) for s in range(len(Y[0]))]
            for r in range(len(X))]


def _series_exp(a, K):
    """exp of a power series with a[0] = 0, via n e_n = sum_k k a_k e_(n-k)."""
    e = [Fraction(1)] + [Fraction(0)] * K
    for n in range(1, K + 1):
        e[n] = sum((k * a[k] * e[n - k] for k in range(1, n + 1)), Fraction(0)) / n
    return e


def torsion_trace_series(fd, K: int):
    """Coefficients 0..K of prod_i det(1 - z h_D,i)^((-1)^(i+1)) over Z or Q."""
    A = fd.ring
    if A.kind not in (INTEGERS, RATIONALS):
        raise ValueError("the trace oracle works over Z and Q")
    log = [Fraction(0)] * (K + 1)
    for i in fd.D.degrees():
        h = [[Fraction(x) for x in row] for row in fd.hD(i).rows]
        if not h:
            continue
        sign = 1 if i % 2 == 0 else -1
        power = h
        for k in range(1, K + 1):
            log[k] += sign * sum(power[t][t] for t in range(len(h))) / k
            power = _mat_mul(power, h)
    return _series_exp(log, K)


def geometric_fraction_series(num, den, K: int):
    """Coefficients 0..K of num/den for integer coefficient lists with den[0] != 0."""
    num = [Fraction(x) for x in num] + [Fraction(0)] * (K + 1)
    out = []
    for n in range(K + 1):
        s = num[n] - sum((den[k] * out[n - k] for k in range(1, min(n, len(den) - 1) + 1)), Fraction(0))
        out.append(s / den[0])
    return out


__all__ = ["rewrite_coefficient", "torsion_trace_series", "geometric_fraction_series"]
