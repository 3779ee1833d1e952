"""Real root isolation for low-degree polynomials via exact Sturm sequences.

Float coefficients are converted to exact rationals, so sign counts are not
affected by rounding; only the final roots are rounded back to floats.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


class ZeroPolynomialError(ValueError):
    """The polynomial is identically zero; its root set is the whole line."""


Poly = list[Fraction]  # coefficients, lowest degree first


def _strip(p: Poly) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _derivative(p: Poly) -> Poly:
    return [k * c for k, c in enumerate(p)][1:]


def _divmod(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    num = list(num)
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and num:
        shift = len(num) - len(den)
        factor = num[-1] / lead
        quot[shift] = factor
        for i, d in enumerate(den):
            num[shift + i] -= factor * d
        num = _strip(num)
    return quot, num


def _primitive(p: Poly) -> list[int]:
    # positive rescaling to coprime integers; preserves every sign
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def _sturm(p: Poly) -> list[list[int]]:
    seq = [p, _derivative(p)]
    while True:
        _, r = _divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [_primitive(q) for q in seq]


def _squarefree(p: Poly) -> Poly:
    seq = [p, _derivative(p)]
    while True:
        _, r = _divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    g = seq[-1]
    if len(g) == 1:
        return p
    q, r = _divmod(p, g)
    assert not r
    return _strip(q)


def _sign_at(p: list[int], x: Fraction) -> int:
    # sign of den^deg * p(num/den); den > 0 so the sign is that of p(x)
    num, den = x.numerator, x.denominator
    deg = len(p) - 1
    acc = 0
    for k, c in enumerate(p):
        acc += c * num**k * den ** (deg - k)
    return (acc > 0) - (acc < 0)


def _variations(seq: list[list[int]], x: Fraction) -> int:
    signs = [s for s in (_sign_at(q, x) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def real_roots_in_open_interval(
    coeffs: Sequence[float], lo: float = -1.0, hi: float = 1.0, tol: float = 1e-12
) -> list[float]:
    """Distinct real roots of ``sum_k coeffs[k] x^k`` strictly inside ``(lo, hi)``.

    Roots are isolated by Sturm counting and refined by bisection to absolute
    accuracy ``tol``. Multiple roots are reported once.
    """
    p = _strip([Fraction(c) for c in coeffs])
    if not p:
        raise ZeroPolynomialError("polynomial is identically zero")
    if len(p) == 1:
        return []
    q = _squarefree(p)
    if len(q) == 1:
        return []
    seq = _sturm(q)
    qi = seq[0]
    a0, b0 = Fraction(lo), Fraction(hi)
    half_tol = Fraction(tol) / 2

    def count(a: Fraction, b: Fraction) -> int:
        # distinct roots in (a, b]
        return _variations(seq, a) - _variations(seq, b)

    roots: list[float] = []
    stack = [(a0, b0, count(a0, b0))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            while b - a > half_tol:
                m = (a + b) / 2
                if count(a, m) == 1:
                    b = m
                else:
                    a = m
            if b == b0 and _sign_at(qi, b0) == 0:
                continue  # the root sits on the excluded upper end
            roots.append(float(b) if _sign_at(qi, b) == 0 else float((a + b) / 2))
            continue
        m = (a + b) / 2
        stack.append((m, b, count(m, b)))
        stack.append((a, m, count(a, m)))
    return sorted(roots)
