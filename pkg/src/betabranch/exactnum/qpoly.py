"""Dense univariate polynomials over Q as tuples of Fractions.

Coefficients are stored in ascending degree order with no trailing zeros; the
zero polynomial is the empty tuple.  These helpers are the arithmetic kernel
shared by :mod:`polynomial`, :mod:`roots` and :mod:`field`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

QPoly = tuple  # tuple[Fraction, ...]

ZERO: QPoly = ()
ONE: QPoly = (Fraction(1),)


def make(coeffs: Iterable) -> QPoly:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def trim(coeffs: Sequence) -> QPoly:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def degree(p: QPoly) -> int:
    return len(p) - 1


def add(a: QPoly, b: QPoly) -> QPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def neg(a: QPoly) -> QPoly:
    return tuple(-c for c in a)


def sub(a: QPoly, b: QPoly) -> QPoly:
    return add(a, neg(b))


def scale(a: QPoly, c) -> QPoly:
    if c == 0:
        return ZERO
    return tuple(x * c for x in a)


def mul(a: QPoly, b: QPoly) -> QPoly:
    if not a or not b:
        return ZERO
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def shift(a: QPoly, n: int) -> QPoly:
    """Multiply by x**n."""
    if not a:
        return ZERO
    return (Fraction(0),) * n + tuple(a)


def divmod_(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(r) - 1 < db:
        return ZERO, trim(r)
    quot = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] / lead
        quot[k] = c
        if c:
            for j in range(db + 1):
                r[k + j] -= c * b[j]
    return trim(quot), trim(r[:db])


def rem(a: QPoly, b: QPoly) -> QPoly:
    return divmod_(a, b)[1]


def monic(a: QPoly) -> QPoly:
    if not a:
        return ZERO
    lead = a[-1]
    return tuple(c / lead for c in a)


def gcd_(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def xgcd(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly, QPoly]:
    """Return (g, s, t) with s*a + t*b = g and g monic."""
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        qt, r2 = divmod_(r0, r1)
        r0, r1 = r1, r2
        s0, s1 = s1, sub(s0, mul(qt, s1))
        t0, t1 = t1, sub(t0, mul(qt, t1))
    if not r0:
        return ZERO, ZERO, ZERO
    lead = r0[-1]
    return monic(r0), scale(s0, 1 / lead), scale(t0, 1 / lead)


def derivative(a: QPoly) -> QPoly:
    return trim([i * a[i] for i in range(1, len(a))])


def evaluate(a: QPoly, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def to_integer(a: QPoly) -> tuple[int, ...]:
    """Positive rescaling of `a` to a primitive integer coefficient tuple."""
    if not a:
        return ()
    den = lcm(*(c.denominator for c in a))
    ints = [int(c * den) for c in a]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints)


def interval_eval(a: QPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of {a(x) : lo <= x <= hi} by interval Horner evaluation."""
    if not a:
        return Fraction(0), Fraction(0)
    rlo = rhi = a[-1]
    for c in reversed(a[:-1]):
        prods = (rlo * lo, rlo * hi, rhi * lo, rhi * hi)
        rlo = min(prods) + c
        rhi = max(prods) + c
    return rlo, rhi


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


def float_bounds(c: Fraction) -> tuple[float, float]:
    """Floats a <= c <= b, one ulp either side of the nearest float."""
    f = float(c)
    return _down(f), _up(f)


def float_interval_eval(a: QPoly, lo: tuple, hi: tuple) -> tuple[float, float]:
    """Outward-rounded float enclosure of {a(x) : x in [lo, hi]}.

    `lo` and `hi` are float bounds of the interval ends.  Every operation is
    widened by one ulp, which covers round-to-nearest error; the result may be
    infinite or NaN, in which case callers must fall back to exact evaluation.
    """
    xlo, xhi = lo[0], hi[1]
    rlo, rhi = float_bounds(a[-1])
    for c in reversed(a[:-1]):
        prods = (rlo * xlo, rlo * xhi, rhi * xlo, rhi * xhi)
        clo, chi = float_bounds(c)
        rlo = _down(_down(min(prods)) + clo)
        rhi = _up(_up(max(prods)) + chi)
    return rlo, rhi
