"""Sturm sequences and exact real-root isolation by bisection."""
from __future__ import annotations

from fractions import Fraction

from betabranch.exactnum import qpoly
from betabranch.exactnum.polynomial import IntPolynomial


def sturm_sequence(p: IntPolynomial) -> list[IntPolynomial]:
    """Sturm chain of a squarefree polynomial, each term rescaled positively."""
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        r = qpoly.rem(seq[-2].to_qpoly(), seq[-1].to_qpoly())
        if not r:
            break
        # positive rescaling only: from_qpoly divides by a positive content
        seq.append(IntPolynomial.from_qpoly(qpoly.neg(r)))
    return seq


def _sign_variations(seq: list[IntPolynomial], x: Fraction) -> int:
    signs = [s for s in (p.sign_at(x) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq: list[IntPolynomial], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct roots in the half-open interval (lo, hi]."""
    if hi <= lo:
        return 0
    return _sign_variations(seq, lo) - _sign_variations(seq, hi)


def count_roots_closed(p: IntPolynomial, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots of `p` in [lo, hi] (p need not be squarefree)."""
    sqf = p.squarefree_part()
    if sqf.degree < 1:
        return 0
    seq = sturm_sequence(sqf)
    extra = 1 if sqf.sign_at(lo) == 0 else 0
    return count_roots(seq, lo, hi) + extra


def cauchy_bound(p: IntPolynomial) -> Fraction:
    lead = abs(p.leading)
    return 1 + max((Fraction(abs(c), lead) for c in p.coeffs[:-1]), default=Fraction(0))


def isolating_intervals(p: IntPolynomial, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Isolate the roots of squarefree `p` in the closed window [lo, hi].

    Returns ascending (a, b) pairs.  ``a == b`` marks an exact rational root;
    otherwise p(a) and p(b) are nonzero with opposite signs and (a, b)
    contains exactly one root.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if p.degree < 1 or hi < lo:
        return []
    seq = sturm_sequence(p)
    out: list[tuple[Fraction, Fraction]] = []
    if p.sign_at(lo) == 0:
        out.append((lo, lo))
    if hi > lo:
        out.extend(_isolate_open(p, seq, lo, hi))
        if p.sign_at(hi) == 0:
            out.append((hi, hi))
    return out


def _isolate_open(p, seq, a: Fraction, b: Fraction) -> list[tuple[Fraction, Fraction]]:
    stack = [(a, b)]
    found = []
    while stack:
        a, b = stack.pop()
        n = count_roots(seq, a, b) - (1 if p.sign_at(b) == 0 else 0)
        if n == 0:
            continue
        if n == 1 and p.sign_at(a) != 0 and p.sign_at(b) != 0:
            found.append((a, b))
            continue
        m = (a + b) / 2
        if p.sign_at(m) == 0:
            found.append((m, m))
        stack.append((a, m))
        stack.append((m, b))
    found.sort()
    return found
