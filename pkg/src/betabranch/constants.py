"""Named bases: the algebraic constants that organise the range (golden, q_f).

Each constant is the unique root of its defining polynomial inside its
window.  Instances are created once per process and shared, so refinements
and field caches accumulate.
"""
from __future__ import annotations

import threading
from fractions import Fraction

from betabranch.errors import DomainError, ParseError
from betabranch.exactnum import AlgebraicReal, IntPolynomial, isolate_real_roots, parse_interval

# name -> (ascending coefficients, window)
NAMED_BASES: dict[str, tuple[tuple[int, ...], tuple[Fraction, Fraction]]] = {
    "golden": ((-1, -1, 1), (Fraction(1), Fraction(2))),
    "q1": ((-1, -1, -2, -1, -1, 0, 1), (Fraction(1), Fraction(2))),
    "q2": ((-1, 0, 0, -1, -2, 0, 1), (Fraction(1), Fraction(2))),
    "q3": ((1, -1, 0, -1, -1, 1), (Fraction(1), Fraction(2))),
    "qprime": ((-2, -2, -1, -1, 0, 1), (Fraction(1), Fraction(2))),
    "qprimeprime": ((-1, 1, -1, 1, -2, 1), (Fraction(1), Fraction(2))),
    "q4": ((-1, -1, -2, -2, -1, -1, 0, 1), (Fraction(1), Fraction(2))),
    "qcheck": ((-1, -1, -2, 0, 1), (Fraction(1), Fraction(2))),
    # x^3 - 2x^2 + x - 1; see the ledger for why not x^3 - 2x^2 - 1
    "qf": ((-1, 1, -2, 1), (Fraction(1), Fraction(2))),
}

# negative real conjugates used by the exclusion argument
CONJUGATES: dict[str, tuple[str, tuple[Fraction, Fraction]]] = {
    "q1": ("q1", (Fraction(-13, 10), Fraction(-11, 10))),
    "q2": ("q2", (Fraction(-135, 100), Fraction(-12, 10))),
}

_lock = threading.Lock()
_bases: dict[str, AlgebraicReal] = {}


def named_polynomial(name: str) -> IntPolynomial:
    try:
        return IntPolynomial(NAMED_BASES[name][0])
    except KeyError:
        raise DomainError(f"unknown named base {name!r}") from None


def base(name: str) -> AlgebraicReal:
    """Shared AlgebraicReal for a named constant."""
    with _lock:
        if name not in _bases:
            if name not in NAMED_BASES:
                raise DomainError(f"unknown named base {name!r}")
            coeffs, window = NAMED_BASES[name]
            roots = isolate_real_roots(IntPolynomial(coeffs), window)
            if len(roots) != 1:
                raise DomainError(f"{name}: expected one root in {window}, found {len(roots)}")
            r = roots[0]
            r.name = name
            _bases[name] = r
        return _bases[name]


def conjugate(name: str) -> AlgebraicReal:
    src, window = CONJUGATES[name]
    roots = isolate_real_roots(named_polynomial(src), window)
    if len(roots) != 1:
        raise DomainError(f"conjugate window for {name} does not isolate one root")
    roots[0].name = f"{name}*"
    return roots[0]


def rational_base(value) -> AlgebraicReal:
    """A rational base such as 5/3, wrapped as an algebraic real."""
    r = Fraction(value)
    return AlgebraicReal(IntPolynomial((-r.numerator, r.denominator)), r, r, name=str(r))


def parse_base(text: str) -> AlgebraicReal:
    """Named constant, a rational ('5/3'), or 'coeffs@lo,hi'."""
    text = text.strip()
    if text in NAMED_BASES:
        return base(text)
    if "@" in text:
        coeffs, window = text.split("@", 1)
        p = IntPolynomial.from_text(coeffs)
        if p.is_zero():
            raise ParseError("zero polynomial")
        roots = isolate_real_roots(p, parse_interval(window))
        if len(roots) != 1:
            raise DomainError(f"window {window} holds {len(roots)} roots, expected one")
        return roots[0]
    try:
        return rational_base(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot parse base {text!r}") from None
