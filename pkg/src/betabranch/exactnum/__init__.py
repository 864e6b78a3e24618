"""Exact arithmetic: rationals, integer polynomials, algebraic reals, Q(q)."""
from fractions import Fraction

from betabranch.exactnum.algebraic import (
    AlgebraicReal,
    Ordering,
    compare,
    isolate_real_roots,
    parse_interval,
    parse_rational,
    refine_to_digits,
    round_half_even,
)
from betabranch.exactnum.field import ExactMemo, QField, QFieldElement
from betabranch.exactnum.polynomial import IntPolynomial, cyclotomic, strip_cyclotomic
from betabranch.exactnum.roots import count_roots_closed, sturm_sequence

Rational = Fraction


def field_arith(x: QFieldElement, y: QFieldElement, op: str) -> QFieldElement:
    """Apply one of 'add', 'sub', 'mul', 'div' to two elements of one field."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown field operation {op!r}")


__all__ = [
    "AlgebraicReal",
    "ExactMemo",
    "Fraction",
    "IntPolynomial",
    "Ordering",
    "QField",
    "QFieldElement",
    "Rational",
    "compare",
    "count_roots_closed",
    "cyclotomic",
    "field_arith",
    "isolate_real_roots",
    "parse_interval",
    "parse_rational",
    "refine_to_digits",
    "round_half_even",
    "strip_cyclotomic",
    "sturm_sequence",
]
