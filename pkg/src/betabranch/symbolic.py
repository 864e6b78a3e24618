"""Rational functions of the base q, identity checks and certified signs."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence, Union

from betabranch.errors import ParseError, PoleInWindow
from betabranch.exactnum import qpoly
from betabranch.exactnum.algebraic import AlgebraicReal, Ordering, compare, isolate_real_roots
from betabranch.exactnum.polynomial import IntPolynomial, format_poly

Endpoint = Union[int, Fraction, AlgebraicReal]


class RationalFunction:
    """num(q)/den(q) with integer polynomials, kept in lowest terms.

    Canonical form: gcd(num, den) = 1 over Q, the integer coefficients of num
    and den have no common factor, and den has a positive leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _as_qpoly(num)
        den = _as_qpoly(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = IntPolynomial(()), IntPolynomial((1,))
            return
        g = qpoly.gcd_(num, den)
        if qpoly.degree(g) > 0:
            num = qpoly.divmod_(num, g)[0]
            den = qpoly.divmod_(den, g)[0]
        scale = lcm(*(c.denominator for c in num + den))
        ni = [int(c * scale) for c in num]
        di = [int(c * scale) for c in den]
        content = 0
        for c in ni + di:
            content = gcd(content, c)
        if di[-1] < 0:
            content = -content
        self.num = IntPolynomial(c // content for c in ni)
        self.den = IntPolynomial(c // content for c in di)

    # constructors -------------------------------------------------------------
    @classmethod
    def q(cls) -> "RationalFunction":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "RationalFunction":
        return cls((Fraction(c),))

    @classmethod
    def from_text(cls, text: str) -> "RationalFunction":
        """Parse 'num_coeffs/den_coeffs' (den optional), coefficients ascending."""
        parts = text.split("/")
        if len(parts) > 2 or not parts[0].strip():
            raise ParseError(f"malformed rational function: {text!r}")
        num = IntPolynomial.from_text(parts[0])
        den = IntPolynomial.from_text(parts[1]) if len(parts) == 2 else IntPolynomial((1,))
        if den.is_zero():
            raise ParseError(f"zero denominator in {text!r}")
        return cls(num, den)

    def to_text(self) -> str:
        return f"{self.num.to_text()}/{self.den.to_text()}"

    # arithmetic ---------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.const(other)
        if isinstance(other, IntPolynomial):
            return RationalFunction(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num**n, self.den**n)

    # predicates ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        """Exact value at a rational point or at a field generator."""
        if isinstance(x, AlgebraicReal):
            return x.field(self)
        if hasattr(x, "field") and hasattr(x, "rep"):
            return _eval_element(self, x)
        return self.num(Fraction(x)) / self.den(Fraction(x))

    def cleared(self) -> tuple[IntPolynomial, int]:
        """Numerator with its power of q removed: (polynomial, stripped power).

        Roots in (1, 2) of the rational function are exactly the roots of the
        returned polynomial there.
        """
        return self.num.strip_x_power()

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        n = format_poly(self.num.coeffs, "q")
        if self.den == IntPolynomial((1,)):
            return n
        return f"({n})/({format_poly(self.den.coeffs, 'q')})"


def _as_qpoly(x) -> tuple:
    if isinstance(x, IntPolynomial):
        return x.to_qpoly()
    if isinstance(x, (int, Fraction)):
        return qpoly.make((x,))
    if isinstance(x, RationalFunction):
        raise TypeError("nested rational functions are not supported")
    return qpoly.make(x)


def _eval_element(rf: RationalFunction, x):
    # rf evaluated at a field element x (not necessarily the generator)
    num = x.field(0)
    for c in reversed(rf.num.coeffs):
        num = num * x + c
    den = x.field(0)
    for c in reversed(rf.den.coeffs):
        den = den * x + c
    return num / den


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def identity_check(lhs: RationalFunction, rhs: RationalFunction) -> bool:
    """True iff lhs - rhs is the zero function."""
    return (lhs - rhs).is_zero()


def laurent(coeffs: dict[int, int]) -> RationalFunction:
    """Build sum c_e q^e from {exponent: coefficient}, negative exponents allowed."""
    low = min(min(coeffs), 0)
    num = [0] * (max(coeffs) - low + 1)
    for e, c in coeffs.items():
        num[e - low] += c
    return RationalFunction(IntPolynomial(num), IntPolynomial.monomial(-low))


# ---------------------------------------------------------------------------
# sign resolution
# ---------------------------------------------------------------------------

@dataclass
class SignResolution:
    """Certified sign information for a rational function over [lo, hi].

    verdict is 'AllPositive' or 'AllNegative' when the function has no zero
    in the open interval (zeros at the endpoints are listed in
    `boundary_roots`), 'HasRoot' when `roots` lists interior zeros, and
    'ZeroFunction' for the identically zero function.
    """

    expression: RationalFunction
    interval: tuple
    verdict: str
    roots: list = field(default_factory=list)
    boundary_roots: list = field(default_factory=list)

    @property
    def degenerate(self) -> bool:
        return self.verdict == "ZeroFunction"


def _outer(e: Endpoint, side: str) -> Fraction:
    if isinstance(e, AlgebraicReal):
        lo, hi = e.interval
        return lo if side == "lo" else hi
    return Fraction(e)


def _inner_point(lo: Endpoint, hi: Endpoint) -> Fraction:
    """A rational strictly between two distinct endpoints."""
    while True:
        a = _outer(lo, "hi")
        b = _outer(hi, "lo")
        if a < b:
            return (a + b) / 2
        for e in (lo, hi):
            if isinstance(e, AlgebraicReal):
                e.refine(4)


def _within(r: AlgebraicReal, lo: Endpoint, hi: Endpoint) -> tuple[bool, bool]:
    """(inside closed interval, on an endpoint)."""
    c_lo = compare(r, lo)
    c_hi = compare(r, hi)
    inside = c_lo != Ordering.LESS and c_hi != Ordering.GREATER
    return inside, inside and (c_lo == Ordering.EQUAL or c_hi == Ordering.EQUAL)


def resolve_sign(e: RationalFunction, interval: Sequence[Endpoint]) -> SignResolution:
    """Certify the sign of `e` on a closed interval with rational or algebraic ends."""
    lo, hi = interval
    if compare(lo, hi) == Ordering.GREATER:
        raise ValueError("empty interval")
    window = (_outer(lo, "lo"), _outer(hi, "hi"))
    if e.den.degree > 0:
        for r in isolate_real_roots(e.den, window):
            if _within(r, lo, hi)[0]:
                raise PoleInWindow()
    if e.is_zero():
        return SignResolution(e, (lo, hi), "ZeroFunction")
    interior, boundary = [], []
    if e.num.degree > 0:
        for r in isolate_real_roots(e.num, window):
            inside, on_edge = _within(r, lo, hi)
            if on_edge:
                boundary.append(r)
            elif inside:
                interior.append(r)
    if interior:
        return SignResolution(e, (lo, hi), "HasRoot", interior, boundary)
    s = _inner_point(lo, hi)
    value = e(s)
    verdict = "AllPositive" if value > 0 else "AllNegative"
    return SignResolution(e, (lo, hi), verdict, [], boundary)
