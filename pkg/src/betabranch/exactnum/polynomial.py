"""Integer polynomials in one indeterminate."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from betabranch.errors import ParseError
from betabranch.exactnum import qpoly


class IntPolynomial:
    """Immutable integer polynomial, coefficients in ascending degree.

    >>> p = IntPolynomial.from_text("-1,-1,1")
    >>> str(p)
    'x^2 - x - 1'
    >>> p(Fraction(2))
    Fraction(1, 1)
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)
        self._hash = hash(self.coeffs)

    # construction -----------------------------------------------------
    @classmethod
    def from_text(cls, text: str) -> "IntPolynomial":
        """Parse comma-separated ascending integer coefficients."""
        parts = [s.strip() for s in text.strip().split(",")]
        try:
            return cls([int(s) for s in parts])
        except ValueError as exc:
            raise ParseError(f"malformed polynomial coefficients: {text!r}") from exc

    @classmethod
    def from_qpoly(cls, p: Sequence[Fraction]) -> "IntPolynomial":
        return cls(qpoly.to_integer(qpoly.trim(p)))

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls((0, 1))

    @classmethod
    def monomial(cls, n: int, c: int = 1) -> "IntPolynomial":
        return cls([0] * n + [c])

    # basic properties -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        """Divide by the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    def to_qpoly(self) -> tuple:
        return tuple(Fraction(c) for c in self.coeffs)

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    # evaluation ---------------------------------------------------------
    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return Fraction(acc) if isinstance(acc, int) else acc

    def sign_at(self, x: Fraction) -> int:
        """Exact sign of p(x) for rational x, in integer arithmetic."""
        x = Fraction(x)
        a, b = x.numerator, x.denominator
        acc = 0
        bp = 1
        # sum c_i a^i b^(deg-i), evaluated by Horner in a with powers of b
        for c in reversed(self.coeffs):
            acc = acc * a + c * bp
            bp *= b
        return (acc > 0) - (acc < 0)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = IntPolynomial((1,))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        """Quotient when `other` divides `self` over Z; ValueError otherwise."""
        quot, r = qpoly.divmod_(self.to_qpoly(), other.to_qpoly())
        if r or any(c.denominator != 1 for c in quot):
            raise ValueError(f"{other} does not divide {self}")
        return IntPolynomial(int(c) for c in quot)

    def divides(self, other: "IntPolynomial") -> bool:
        return not qpoly.rem(other.to_qpoly(), self.to_qpoly())

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * self.coeffs[i] for i in range(1, len(self.coeffs)))

    def gcd(self, other: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial.from_qpoly(qpoly.gcd_(self.to_qpoly(), other.to_qpoly())).primitive()

    def squarefree_part(self) -> "IntPolynomial":
        if self.degree < 1:
            return self.primitive()
        g = self.gcd(self.derivative())
        if g.degree == 0:
            return self.primitive()
        return IntPolynomial.from_qpoly(qpoly.divmod_(self.to_qpoly(), g.to_qpoly())[0]).primitive()

    def strip_x_power(self) -> tuple["IntPolynomial", int]:
        """Remove the largest power of x dividing self; return (rest, power)."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        return IntPolynomial(self.coeffs[k:]), k

    def same_up_to_unit(self, other: "IntPolynomial") -> bool:
        """Equality up to sign and content."""
        return self.primitive() == other.primitive()

    # comparison / display -----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == IntPolynomial((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        return format_poly(self.coeffs)


def _coerce(other):
    if isinstance(other, IntPolynomial):
        return other
    if isinstance(other, int):
        return IntPolynomial((other,))
    return None


def format_poly(coeffs: Sequence, var: str = "x") -> str:
    """Human-readable form, highest degree first: ``x^2 - x - 1``."""
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def cyclotomic(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial, by exact division of x^n - 1."""
    p = IntPolynomial([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            p = p.exact_div(cyclotomic(d))
    return p


def strip_cyclotomic(p: IntPolynomial, max_order: int = 12) -> IntPolynomial:
    """Remove powers of x and cyclotomic factors of order <= max_order."""
    p, _ = p.strip_x_power()
    for n in range(1, max_order + 1):
        c = cyclotomic(n)
        while p.degree >= c.degree and c.divides(p):
            p = p.exact_div(c)
    return p.primitive()
