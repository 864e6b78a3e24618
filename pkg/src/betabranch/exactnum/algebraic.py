"""Real algebraic numbers given by a polynomial and an isolating interval."""
from __future__ import annotations

import threading
from enum import IntEnum
from fractions import Fraction
from typing import Callable, Optional, Union

from betabranch.errors import DomainError, ParseError, UndefinedRootSet
from betabranch.exactnum.polynomial import IntPolynomial
from betabranch.exactnum.roots import cauchy_bound, count_roots_closed, isolating_intervals

Rational = Union[int, Fraction]


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def parse_rational(text: str) -> Fraction:
    """Rational or decimal literal: '3/2', '-1.25', '7'."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed rational literal: {text!r}") from exc


def parse_interval(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"interval must be 'lo,hi': {text!r}")
    lo, hi = (parse_rational(s) for s in parts)
    if hi < lo:
        raise ParseError(f"empty interval: {text!r}")
    return lo, hi


class AlgebraicReal:
    """A real root of an integer polynomial, pinned down by a rational interval.

    The interval is refined in place by bisection (under a lock), so an
    instance can be shared freely; every refinement is nested in the last.
    A degenerate interval ``lo == hi`` means the root is that rational.
    """

    def __init__(self, defining: IntPolynomial, lo: Rational, hi: Rational, name: Optional[str] = None):
        if defining.is_zero():
            raise UndefinedRootSet()
        lo, hi = Fraction(lo), Fraction(hi)
        if hi < lo:
            raise DomainError("isolating interval is empty")
        self.defining = defining
        self.name = name
        self._sqf = defining.squarefree_part()
        self._lock = threading.RLock()
        self._field = None
        if self._sqf.sign_at(lo) == 0:
            hi = lo
        elif self._sqf.sign_at(hi) == 0:
            lo = hi
        if lo == hi:
            if self._sqf.sign_at(lo) != 0:
                raise DomainError(f"{lo} is not a root of {defining}")
        elif count_roots_closed(self._sqf, lo, hi) != 1:
            raise DomainError(f"[{lo}, {hi}] does not isolate a single root of {defining}")
        self._lo, self._hi = lo, hi
        self._sign_lo = self._sqf.sign_at(lo)
        self._initial_width = hi - lo

    # interval access ------------------------------------------------------
    @property
    def squarefree(self) -> IntPolynomial:
        return self._sqf

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        with self._lock:
            return self._lo, self._hi

    @property
    def is_rational(self) -> bool:
        return self._lo == self._hi

    def width(self) -> Fraction:
        with self._lock:
            return self._hi - self._lo

    def refine(self, steps: int = 1) -> tuple[Fraction, Fraction]:
        """Bisect the isolating interval `steps` times; return the new interval."""
        with self._lock:
            for _ in range(steps):
                if self._lo == self._hi:
                    break
                m = (self._lo + self._hi) / 2
                s = self._sqf.sign_at(m)
                if s == 0:
                    self._lo = self._hi = m
                elif s == self._sign_lo:
                    self._lo = m
                else:
                    self._hi = m
            return self._lo, self._hi

    def refine_to_width(self, width: Fraction) -> tuple[Fraction, Fraction]:
        with self._lock:
            while self._hi - self._lo > width:
                self.refine()
            return self._lo, self._hi

    enclosure = interval

    # field of definition ----------------------------------------------------
    @property
    def field(self):
        """The field Q(self), created on first use and shared afterwards."""
        with self._lock:
            if self._field is None:
                from betabranch.exactnum.field import QField

                self._field = QField(self)
            return self._field

    # comparison ---------------------------------------------------------------
    def compare(self, other) -> Ordering:
        return compare(self, other)

    def __eq__(self, other):
        if isinstance(other, (AlgebraicReal, int, Fraction)):
            return compare(self, other) == Ordering.EQUAL
        return NotImplemented

    __hash__ = None  # equality is semantic; use the defining data explicitly if needed

    def __lt__(self, other):
        return compare(self, other) == Ordering.LESS

    def __le__(self, other):
        return compare(self, other) != Ordering.GREATER

    def __gt__(self, other):
        return compare(self, other) == Ordering.GREATER

    def __ge__(self, other):
        return compare(self, other) != Ordering.LESS

    def __float__(self):
        lo, hi = self.refine_to_width(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def decimal(self, digits: int = 5) -> str:
        return refine_to_digits(self, digits)

    def __repr__(self):
        label = f"{self.name}=" if self.name else ""
        lo, hi = self.interval
        return f"AlgebraicReal({label}root of {self.defining} in [{lo}, {hi}])"

    def __str__(self):
        return self.name or self.decimal(5)


# ---------------------------------------------------------------------------
# root isolation
# ---------------------------------------------------------------------------

def isolate_real_roots(p: IntPolynomial, window: Optional[tuple[Rational, Rational]] = None) -> list[AlgebraicReal]:
    """All distinct real roots of `p` in the closed window, ascending.

    With no window every real root is returned.
    """
    if p.is_zero():
        raise UndefinedRootSet()
    sqf = p.squarefree_part()
    if sqf.degree < 1:
        return []
    if window is None:
        b = cauchy_bound(sqf)
        lo, hi = -b, b
    else:
        lo, hi = Fraction(window[0]), Fraction(window[1])
    return [AlgebraicReal(p, a, b) for a, b in isolating_intervals(sqf, lo, hi)]


# ---------------------------------------------------------------------------
# decimal output
# ---------------------------------------------------------------------------

def _format_scaled(n: int, digits: int) -> str:
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def round_half_even(x: Fraction, digits: int) -> str:
    """Decimal string of the rational `x`, rounded half-to-even."""
    return _format_scaled(round(Fraction(x) * 10**digits), digits)


def decimal_from_enclosure(
    enclosure: Callable[[], tuple[Fraction, Fraction]],
    refine: Callable[[], None],
    equals: Callable[[Fraction], bool],
    digits: int,
) -> str:
    """Certified round-half-even decimal of a value known through enclosures.

    `equals(t)` must decide exactly whether the value is the rational t; it is
    only consulted for rounding ties, where no enclosure can settle the digit.
    """
    if digits < 0:
        raise ValueError("digits must be >= 0")
    scale = 10**digits
    while True:
        lo, hi = enclosure()
        a, b = round(lo * scale), round(hi * scale)
        if a == b:
            return _format_scaled(a, digits)
        if (hi - lo) * scale < 1:
            # exactly one tie point can sit between lo and hi
            tie = (Fraction(a) + Fraction(1, 2)) / scale
            if lo <= tie <= hi and equals(tie):
                return _format_scaled(round(tie * scale), digits)
        refine()


def refine_to_digits(a, digits: int) -> str:
    """Decimal string of `a` with |error| <= 10**-digits / 2, half-even ties.

    Works for AlgebraicReal and QFieldElement values.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if isinstance(a, AlgebraicReal):
        return decimal_from_enclosure(
            lambda: a.interval,
            lambda: a.refine(4),
            lambda t: a.interval[0] <= t <= a.interval[1] and a.squarefree.sign_at(t) == 0,
            digits,
        )
    if isinstance(a, (int, Fraction)):
        return round_half_even(Fraction(a), digits)
    return a.decimal(digits)


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------

def _compare_rational(a: AlgebraicReal, r: Fraction) -> Ordering:
    while True:
        lo, hi = a.interval
        if r < lo:
            return Ordering.GREATER
        if r > hi:
            return Ordering.LESS
        if lo == hi or a.squarefree.sign_at(r) == 0:
            # r lies in an interval holding exactly one root of the defining polynomial
            return Ordering.EQUAL
        a.refine()


def _compare_algebraic(a: AlgebraicReal, b: AlgebraicReal) -> Ordering:
    if a is b:
        return Ordering.EQUAL
    if b.is_rational:
        return _compare_rational(a, b.interval[0])
    if a.is_rational:
        return Ordering(-_compare_rational(b, a.interval[0]))
    g = a.squarefree.gcd(b.squarefree)
    checked_common = False
    while True:
        alo, ahi = a.interval
        blo, bhi = b.interval
        if ahi < blo:
            return Ordering.LESS
        if bhi < alo:
            return Ordering.GREATER
        if not checked_common and g.degree >= 1:
            lo, hi = max(alo, blo), min(ahi, bhi)
            if count_roots_closed(g, lo, hi) > 0:
                # a common root in both isolating intervals is both a and b
                return Ordering.EQUAL
            checked_common = True
        if g.degree < 1:
            checked_common = True
        a.refine()
        b.refine()


def compare(a, b) -> Ordering:
    """Exact trichotomy between algebraic reals, field elements and rationals."""
    from betabranch.exactnum.field import QFieldElement

    if isinstance(a, (int, Fraction)) and not isinstance(b, (int, Fraction)):
        return Ordering(-compare(b, a))
    if isinstance(a, QFieldElement) or isinstance(b, QFieldElement):
        if not isinstance(a, QFieldElement):
            return Ordering(-compare(b, a))
        return a.compare(b)
    if isinstance(a, AlgebraicReal):
        if isinstance(b, AlgebraicReal):
            return _compare_algebraic(a, b)
        if isinstance(b, (int, Fraction)):
            return _compare_rational(a, Fraction(b))
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Ordering((a > b) - (a < b))
    raise TypeError(f"cannot compare {type(a).__name__} with {type(b).__name__}")
