"""Digit sequences, the coding map, the two digit maps and region geometry.

All values live in the field generated by the base q.  Points carry a short
provenance string so that orbit reports stay readable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from betabranch.errors import DomainError, LemmaCRangeError, MapNotApplicable, ParseError
from betabranch.exactnum import AlgebraicReal, IntPolynomial, Ordering, QFieldElement, compare
from betabranch.symbolic import RationalFunction


# ---------------------------------------------------------------------------
# digit words
# ---------------------------------------------------------------------------

def _primitive_root(w: str) -> str:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w


@dataclass(frozen=True)
class EventuallyPeriodic:
    """The word pre + per^inf in canonical form; an empty period means a finite word.

    >>> str(EventuallyPeriodic("11", "0101"))
    '1|10'
    """

    preperiod: str
    period: str = ""

    def __post_init__(self):
        pre, per = self.preperiod, self.period
        if set(pre + per) - {"0", "1"}:
            raise ParseError(f"digits must be 0 or 1: {pre!r}|{per!r}")
        if per:
            per = _primitive_root(per)
            while pre and pre[-1] == per[-1]:
                pre = pre[:-1]
                per = per[-1] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def from_text(cls, text: str) -> "EventuallyPeriodic":
        if text.count("|") != 1:
            raise ParseError(f"digit word must look like 'pre|period': {text!r}")
        pre, per = text.split("|")
        return cls(pre.strip(), per.strip())

    @property
    def is_finite(self) -> bool:
        return not self.period

    def digit(self, i: int) -> int:
        """The i-th digit, counting from 1."""
        if i <= len(self.preperiod):
            return int(self.preperiod[i - 1])
        if not self.period:
            return 0
        j = (i - len(self.preperiod) - 1) % len(self.period)
        return int(self.period[j])

    def prefix(self, n: int) -> str:
        return "".join(str(self.digit(i)) for i in range(1, n + 1))

    def shift(self) -> "EventuallyPeriodic":
        if self.preperiod:
            return EventuallyPeriodic(self.preperiod[1:], self.period)
        if not self.period:
            return self
        return EventuallyPeriodic("", self.period[1:] + self.period[0])

    def __str__(self):
        return f"{self.preperiod}|{self.period}"


def pi_rf(w: EventuallyPeriodic) -> RationalFunction:
    """Coding-map value of w as a rational function of q."""
    q = RationalFunction.q()
    n, L = len(w.preperiod), len(w.period)
    head = IntPolynomial([int(d) for d in reversed(w.preperiod)])  # sum d_i q^(n-i)
    value = RationalFunction(head) / q**n
    if L:
        tail = IntPolynomial([int(d) for d in reversed(w.period)])
        value = value + RationalFunction(tail) / (q**n * (q**L - 1))
    return value


def pi_value(w: EventuallyPeriodic, q: AlgebraicReal) -> QFieldElement:
    return q.field(pi_rf(w))


# ---------------------------------------------------------------------------
# points and special values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointSpec:
    value: QFieldElement
    provenance: str = ""

    def __str__(self):
        return self.provenance or self.value.decimal(5)


def _endpoints(q: AlgebraicReal) -> dict[str, QFieldElement]:
    F = q.field

    def build():
        g = F.gen
        return {
            "inv_q": 1 / g,
            "j_lo": (g + g * g) / (g**4 - 1),
            "j_hi": (1 + g**3) / (g**4 - 1),
            "s_hi": 1 / (g * g - g),
            "top": 1 / (g - 1),
        }

    return F.cached("endpoints", build)


def endpoints(q: AlgebraicReal) -> dict[str, QFieldElement]:
    """1/q, the two ends of J, 1/(q^2-q) and 1/(q-1) as field elements."""
    return dict(_endpoints(q))


def point(value, q: AlgebraicReal, provenance: str = "") -> PointSpec:
    if isinstance(value, PointSpec):
        return value
    if isinstance(value, RationalFunction):
        return PointSpec(q.field(value), provenance or str(value))
    return PointSpec(q.field(value), provenance or str(value))


def make_y(j: int, q: AlgebraicReal) -> PointSpec:
    if j < 1:
        raise DomainError("j must be >= 1")
    return PointSpec(pi_value(EventuallyPeriodic("0" + "1" * j, "10"), q), f"y_{j}")


def make_z(j: int, q: AlgebraicReal) -> PointSpec:
    if j < 1:
        raise DomainError("j must be >= 1")
    return PointSpec(pi_value(EventuallyPeriodic("1" + "0" * j, "01"), q), f"z_{j}")


def y_rf(j: int) -> RationalFunction:
    return pi_rf(EventuallyPeriodic("0" + "1" * j, "10"))


def z_rf(j: int) -> RationalFunction:
    return pi_rf(EventuallyPeriodic("1" + "0" * j, "01"))


# ---------------------------------------------------------------------------
# digit maps
# ---------------------------------------------------------------------------

def _apply(value: QFieldElement, digit: int, q: AlgebraicReal) -> QFieldElement:
    ends = _endpoints(q)
    if digit == 0:
        if value > ends["s_hi"]:
            raise MapNotApplicable("map not applicable: T0 needs x <= 1/(q^2-q)")
        return value * q.field.gen
    if digit == 1:
        if value < ends["inv_q"]:
            raise MapNotApplicable("map not applicable: T1 needs x >= 1/q")
        return value * q.field.gen - 1
    raise ValueError("digit must be 0 or 1")


def t_apply(x: PointSpec, digit: int, q: AlgebraicReal) -> PointSpec:
    """T0(x) = qx or T1(x) = qx - 1, with the domain checked exactly."""
    return PointSpec(_apply(x.value, digit, q), f"T{digit}({x})")


def apply_word(x: PointSpec, word, q: AlgebraicReal) -> PointSpec:
    """Apply digits left to right (the first digit acts first)."""
    v = x.value
    for d in word:
        v = _apply(v, int(d), q)
    return PointSpec(v, f"{format_word(word)}({x})")


def format_word(word) -> str:
    """Composition notation, last map leftmost: (1,0,0,0) -> 'T0^3 T1'."""
    digits = [int(d) for d in word]
    if not digits:
        return "id"
    parts = []
    for d in reversed(digits):
        if parts and parts[-1][0] == d:
            parts[-1][1] += 1
        else:
            parts.append([d, 1])
    return " ".join(f"T{d}" + (f"^{n}" if n > 1 else "") for d, n in parts)


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """Region tag plus, for each containing set, where the point sits in it."""

    tag: str
    flags: dict = field(default_factory=dict, hash=False, compare=False)

    @property
    def in_switch(self) -> bool:
        return self.tag in ("SJL", "J", "SJR")

    @property
    def in_j(self) -> bool:
        return self.tag == "J"

    def __str__(self):
        return self.tag


def _edge(x, lo, hi) -> str:
    if compare(x, lo) == Ordering.EQUAL:
        return "OnLeftEdge"
    if compare(x, hi) == Ordering.EQUAL:
        return "OnRightEdge"
    return "Interior"


def region_of(x: PointSpec, q: AlgebraicReal) -> Region:
    v = x.value if isinstance(x, PointSpec) else x
    e = _endpoints(q)
    if v.sign() < 0 or v > e["top"]:
        raise DomainError(f"point {x} lies outside I_q")
    flags = {"I": _edge(v, v.field(0), e["top"])}
    if v < e["inv_q"]:
        tag = "L"
        flags["L"] = "OnLeftEdge" if v.is_zero() else "Interior"
    elif v > e["s_hi"]:
        tag = "R"
        flags["R"] = "OnRightEdge" if v == e["top"] else "Interior"
    else:
        flags["S"] = _edge(v, e["inv_q"], e["s_hi"])
        if v < e["j_lo"]:
            tag = "SJL"
        elif v > e["j_hi"]:
            tag = "SJR"
        else:
            tag = "J"
            flags["J"] = _edge(v, e["j_lo"], e["j_hi"])
    return Region(tag, flags)


def in_switch(v: QFieldElement, q: AlgebraicReal) -> bool:
    e = _endpoints(q)
    return e["inv_q"] <= v <= e["s_hi"]


# ---------------------------------------------------------------------------
# unique expansions
# ---------------------------------------------------------------------------

def lemma_c_range_check(q: AlgebraicReal) -> None:
    from betabranch.constants import base

    if not (compare(q, base("golden")) == Ordering.GREATER and compare(q, base("qf")) == Ordering.LESS):
        raise LemmaCRangeError()


def _uq_constants(q: AlgebraicReal) -> dict:
    F = q.field

    def build():
        g = F.gen
        unit = 1 / (g * g - 1)
        return {"inv": 1 / g, "unit": unit, "alt": g * unit, "log_q": math.log(float(q))}

    return F.cached("uq", build)


def geometric_index(d: QFieldElement, scale: QFieldElement, q: AlgebraicReal, start: int = 0) -> Optional[int]:
    """The k >= start with d == scale * q^-k, or None.

    A float estimate of log(scale/d)/log(q) lands within 1e-6 of k when an
    exact k exists, so only the nearest integers are tested exactly.  The
    plain scan is kept for the rare cases where floats are unreliable.
    """
    if d.sign() <= 0:
        return None
    c = _uq_constants(q)
    try:
        est = math.log(float(scale) / float(d)) / c["log_q"]
    except (ValueError, OverflowError, ZeroDivisionError):
        est = None
    if est is not None and math.isfinite(est) and est < 4000:
        k = round(est)
        if k < start or abs(est - k) > 1e-6:
            return None
        return k if scale * c["inv"] ** k == d else None
    inv = c["inv"]
    t = scale * inv**start
    k = start
    while True:
        o = t.compare(d)
        if o == Ordering.EQUAL:
            return k
        if o == Ordering.LESS:
            return None
        t = t * inv
        k += 1


def uq_form(x: PointSpec, q: AlgebraicReal) -> Optional[str]:
    """Name of the unique-expansion closed form equal to x, or None."""
    v = x.value
    top = _endpoints(q)["top"]
    if v.is_zero():
        return "0"
    if v == top:
        return "1/(q-1)"
    c = _uq_constants(q)
    k = geometric_index(v, c["alt"], q)  # alt is the value of (10)^inf
    if k is not None:
        return f"0^{k}(10)^inf"
    k = geometric_index(top - v, c["unit"], q)
    if k is not None:
        return f"1^{k}(10)^inf"
    return None


def uq_membership(x: PointSpec, q: AlgebraicReal) -> bool:
    """Whether x has a unique q-expansion (valid for golden < q < q_f)."""
    lemma_c_range_check(q)
    return uq_form(x, q) is not None


def special_form(v: QFieldElement, q: AlgebraicReal) -> Optional[str]:
    """Which of y_j, z_j, 1/q, 1/(q^2-q) equals v, if any.

    Uses 1/(q^2-q) - y_j = z_j - 1/q = q^-(j+1)/(q^2-1).
    """
    e = _endpoints(q)
    if v == e["inv_q"]:
        return "1/q"
    if v == e["s_hi"]:
        return "1/(q^2-q)"
    unit = _uq_constants(q)["unit"]
    k = geometric_index(e["s_hi"] - v, unit, q, start=2)
    if k is not None:
        return f"y_{k - 1}"
    k = geometric_index(v - e["inv_q"], unit, q, start=2)
    if k is not None:
        return f"z_{k - 1}"
    return None


# ---------------------------------------------------------------------------
# greedy and lazy expansions
# ---------------------------------------------------------------------------

def greedy_expansion(x: PointSpec, q: AlgebraicReal, length: int) -> str:
    e = _endpoints(q)
    v = x.value
    out = []
    for _ in range(length):
        d = 1 if v >= e["inv_q"] else 0
        out.append(str(d))
        v = _apply(v, d, q)
    return "".join(out)


def lazy_expansion(x: PointSpec, q: AlgebraicReal, length: int) -> str:
    e = _endpoints(q)
    v = x.value
    out = []
    for _ in range(length):
        d = 0 if v <= e["s_hi"] else 1
        out.append(str(d))
        v = _apply(v, d, q)
    return "".join(out)


def parse_point(text: str, q: AlgebraicReal) -> PointSpec:
    """'one', 'zero', 'y:<j>', 'z:<j>', 'pi:<pre|per>', a rational, or 'num/den' coefficients."""
    text = text.strip()
    if text in ("one", "1"):
        return PointSpec(q.field(1), "1")
    if text in ("zero", "0"):
        return PointSpec(q.field(0), "0")
    head, _, rest = text.partition(":")
    if head in ("y", "z") and rest:
        try:
            j = int(rest)
        except ValueError:
            raise ParseError(f"bad index in {text!r}") from None
        return make_y(j, q) if head == "y" else make_z(j, q)
    if head == "pi" and rest:
        w = EventuallyPeriodic.from_text(rest)
        return PointSpec(pi_value(w, q), f"pi({w})")
    if "," in text:
        return PointSpec(q.field(RationalFunction.from_text(text)), text)
    try:
        return PointSpec(q.field(Fraction(text)), text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot parse point {text!r}") from None
