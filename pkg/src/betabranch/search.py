"""Orbit equations, their algebraic solutions and the search for countable bases.

An orbit equation says that a word of digit maps sends one special point
(y_j, z_j, 1/q or 1/(q^2-q)) onto another.  Both sides are rational
functions of q, so the equation holds at q exactly when q is a root of the
numerator of their difference.  The bases where some special point is a null
infinite point are found among those roots and then confirmed by an exact
cycle certificate.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from betabranch.branching import cycle_certificate_check, is_null_infinite
from betabranch.constants import base
from betabranch.errors import DegenerateEquation, DomainError
from betabranch.exactnum import AlgebraicReal, IntPolynomial, Ordering, compare, isolate_real_roots, strip_cyclotomic
from betabranch.expansions import format_word, make_y, make_z, y_rf, z_rf
from betabranch.symbolic import RationalFunction, resolve_sign

TABLE_WINDOW = (Fraction(8, 5), Fraction(7, 4))


# ---------------------------------------------------------------------------
# symbolic orbits
# ---------------------------------------------------------------------------

def point_rf(name: str) -> RationalFunction:
    """'y3', 'z6', '1/q' or '1/(q^2-q)' as a rational function of q."""
    q = RationalFunction.q()
    if name == "1/q":
        return 1 / q
    if name == "1/(q^2-q)":
        return 1 / (q * q - q)
    if name[:1] in ("y", "z") and name[1:].isdigit():
        j = int(name[1:])
        return y_rf(j) if name[0] == "y" else z_rf(j)
    raise ValueError(f"unknown special point {name!r}")


def symbolic_orbit(start: str, word: Sequence[int]) -> RationalFunction:
    """Image of a special point under the digit maps in `word` (first digit first)."""
    q = RationalFunction.q()
    v = point_rf(start)
    for d in word:
        v = q * v - int(d)
    return v


def _pretty(name: str) -> str:
    if name[:1] in ("y", "z") and name[1:].isdigit():
        return f"{name[0]}_{name[1:]}"
    return name


@dataclass(frozen=True)
class CandidateEquation:
    """word(start) = target, e.g. start='y2', word=(1,0,0), target='y4'."""

    start: str
    word: tuple
    target: str

    @property
    def k(self) -> Optional[int]:
        t = self.target
        return int(t[1:]) if t[:1] in ("y", "z") else None

    @property
    def lhs(self) -> RationalFunction:
        return symbolic_orbit(self.start, self.word)

    @property
    def rhs(self) -> RationalFunction:
        return point_rf(self.target)

    @property
    def cleared(self) -> IntPolynomial:
        """Numerator of lhs - rhs with its power of q removed."""
        num, _ = (self.lhs - self.rhs).cleared()
        if num.is_zero():
            raise DegenerateEquation()
        return num.primitive()

    @property
    def polynomial(self) -> IntPolynomial:
        """`cleared` without cyclotomic factors (they have no roots in (1, 2))."""
        return strip_cyclotomic(self.cleared)

    def holds_at(self, q: AlgebraicReal) -> bool:
        return q.field(self.lhs - self.rhs).is_zero()

    def mirror(self) -> "CandidateEquation":
        """The reflected equation (y <-> z, T0 <-> T1, 1/q <-> 1/(q^2-q))."""
        return CandidateEquation(_mirror_point(self.start), tuple(1 - d for d in self.word), _mirror_point(self.target))

    def __str__(self):
        return f"{format_word(self.word)}({_pretty(self.start)}) = {_pretty(self.target)}"


def _mirror_point(name: str) -> str:
    if name == "1/q":
        return "1/(q^2-q)"
    if name == "1/(q^2-q)":
        return "1/q"
    return ("z" if name[0] == "y" else "y") + name[1:]


@dataclass(frozen=True)
class CompositeEquation:
    """Several orbit equations that must hold at the same base."""

    parts: tuple

    @property
    def k(self) -> Optional[int]:
        return None

    @property
    def polynomial(self) -> IntPolynomial:
        g = self.parts[0].polynomial
        for p in self.parts[1:]:
            g = g.gcd(p.polynomial)
        return g

    def holds_at(self, q: AlgebraicReal) -> bool:
        return all(p.holds_at(q) for p in self.parts)

    def __str__(self):
        return ", ".join(str(p) for p in self.parts)


# ---------------------------------------------------------------------------
# solving and table rows
# ---------------------------------------------------------------------------

@dataclass
class TableRow:
    equation: object
    k: Optional[int]
    root: Optional[AlgebraicReal]
    root_decimal: Optional[str]
    polynomial: IntPolynomial
    printed_polynomial: Optional[IntPolynomial] = None
    printed_decimal: Optional[str] = None
    agreement: Optional[str] = None
    printed_polynomial_vanishes: Optional[bool] = None
    other_roots: list = field(default_factory=list)
    table: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "equation": str(self.equation),
            "k": self.k,
            "polynomial": list(self.polynomial.coeffs),
            "root_5dp": self.root_decimal,
            "paper_polynomial": list(self.printed_polynomial.coeffs) if self.printed_polynomial is not None else None,
            "paper_root_5dp": self.printed_decimal,
            "agreement": self.agreement,
            "certificate": None,
        }


def _outer(e) -> tuple[Fraction, Fraction]:
    if isinstance(e, AlgebraicReal):
        return e.interval
    return Fraction(e), Fraction(e)


def roots_in(p: IntPolynomial, window) -> list[AlgebraicReal]:
    """Roots of p in the closed window; endpoints may be algebraic."""
    lo, hi = window
    outer = (_outer(lo)[0], _outer(hi)[1])
    return [r for r in isolate_real_roots(p, outer) if compare(r, lo) != Ordering.LESS and compare(r, hi) != Ordering.GREATER]


def solve_equation(eq, window=TABLE_WINDOW) -> list[TableRow]:
    """One row per root of the equation's polynomial inside the window."""
    poly = eq.polynomial
    if poly.is_zero():
        raise DegenerateEquation()
    rows = []
    for r in roots_in(poly, window):
        rows.append(TableRow(eq, eq.k, r, r.decimal(5), poly))
    return rows


def _agreement(row: TableRow) -> None:
    p = row.printed_polynomial
    digits = len(row.printed_decimal.split(".")[1])
    dec_ok = row.root is not None and row.root.decimal(digits) == row.printed_decimal
    poly_ok = p.same_up_to_unit(row.polynomial)
    row.printed_polynomial_vanishes = row.root is not None and row.root.field(p).is_zero()
    if poly_ok and dec_ok:
        row.agreement = "Match"
    elif not poly_ok:
        row.agreement = "PolynomialMismatch"
    else:
        row.agreement = "DecimalMismatch"


def _desc(*coeffs: int) -> IntPolynomial:
    return IntPolynomial(reversed(coeffs))


def _eq(start: str, word: str, target: str) -> CandidateEquation:
    return CandidateEquation(start, tuple(int(c) for c in word), target)


# (equation, printed decimal, printed polynomial with descending coefficients)
PRINTED_TABLES: dict[int, list] = {
    1: [
        (_eq("y2", "100", "y4"), "1.65027", _desc(1, -1, -1, -1, 1)),
        (_eq("y2", "100", "y5"), "1.63923", _desc(1, 0, -2, -2, 0, 1, 1)),
        (_eq("y2", "10010", "y1"), "1.65637", _desc(1, 0, -2, -1, -1, -1)),
        (_eq("y2", "10010", "y2"), "1.64308", _desc(1, -1, -1, 0, 0, -1)),
        (_eq("y2", "10010", "y3"), "1.63420", _desc(1, 0, -2, -1, 0, -1, -1, -1)),
        (_eq("y2", "10010", "z1"), "1.64114", _desc(1, -1, -1)),
        (_eq("y2", "10010", "z2"), "1.65363", _desc(1, 0, -2, -1, 0, 1)),
        (_eq("y2", "10010", "z3"), "1.66065", _desc(1, -1, -1, 0, 0, 1)),
    ],
    2: [
        (_eq("y3", "10", "z4"), "1.66041", _desc(1, -1, 0, -1, -1, 0, -1)),
        (_eq("y3", "10", "z5"), "1.66883", _desc(1, 0, -1, -1, -2, -1, -1, -1, -1)),
        (_eq("y3", "10", "z6"), "1.67365", _desc(1, -2, 1, -1, 1, -1)),
        (_eq("y3", "10", "z7"), "1.67644", _desc(1, 0, -1, -1, -2, -1, -1, -1, -1, -1, -1)),
        (_eq("y3", "10", "1/q"), "1.68042", _desc(1, -1, -1, 0, -1, 1)),
        (_eq("y3", "1001", "y1"), "1.68042", _desc(1, -1, -1, 0, -1, 1)),
        (_eq("y3", "1001", "y2"), "1.65963", _desc(1, 0, -2, -1, -1, 0, 1, 1)),
        (_eq("y3", "1001", "y3"), "1.64541", _desc(1, 0, -1, -1, -2, -1, -1)),
        (_eq("y3", "1001", "z1"), "1.65462", _desc(1, 0, -2, -1, 0, 0, -1)),
        (_eq("y3", "1001", "z2"), "1.67365", _desc(1, -2, 1, -1, 1, -1)),
        (_eq("y3", "1001", "z3"), "1.68400", _desc(1, 0, -2, -1, 0, 0, -1, -1, -1)),
    ],
    3: [
        (_eq("y1", "1000", "y1"), "1.68042", _desc(1, -1, -1, 0, -1, 1)),
        (_eq("y1", "1000", "y2"), "1.65963", _desc(1, 0, -2, -1, -1, 0, 1, 1)),
        (_eq("y1", "1000", "y3"), "1.64541", _desc(1, 0, -1, -1, -2, -1, -1)),
        (_eq("y1", "1000", "z1"), "1.65462", _desc(1, 0, -2, -1, 0, 0, -1)),
        (_eq("y1", "1000", "z2"), "1.67365", _desc(1, -2, 1, -1, 1, -1)),
        (_eq("y1", "1000", "z3"), "1.68400", _desc(1, 0, -2, -1, 0, 0, -1, -1, -1)),
        (_eq("y2", "100", "y1"), "1.72208", _desc(1, -1, -1, -1, 1)),
        (_eq("y2", "100", "y2"), "1.68929", _desc(1, 0, -2, -2, 0, 1, 1)),
        (_eq("y2", "100", "y3"), "1.6663", _desc(1, -1, -1, -1, 1, 0, 1)),
        (_eq("y2", "100", "z1"), "1.67602", _desc(1, 0, -2, -1, 0, -1)),
        (_eq("y2", "100", "z2"), "1.7049", _desc(1, -1, -1, 0, 0, -1)),
        (_eq("y2", "100", "z3"), "1.72004", _desc(1, 0, -2, -1, 0, -1, -1, -1)),
        (_eq("y3", "10", "z3"), "1.64541", _desc(1, 0, -1, -1, -2, -1, -1)),
        (
            CompositeEquation((_eq("y3", "10", "z6"), _eq("z6", "01", "z2"))),
            "1.67365",
            _desc(1, -2, 1, -1, 1, -1),
        ),
        (
            CompositeEquation((_eq("y3", "10", "1/q"), _eq("1/q", "01", "y1"))),
            "1.68042",
            _desc(1, -1, -1, 0, -1, 1),
        ),
    ],
}


def emit_tables(which: int) -> list[TableRow]:
    """Recompute every printed row and compare it with the printed values."""
    if which not in PRINTED_TABLES:
        raise DomainError("table must be 1, 2 or 3")
    out = []
    for eq, dec, poly in PRINTED_TABLES[which]:
        rows = solve_equation(eq, TABLE_WINDOW)
        target = Fraction(dec)
        if rows:
            rows.sort(key=lambda r: abs(Fraction(r.root.interval[0]) - target))
            row = rows[0]
            row.other_roots = [r.root for r in rows[1:]]
        else:
            row = TableRow(eq, eq.k, None, None, eq.polynomial)
        row.printed_polynomial = poly
        row.printed_decimal = dec
        row.table = which
        _agreement(row)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# candidate families
# ---------------------------------------------------------------------------

J_TARGETS = ("y1", "y2", "y3", "z1", "z2", "z3")

# (name, start, word, targets); escape first stages carry open-ended k ranges
FAMILIES = [
    ("y1", "y1", (1, 0, 0, 0), J_TARGETS),
    ("y2", "y2", (1, 0, 0), J_TARGETS),
    ("y2-escape", "y2", (1, 0, 0, 1, 0), J_TARGETS),
    ("y3", "y3", (1, 0), J_TARGETS),
    ("y3-escape", "y3", (1, 0, 0, 1), J_TARGETS),
]

# first stage of the escapes: the landing point must be y_k (k >= 4) or an endpoint
ESCAPE_STAGES = {
    "y2-escape": ("y2", (1, 0, 0), "y", "1/(q^2-q)"),
    "y3-escape": ("y3", (1, 0), "z", "1/q"),
}

K_CAP = 64


@dataclass
class KRange:
    feasible: list
    endpoint_target: bool
    reaches_cap: bool


def feasible_k(family: str, window, kmin: int = 4, kmax: int = K_CAP) -> KRange:
    """Indices k for which the escape landing equation has a root in the window.

    The sign of lhs - rhs_k is resolved exactly on the window for every k up
    to the cap; `reaches_cap` reports that roots persist up to the cap (they
    then accumulate at a window end).
    """
    start, word, letter, endpoint = ESCAPE_STAGES[family]
    lhs = symbolic_orbit(start, word)
    found = []
    for k in range(kmin, kmax + 1):
        res = resolve_sign(lhs - point_rf(f"{letter}{k}"), window)
        if res.roots or res.boundary_roots:
            found.append(k)
    end = resolve_sign(lhs - point_rf(endpoint), window)
    return KRange(found, bool(end.roots or end.boundary_roots), kmax in found)


def enumerate_candidates(window=None, mirrors: bool = False) -> list:
    """Equations whose roots contain every base in the window with a null infinite point.

    A null infinite special point must return to the finite set
    {y_j, z_j : j <= 3} after the word of its family; the escape families
    add the requirement that the intermediate landing point is special too,
    which is checked later by the cycle search, so the second stage alone
    gives a superset of the candidates.
    """
    out = []
    seen = set()
    for _, start, word, targets in FAMILIES:
        for t in targets:
            eq = CandidateEquation(start, word, t)
            for e in (eq, eq.mirror()) if mirrors else (eq,):
                key = e.polynomial
                if key in seen and not mirrors:
                    continue
                seen.add(key)
                if window is not None and not roots_in(e.polynomial, window):
                    continue
                out.append(e)
    return out


# ---------------------------------------------------------------------------
# the countable-base search
# ---------------------------------------------------------------------------

SEEDS = ("y1", "y2", "y3", "z1", "z2", "z3")


@dataclass
class BaseCertificate:
    root: AlgebraicReal
    polynomial: IntPolynomial
    equations: list
    seed: Optional[str]
    w_form: Optional[str]
    b: Optional[tuple]
    verified: bool
    seed_results: dict = field(default_factory=dict)
    name: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "root_5dp": self.root.decimal(5),
            "polynomial": list(self.polynomial.coeffs),
            "equations": [str(e) for e in self.equations],
            "seed": self.seed,
            "w": self.w_form,
            "b": "".join(str(d) for d in self.b) if self.b else None,
            "b_maps": format_word(self.b) if self.b else None,
            "verified": self.verified,
        }


@dataclass
class SearchResult:
    accepted: list
    rejected: list
    window: tuple
    notes: list

    def to_json(self) -> dict:
        return {
            "window": [str(e) for e in self.window],
            "bases": [c.to_json() for c in self.accepted],
            "rejected": [
                {"root_5dp": c.root.decimal(5), "polynomial": list(c.polynomial.coeffs), "seeds": c.seed_results}
                for c in self.rejected
            ],
            "notes": self.notes,
        }


def _seed_point(name: str, q: AlgebraicReal):
    return make_y(int(name[1:]), q) if name[0] == "y" else make_z(int(name[1:]), q)


def _examine(root: AlgebraicReal, poly: IntPolynomial, eqs: list, depth: Optional[int]) -> BaseCertificate:
    cert = BaseCertificate(root, poly, eqs, None, None, None, False)
    for s in SEEDS:
        res = is_null_infinite(_seed_point(s, root), root, depth)
        cert.seed_results[s] = {"answer": res.answer, **{k: v for k, v in res.certificate.items() if k in ("reason", "w_form", "b")}}
        if res and cert.seed is None:
            w, b = res.cycle
            check = cycle_certificate_check(w, b, root)
            cert.seed, cert.w_form, cert.b, cert.verified = s, res.certificate.get("w_form"), b, bool(check)
    return cert


def _name_of(r: AlgebraicReal) -> Optional[str]:
    for n in ("q1", "q2", "q3", "qprimeprime", "qprime"):
        if compare(r, base(n)) == Ordering.EQUAL:
            return n
    return None


def b_aleph0_in(window=None, depth: Optional[int] = None, workers: int = 1) -> SearchResult:
    """Bases in the half-open window (lo, hi] where some special point is null infinite.

    The exhaustive equation families are valid on [q1, q3]; below q1 the
    window is covered by the known result that (golden, q1) holds no such
    base, and above q3 the search refuses to run.
    """
    golden, q1, q3 = base("golden"), base("q1"), base("q3")
    lo, hi = window if window is not None else (golden, q3)
    if compare(lo, golden) == Ordering.LESS or compare(hi, q3) == Ordering.GREATER or compare(lo, hi) != Ordering.LESS:
        raise DomainError("search window must lie inside (golden ratio, q3]")
    notes = []
    if compare(lo, q1) == Ordering.LESS:
        notes.append("(golden, q1) is not searched: no base there has a null infinite point (known result)")
        inner_lo = q1
    else:
        inner_lo = lo
    eqs = enumerate_candidates()
    groups: list[tuple[AlgebraicReal, IntPolynomial, list]] = []
    if compare(inner_lo, hi) != Ordering.GREATER:
        for e in eqs:
            for r in roots_in(e.polynomial, (inner_lo, hi)):
                if compare(r, lo) != Ordering.GREATER:
                    continue  # lo is excluded
                for g in groups:
                    if compare(g[0], r) == Ordering.EQUAL:
                        g[2].append(e)
                        break
                else:
                    groups.append((r, e.polynomial, [e]))
    groups.sort(key=lambda g: g[0].interval[0])
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            certs = list(ex.map(lambda g: _examine(g[0], g[1], g[2], depth), groups))
    else:
        certs = [_examine(r, p, e, depth) for r, p, e in groups]
    accepted, rejected = [], []
    for c in certs:
        c.name = _name_of(c.root)
        (accepted if c.seed is not None else rejected).append(c)
    return SearchResult(accepted, rejected, (lo, hi), notes)
