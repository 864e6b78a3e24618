"""Exact certification of the headline results.

Three independent checks plus their assembly:

* the structure of the expansions of 1 at q3 (one branching point per period,
  the lower branch always landing on the unique point with tail 1(10)^inf);
* the conjugate exclusion at q1 and q2: with q replaced by a negative real
  conjugate b, no digit tail can complete the forced prefix of 1;
* the countable-base search over (golden, q3].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from betabranch.branching import (
    _remainder_layers,
    classify_sigma,
    cycle_certificate_check,
    minimal_to_switch,
    prefix_counts,
)
from betabranch.constants import NAMED_BASES, base, named_polynomial
from betabranch.errors import DomainError, MapNotApplicable
from betabranch.exactnum import AlgebraicReal, IntPolynomial, Ordering, QFieldElement, compare, isolate_real_roots
from betabranch.expansions import EventuallyPeriodic, PointSpec, _apply, endpoints, pi_value

STATUSES = ("Certified", "Failed", "Partial")


@dataclass
class TheoremVerdict:
    name: str
    status: str
    evidence: list = field(default_factory=list)
    failed_check: Optional[str] = None
    depth: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "failed_check": self.failed_check,
            "depth": self.depth,
            "evidence": self.evidence,
        }

    def __str__(self):
        s = f"{self.name}: {self.status}"
        if self.failed_check:
            s += f" (failed: {self.failed_check})"
        return s


def _entry(check: str, ok: bool, lhs="", rhs="", margin="") -> dict:
    return {
        "check": check,
        "status": "pass" if ok else "fail",
        "lhs_exact": lhs,
        "rhs_exact": rhs,
        "margin_5dp": margin,
    }


def _exact(v) -> str:
    return v.to_rf_text() if isinstance(v, QFieldElement) else str(v)


def _verdict(name: str, evidence: list) -> TheoremVerdict:
    bad = next((e["check"] for e in evidence if e["status"] != "pass"), None)
    return TheoremVerdict(name, "Certified" if bad is None else "Failed", evidence, bad)


# ---------------------------------------------------------------------------
# series bounds
# ---------------------------------------------------------------------------

@dataclass
class SeriesBound:
    """Sup or Inf of sum_{i>=1} d_i b^-(offset+i) over all 0/1 digit sequences.

    For b < -1 the sup puts ones at even positions and the inf at odd ones;
    for b > 1 the sup is the all-ones tail and the inf is zero.
    """

    base: AlgebraicReal
    offset: int
    extremum: str
    value: QFieldElement

    @classmethod
    def of(cls, b: AlgebraicReal, offset: int, extremum: str) -> "SeriesBound":
        F = b.field
        g = F.gen
        if compare(b, -1) == Ordering.LESS:
            sup, inf = 1 / (g * g - 1), g / (g * g - 1)
        elif compare(b, 1) == Ordering.GREATER:
            sup, inf = 1 / (g - 1), F(0)
        else:
            raise DomainError("series bounds need |b| > 1")
        scale = g ** (-offset)
        lo, hi = scale * inf, scale * sup
        if scale.sign() < 0:
            lo, hi = scale * sup, scale * inf
        return cls(b, offset, extremum, hi if extremum == "Sup" else lo)


def finite_sum(b: AlgebraicReal, digits: str, offset: int = 0) -> QFieldElement:
    """sum d_i b^-(offset+i) for a finite digit string."""
    F = b.field
    inv = 1 / F.gen
    t = inv ** (offset + 1)
    s = F(0)
    for d in digits:
        if d == "1":
            s = s + t
        t = t * inv
    return s


# ---------------------------------------------------------------------------
# conjugate exclusion
# ---------------------------------------------------------------------------

def conjugate_exclusion(defining: IntPolynomial, conjugate_window, prefix: str, name: str = "conjugate exclusion") -> TheoremVerdict:
    """Show that 1 = sum_prefix b^-i + b^-n * tail has no solution for any 0/1 tail.

    b is the unique real root of `defining` in the window and must satisfy
    |b| > 1.  The verdict is Certified iff 1 - sum_prefix lies strictly
    outside the exact range of the tail.
    """
    b = _conjugate_root(defining, conjugate_window)
    if compare(b, 1) != Ordering.GREATER and compare(b, -1) != Ordering.LESS:
        raise DomainError("the conjugate must satisfy |b| > 1")
    n = len(prefix)
    lhs = 1 - finite_sum(b, prefix)
    sup = SeriesBound.of(b, n, "Sup").value
    inf = SeriesBound.of(b, n, "Inf").value
    above = lhs > sup
    below = lhs < inf
    ev = [
        _entry("conjugate", True, b.defining.to_text(), f"[{b.interval[0]}, {b.interval[1]}]", b.decimal(5)),
        _entry("prefix", True, prefix, str(n), ""),
    ]
    if above:
        ev.append(_entry("1 - prefix sum > tail sup", True, _exact(lhs), _exact(sup), (lhs - sup).decimal(5)))
    elif below:
        ev.append(_entry("1 - prefix sum < tail inf", True, _exact(lhs), _exact(inf), (inf - lhs).decimal(5)))
    else:
        ev.append(
            _entry(
                "1 - prefix sum outside tail range",
                False,
                _exact(lhs),
                f"[{_exact(inf)}, {_exact(sup)}]",
                min((lhs - inf), (sup - lhs)).decimal(5),
            )
        )
    return _verdict(name, ev)


def forced_prefix(q: AlgebraicReal, extra_branches: int = 0) -> str:
    """Digits of 1 up to its second switch-region visit along the upper branch.

    Forced maps carry 1 into the switch region; there T1 is taken and forced
    maps run until the next switch visit.  Each extra branch repeats that step.
    """
    x = PointSpec(q.field(1), "1")
    r = minimal_to_switch(x, q)
    if r.status != "switch":
        raise DomainError(f"1 does not reach the switch region ({r.status})")
    word = list(r.word)
    cur = r.point
    for _ in range(1 + extra_branches):
        rr = minimal_to_switch(PointSpec(_apply(cur.value, 1, q)), q)
        if rr.status != "switch":
            raise DomainError(f"the upper branch does not return to the switch region ({rr.status})")
        word.append(1)
        word.extend(rr.word)
        cur = rr.point
    return "".join(str(d) for d in word)


def _conjugate_root(defining: IntPolynomial, window) -> AlgebraicReal:
    roots = isolate_real_roots(defining, window)
    if len(roots) != 1:
        raise DomainError(f"expected one real root in the conjugate window, found {len(roots)}")
    return roots[0]


def prefix_sweep(q: AlgebraicReal, b: AlgebraicReal, max_length: int = 40) -> tuple[Optional[int], list]:
    """Smallest n such that every feasible length-n prefix of 1 at q is excluded at b.

    Any eventually periodic expansion of 1 starts with one of these prefixes,
    so when all are excluded 1 has no eventually periodic q-expansion.
    Returns (n, evidence) or (None, evidence) if max_length is reached.
    """
    sup0 = SeriesBound.of(b, 0, "Sup").value
    inf0 = SeriesBound.of(b, 0, "Inf").value
    gb = b.field.gen
    ev = []
    for n, layer in _remainder_layers(PointSpec(q.field(1), "1"), q, max_length, True):
        if n == 0:
            continue
        words = sorted(w for _, ws in layer.items() for w in ws)
        rows = []
        for w in words:
            # conjugate image of the remainder q^n (1 - sum_prefix q^-i)
            r = (1 - finite_sum(b, w)) * gb**n
            if r > sup0:
                rows.append(_entry(f"prefix {w}: remainder > tail sup", True, _exact(r), _exact(sup0), (r - sup0).decimal(5)))
            elif r < inf0:
                rows.append(_entry(f"prefix {w}: remainder < tail inf", True, _exact(r), _exact(inf0), (inf0 - r).decimal(5)))
            else:
                rows.append(None)
        if all(rows):
            ev.extend(rows)
            ev.append(_entry(f"all {len(words)} feasible prefixes of length {n} excluded", True, str(n), "", ""))
            return n, ev
    ev.append(_entry(f"prefix sweep up to length {max_length}", False, str(max_length), "", ""))
    return None, ev


def exclusion_for(name: str, prefix: Optional[str] = None, max_length: int = 40) -> TheoremVerdict:
    """Conjugate exclusion for a named base: the single-prefix argument plus a full prefix sweep."""
    from betabranch.constants import CONJUGATES

    src, window = CONJUGATES[name]
    q = base(src)
    b = _conjugate_root(named_polynomial(src), window)
    computed = forced_prefix(q)
    used = prefix if prefix is not None else computed
    ev = [_entry("computed forced prefix", used == computed, computed, used, "")]
    single = conjugate_exclusion(named_polynomial(src), window, used)
    ev.extend(single.evidence)
    n, sweep = prefix_sweep(q, b, max_length)
    ev.extend(sweep)
    v = _verdict(f"conjugate exclusion at {name}", ev)
    v.depth = n
    return v


# ---------------------------------------------------------------------------
# expansions of 1 at q3
# ---------------------------------------------------------------------------

def sigma_q3_word_prefixes(n: int) -> set[str]:
    """Length-n prefixes of {1(1000)^k 01(10)^inf : k >= 0} and 1(1000)^inf."""
    out = {EventuallyPeriodic("1", "1000").prefix(n)}
    for k in range(0, n // 4 + 2):
        out.add(EventuallyPeriodic("1" + "1000" * k + "01", "10").prefix(n))
    return out


def verify_sigma_q3_structure(K: int, q: Optional[AlgebraicReal] = None, prefix_lengths=None) -> TheoremVerdict:
    """Check the claimed expansion set of 1 at q3 up to K loops.

    (a) p_k = (T0^3 T1)^k (T1(1)) lies in S_q for 0 <= k <= K;
    (b) T0(p_k) equals the value of 1(10)^inf;
    (c) among all map words of length <= 4(K+1) only T1 (T0^3 T1)^k lands 1 in S_q;
    (d) for each checked length n <= 4K, the feasible prefixes of 1 are exactly
        the length-n prefixes of the word family.
    """
    if K < 1:
        raise DomainError("K must be >= 1")
    name = "expansions of 1 at q3"
    q = base("q3") if q is None else q
    ev: list = []
    inside = compare(q, 1) == Ordering.GREATER and compare(q, 2) == Ordering.LESS
    ev.append(_entry("base lies in (1, 2)", inside, q.defining.to_text(), "(1, 2)", q.decimal(5)))
    if not inside:
        return _verdict(name, ev)
    ends = endpoints(q)
    F = q.field
    target = pi_value(EventuallyPeriodic("1", "10"), q)
    try:
        p = _apply(F(1), 1, q)
        for k in range(K + 1):
            in_s = ends["inv_q"] <= p <= ends["s_hi"]
            ev.append(_entry(f"(a) k={k} orbit point in S_q", in_s, _exact(p), "S_q", p.decimal(5)))
            if not in_s:
                return _verdict(name, ev)
            low = _apply(p, 0, q)
            same = low == target
            ev.append(_entry(f"(b) k={k} lower branch equals 1(10)^inf", same, _exact(low), _exact(target), (low - target).decimal(5)))
            if not same:
                return _verdict(name, ev)
            for d in (1, 0, 0, 0):
                p = _apply(p, d, q)
    except MapNotApplicable as exc:
        ev.append(_entry("(a) orbit stays in the map domains", False, str(exc), "", ""))
        return _verdict(name, ev)

    # (c) breadth-first over every feasible map word from 1
    L = 4 * (K + 1)
    expected = {"1" + "1000" * k for k in range(K + 1) if 1 + 4 * k <= L}
    found = set()
    layer = [("", F(1))]
    for _ in range(L):
        nxt = []
        for w, v in layer:
            for d in (0, 1):
                if (d == 0 and v > ends["s_hi"]) or (d == 1 and v < ends["inv_q"]):
                    continue
                u = _apply(v, d, q)
                wd = w + str(d)
                if ends["inv_q"] <= u <= ends["s_hi"]:
                    found.add(wd)
                nxt.append((wd, u))
        layer = nxt
    ok = found == expected
    ev.append(_entry(f"(c) switch words of length <= {L}", ok, str(len(found)), str(len(expected)), ""))
    if not ok:
        return _verdict(name, ev)

    # (d) prefix sets against the word family
    lengths = prefix_lengths if prefix_lengths is not None else sorted({4 * j for j in range(1, K + 1)})
    n_max = max(lengths)
    one = PointSpec(F(1), "1")
    for n, layer in _remainder_layers(one, q, n_max, True):
        if n in lengths:
            got = {w for _, ws in layer.items() for w in ws}
            want = sigma_q3_word_prefixes(n)
            ok = got == want
            ev.append(_entry(f"(d) prefixes of length {n}", ok, str(len(got)), str(len(want)), ""))
            if not ok:
                return _verdict(name, ev)
    return _verdict(name, ev)


def sigma_q3_counts(lengths) -> dict[int, tuple[int, int]]:
    """(oracle count, word-family count) at each length."""
    q = base("q3")
    counts = prefix_counts(PointSpec(q.field(1), "1"), q, max(lengths))
    return {n: (counts[n], len(sigma_q3_word_prefixes(n))) for n in lengths}


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def _search_verdict(window=None, name: str = "countable bases in (golden, q3]") -> TheoremVerdict:
    from betabranch.search import b_aleph0_in

    res = b_aleph0_in(window)
    ev = []
    names = [c.name for c in res.accepted]
    for c in res.accepted:
        ev.append(
            _entry(
                f"cycle certificate at {c.name or c.root.decimal(5)}",
                c.verified,
                f"{c.w_form} under {''.join(map(str, c.b))}",
                c.root.decimal(5),
                "",
            )
        )
    for c in res.rejected:
        ev.append(_entry(f"candidate {c.root.decimal(5)} rejected", True, c.polynomial.to_text(), "no seed null infinite", ""))
    expected = ["q1", "q2", "q3"] if window is None else None
    if expected is not None:
        ev.append(_entry("base set equals {q1, q2, q3}", names == expected, ",".join(str(n) for n in names), ",".join(expected), ""))
    for note in res.notes:
        ev.append(_entry("note", True, note, "", ""))
    return _verdict(name, ev)


def assemble_main_theorems(
    q3_polynomial: Optional[IntPolynomial] = None,
    K: int = 50,
    include_search: bool = True,
) -> list[TheoremVerdict]:
    """Run every certification and combine them.

    `q3_polynomial` replaces the defining polynomial of q3 (negative control).
    """
    verdicts = []
    if include_search:
        verdicts.append(_search_verdict())

    # structure of the expansions of 1 at q3
    window = NAMED_BASES["q3"][1]
    poly = q3_polynomial if q3_polynomial is not None else named_polynomial("q3")
    roots = isolate_real_roots(poly, window) if not poly.is_zero() else []
    if len(roots) != 1:
        v = TheoremVerdict(
            "expansions of 1 at q3",
            "Failed",
            [_entry("isolate q3 in (1, 2)", False, poly.to_text(), str(len(roots)), "")],
            "isolate q3 in (1, 2)",
        )
    else:
        q3 = roots[0]
        v = verify_sigma_q3_structure(K, q3)
        if v.status == "Certified":
            cv = classify_sigma(PointSpec(q3.field(1), "1"), q3)
            ok = cv.cls == "CountablyInfinite" and bool(cycle_certificate_check(*cv.cycle, q3))
            v.evidence.append(_entry("classify 1 at q3", ok, str(cv), "CountablyInfinite", ""))
            v = _verdict(v.name, v.evidence)
    verdicts.append(v)

    # conjugate exclusion at q1 and q2
    ex1 = exclusion_for("q1")
    ex2 = exclusion_for("q2")
    verdicts.append(_verdict("conjugate exclusion at q1 and q2", ex1.evidence + ex2.evidence))

    # the smallest base above golden where 1 has countably many expansions
    parts = {x.name: x.status for x in verdicts}
    ok = all(s == "Certified" for s in parts.values())
    verdicts.append(
        TheoremVerdict(
            "q3 is the smallest base above golden where 1 has countably many expansions",
            "Certified" if ok else "Failed",
            [_entry(f"component: {k}", s == "Certified", s, "Certified", "") for k, s in parts.items()],
            None if ok else next(k for k, s in parts.items() if s != "Certified"),
        )
    )
    return verdicts
