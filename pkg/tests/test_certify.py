import itertools
import random
from fractions import Fraction

import pytest

from betabranch.certify import (
    SeriesBound,
    assemble_main_theorems,
    conjugate_exclusion,
    exclusion_for,
    finite_sum,
    forced_prefix,
    sigma_q3_counts,
    sigma_q3_word_prefixes,
    verify_sigma_q3_structure,
)
from betabranch.constants import base, named_polynomial
from betabranch.errors import DomainError
from betabranch.exactnum import IntPolynomial, isolate_real_roots
from betabranch.expansions import PointSpec, t_apply, region_of

Q1_WINDOW = (Fraction(-13, 10), Fraction(-11, 10))
Q2_WINDOW = (Fraction(-27, 20), Fraction(-6, 5))
# q1's polynomial with two coefficients disturbed; its conjugate is near -1.106
CORRUPTED = IntPolynomial((-2, -1, -2, -1, -1, -1, 1))


def conjugate(poly, window):
    (b,) = isolate_real_roots(poly, window)
    return b


# --- series bounds ---------------------------------------------------------

@pytest.mark.parametrize("name,window", [("q1", Q1_WINDOW), ("q2", Q2_WINDOW)])
def test_series_bound_dominates_finite_words(name, window):
    b = conjugate(named_polynomial(name), window)
    rng = random.Random(17)
    for _ in range(200):
        offset = rng.randint(0, 6)
        digits = "".join(rng.choice("01") for _ in range(rng.randint(1, 24)))
        s = finite_sum(b, digits, offset)
        assert SeriesBound.of(b, offset, "Inf").value <= s <= SeriesBound.of(b, offset, "Sup").value


def test_series_bound_closed_forms():
    b = conjugate(named_polynomial("q1"), Q1_WINDOW)
    g = b.field.gen
    assert SeriesBound.of(b, 0, "Sup").value == 1 / (g * g - 1)
    assert SeriesBound.of(b, 0, "Inf").value == g / (g * g - 1)
    # an odd offset flips the sign of the scale and swaps the extremes
    assert SeriesBound.of(b, 1, "Sup").value == g ** -1 * (g / (g * g - 1))
    q = base("q2")
    assert SeriesBound.of(q, 0, "Sup").value == 1 / (q.field.gen - 1)
    with pytest.raises(DomainError):
        SeriesBound.of(conjugate(named_polynomial("golden"), (Fraction(-7, 10), Fraction(-1, 2))), 0, "Sup")


# --- conjugate exclusion ---------------------------------------------------

def test_exclusion_at_q1_with_seven_digit_prefix():
    v = conjugate_exclusion(named_polynomial("q1"), Q1_WINDOW, "1100000")
    assert v.status == "Certified"
    conj = [e for e in v.evidence if e["check"] == "conjugate"][0]
    assert conj["margin_5dp"] == "-1.20458"
    ineq = v.evidence[-1]
    assert ineq["status"] == "pass" and Fraction(ineq["margin_5dp"]) > 0


def test_exclusion_is_monotone_in_prefix_extension():
    poly = named_polynomial("q1")
    for tail in itertools.product("01", repeat=4):
        v = conjugate_exclusion(poly, Q1_WINDOW, "1100000" + "".join(tail))
        assert v.status == "Certified"


def test_exclusion_at_q2_with_computed_prefix():
    p = forced_prefix(base("q2"))
    v = conjugate_exclusion(named_polynomial("q2"), Q2_WINDOW, p)
    assert v.status == "Certified"
    assert v.evidence[0]["margin_5dp"] == "-1.26493"


def test_forced_prefix_of_q1_is_the_seven_digit_head():
    assert forced_prefix(base("q1")) == "1100000"


def test_exclusion_for_named_bases():
    v1, v2 = exclusion_for("q1"), exclusion_for("q2")
    assert v1.status == v2.status == "Certified"
    assert (v1.depth, v2.depth) == (4, 1)
    assert all(e["status"] == "pass" for e in v1.evidence + v2.evidence)


def test_exclusion_rejects_a_wrong_prefix():
    v = exclusion_for("q1", prefix="1011")
    assert v.status == "Failed" and v.failed_check == "computed forced prefix"


def test_golden_conjugate_too_small():
    with pytest.raises(DomainError, match=r"\|b\| > 1"):
        conjugate_exclusion(IntPolynomial((-1, -1, 1)), (Fraction(-7, 10), Fraction(-1, 2)), "11")


def test_window_without_a_root():
    with pytest.raises(DomainError):
        conjugate_exclusion(named_polynomial("q1"), (Fraction(-2), Fraction(-3, 2)), "1100000")


def test_corrupted_polynomial_fails():
    v = conjugate_exclusion(CORRUPTED, (Fraction(-13, 10), Fraction(-101, 100)), "1100000")
    assert v.status == "Failed"
    assert v.failed_check == "1 - prefix sum outside tail range"


# --- expansions of 1 at q3 -------------------------------------------------

def test_first_step_lands_in_switch_region():
    q = base("q3")
    x = t_apply(PointSpec(q.field(1)), 1, q)
    assert region_of(x, q).in_switch


def test_structure_certified_for_fifty_loops():
    v = verify_sigma_q3_structure(50)
    assert v.status == "Certified"
    assert any(e["check"].startswith("(a) k=0") for e in v.evidence)


def test_structure_downward_consistent():
    for K in (1, 5, 12):
        assert verify_sigma_q3_structure(K).status == "Certified"


def test_prefix_counts_match_word_family():
    counts = sigma_q3_counts(range(4, 49, 4))
    for n, (oracle, family) in counts.items():
        assert oracle == family == n // 4 + 1
    assert sigma_q3_word_prefixes(12) == {"110001000100", "101101010101", "110000110101", "110001000011"}


def test_structure_fails_at_another_base():
    v = verify_sigma_q3_structure(3, base("q2"))
    assert v.status == "Failed" and v.failed_check


# --- assembly --------------------------------------------------------------

def test_assembly_without_search():
    vs = assemble_main_theorems(K=10, include_search=False)
    assert [v.status for v in vs] == ["Certified"] * 3


def test_corrupted_q3_polynomial_is_located():
    vs = assemble_main_theorems(IntPolynomial((1, -1, -1, -1, -1, 1)), K=5, include_search=False)
    assert vs[0].status == "Failed"
    assert vs[0].failed_check == "(a) k=0 orbit point in S_q"
    assert vs[-1].status == "Failed" and vs[-1].failed_check == "expansions of 1 at q3"
