import random
from fractions import Fraction

import pytest

from betabranch.branching import (
    build_tree,
    classify_sigma,
    cycle_certificate_check,
    feasible_prefixes,
    is_null_infinite,
    minimal_to_switch,
    prefix_count_oracle,
    prefix_counts,
    tree_paths,
    tree_to_ascii,
    tree_to_json,
)
from betabranch.constants import base, rational_base
from betabranch.errors import DomainError, LemmaCRangeError
from betabranch.expansions import (
    EventuallyPeriodic,
    PointSpec,
    apply_word,
    endpoints,
    make_y,
    make_z,
    parse_point,
    pi_value,
    region_of,
    t_apply,
)


def one(q):
    return parse_point("one", q)


# --- minimal words ---------------------------------------------------------

def test_minimal_to_switch_examples():
    q3, q2 = base("q3"), base("q2")
    r = minimal_to_switch(one(q3), q3)
    assert r.status == "switch" and r.word == (1,)
    assert r.point.value == q3.field.gen - 1
    assert region_of(r.point, q3).in_switch

    assert minimal_to_switch(parse_point("0", q3), q3).status == "resolved"

    x = t_apply(make_y(2, q2), 1, q2)
    r = minimal_to_switch(x, q2)
    assert r.status == "switch" and r.word == (0, 0)
    # below q' the landing point lies right of J, from q' on it is inside J
    assert region_of(r.point, q2).tag == "SJR"
    q3 = base("q3")
    r = minimal_to_switch(t_apply(make_y(2, q3), 1, q3), q3)
    assert r.word == (0, 0) and region_of(r.point, q3).tag == "J"


# --- classification --------------------------------------------------------

def test_classify_examples():
    q3 = base("q3")
    v = classify_sigma(one(q3), q3)
    assert v.cls == "CountablyInfinite"
    w, b = v.cycle
    assert w.value == q3.field.gen - 1
    assert b == (1, 0, 0, 0)
    assert classify_sigma(parse_point("0", q3), q3).cls == "Unique"
    v = classify_sigma(make_y(1, q3), q3)
    assert v.cls == "CountablyInfinite"
    assert v.cycle[0].value == make_y(1, q3).value
    assert apply_word(make_y(1, q3), v.cycle[1], q3).value == make_y(1, q3).value


def test_classify_top_and_unique_points():
    q = base("q2")
    assert classify_sigma(PointSpec(endpoints(q)["top"]), q).cls == "Unique"
    x = PointSpec(pi_value(EventuallyPeriodic("0", "10"), q))
    assert classify_sigma(x, q).cls == "Unique"


def test_classify_continuum_at_q4():
    q = base("q4")
    v = classify_sigma(one(q), q, max_nodes=600)
    assert v.cls == "Continuum"


def test_classify_needs_lemma_c_range():
    g = base("golden")
    with pytest.raises(LemmaCRangeError):
        classify_sigma(one(g), g)


def test_classify_rejects_points_outside_interval():
    q = base("q2")
    with pytest.raises(DomainError):
        classify_sigma(PointSpec(q.field(3)), q)


def test_depth_exceeded_is_reported():
    q = base("q3")
    v = classify_sigma(parse_point("1/2", q), q, max_nodes=40)
    assert v.cls in ("DepthExceeded", "Continuum", "CountablyInfinite", "Finite", "Unique")
    if v.cls == "DepthExceeded":
        assert v.depth is not None


# --- certificate soundness -------------------------------------------------

CASES = [
    ("q3", one),
    ("q3", lambda q: make_y(1, q)),
    ("q1", lambda q: make_y(3, q)),
    ("q1", lambda q: make_z(3, q)),
    ("q2", lambda q: make_y(1, q)),
    ("q2", lambda q: make_z(1, q)),
    ("q4", one),
]


@pytest.mark.parametrize("name,point", CASES)
def test_certificates_reverify(name, point):
    q = base(name)
    x = point(q)
    v = classify_sigma(x, q, max_nodes=600)
    if v.cls == "CountablyInfinite":
        w, b = v.cycle
        assert cycle_certificate_check(w, b, q)
        # the cycle is reachable from x along the reported word
        reach = [int(d) for d in v.certificate["reach_word"]]
        assert apply_word(x, reach, q).value == w.value
    elif v.cls == "Continuum":
        c = v.certificate
        reach = [int(d) for d in c["reach_word"]]
        p = apply_word(x, reach, q)
        assert region_of(p, q).in_switch
        for d, child in c["children"].items():
            target = apply_word(p, [int(t) for t in child["word"]], q)
            assert target.value.decimal(5) == child["target"]["decimal"]
            again = classify_sigma(target, q, max_nodes=600)
            assert again.cls in ("Continuum", "CountablyInfinite")
    else:
        pytest.fail(f"unexpected verdict {v}")


# --- null infinite points --------------------------------------------------

def test_null_infinite_examples():
    q1, q2 = base("q1"), base("q2")
    r = is_null_infinite(make_y(3, q1), q1)
    assert r.answer == "Yes"
    forms = [h["form"] for h in r.certificate["switch_hits"]]
    assert forms == ["y_3", "z_3"]

    r = is_null_infinite(make_z(1, q2), q2)
    assert r.answer == "Yes"
    assert {h["form"] for h in r.certificate["switch_hits"]} == {"y_1", "z_1"}
    assert cycle_certificate_check(*r.cycle, q2)

    r = is_null_infinite(make_y(2, q1), q1)
    assert r.answer == "No"
    assert "branching_point" in r.certificate


def test_cycle_certificate_examples():
    q3, q2 = base("q3"), base("q2")
    assert cycle_certificate_check(make_y(1, q3), (1, 0, 0, 0), q3)
    bad = cycle_certificate_check(make_y(1, q2), (1, 0, 0, 0), q2)
    assert not bad and "b(w) != w" in bad.reason
    assert apply_word(make_y(1, q2), (1, 0, 0, 0), q2).value == make_z(1, q2).value
    assert cycle_certificate_check(make_y(1, q2), (1, 0, 0, 0, 0, 1, 1, 1), q2)
    zero = cycle_certificate_check(parse_point("0", q2), (0,), q2)
    assert not zero and "switch region" in zero.reason


def test_cycle_certificate_rejects_illegal_words():
    q3 = base("q3")
    r = cycle_certificate_check(make_y(1, q3), (0, 0, 0, 0), q3)
    assert not r and "map not applicable" in r.reason


# --- prefix oracle vs tree -------------------------------------------------

def test_prefix_count_of_zero():
    q = base("q2")
    assert prefix_counts(parse_point("0", q), q, 12) == [1] * 13


def family_prefixes(n):
    words = {("1" + "1000" * 40)[:n]}
    k = 0
    while 4 * k + 3 <= n:
        words.add(("1" + "1000" * k + "01" + "10" * n)[:n])
        k += 1
    return words


def test_prefix_count_of_one_at_q3_matches_word_family():
    q = base("q3")
    assert feasible_prefixes(one(q), q, 20) == family_prefixes(20)
    assert prefix_count_oracle(one(q), q, 20) == len(family_prefixes(20))


def test_tree_and_oracle_agree_at_five_thirds():
    q = rational_base(Fraction(5, 3))
    y = make_y(1, q)
    t = build_tree(y, q, 15)
    assert tree_paths(t) == feasible_prefixes(y, q, 15)
    assert len(tree_paths(t)) == prefix_count_oracle(y, q, 15)


def random_case(rng):
    if rng.random() < 0.4:
        q = base(rng.choice(["q1", "q2", "q3", "qprime", "q4", "qcheck"]))
    else:
        q = rational_base(Fraction(rng.randint(1620, 1750), 1000))
    top = endpoints(q)["top"]
    kind = rng.random()
    if kind < 0.4:
        x = PointSpec(top * Fraction(rng.randint(0, 1000), 1000))
    elif kind < 0.7:
        j = rng.randint(1, 8)
        x = make_y(j, q) if rng.random() < 0.5 else make_z(j, q)
    else:
        pre = "".join(rng.choice("01") for _ in range(rng.randint(0, 5)))
        per = "".join(rng.choice("01") for _ in range(rng.randint(1, 4)))
        x = PointSpec(pi_value(EventuallyPeriodic(pre, per), q))
    return q, x, rng.randint(1, 20)


def test_oracle_equivalence_fifty_random_cases():
    rng = random.Random(2024)
    for _ in range(50):
        q, x, n = random_case(rng)
        paths = tree_paths(build_tree(x, q, n))
        assert paths == feasible_prefixes(x, q, n), (q, x, n)
        assert len(paths) == prefix_count_oracle(x, q, n)


def test_tree_rendering():
    q = base("q3")
    t = build_tree(one(q), q, 6)
    j = tree_to_json(t)
    assert j["kind"] in ("Forced", "Branching")
    text = tree_to_ascii(t)
    assert text.splitlines()[0]
