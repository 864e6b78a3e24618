import csv
import io
import json
import subprocess
import sys

import pytest

from betabranch.cli import canonical_json, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "poly,expected",
    [
        ("1,-1,0,-1,-1,1", "1.68042"),
        ("-2,-2,-1,-1,0,1", "1.66184"),
        ("-1,-1,1", "1.61803"),
    ],
)
def test_roots_examples(capsys, poly, expected):
    code, out, _ = run(capsys, "roots", "--poly", poly, "--window", "1,2", "--digits", "5")
    assert code == 0
    assert out.strip() == expected


def test_roots_json_round_trip(capsys):
    code, out, _ = run(capsys, "roots", "--poly", "-1,-1,-2,-1,-1,0,1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert canonical_json(data) + "\n" == out
    assert [r["decimal"] for r in data["roots"]] == ["-1.20458", "1.64541"]


def test_roots_parse_error(capsys):
    code, _, err = run(capsys, "roots", "--poly", "1,x")
    assert code == 2 and "parse error" in err
    code, _, _ = run(capsys, "roots", "--poly", "0")
    assert code == 2


def test_unknown_option_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["roots", "--nope"])
    assert exc.value.code == 2


def test_classify_examples(capsys):
    code, out, _ = run(capsys, "classify", "--q", "q3", "--x", "one")
    assert code == 0 and out.splitlines()[0] == "CountablyInfinite"
    assert "b_maps: T0^3 T1" in out
    code, out, _ = run(capsys, "classify", "--q", "q1", "--x", "y:2")
    assert "null infinite: No" in out
    code, out, _ = run(capsys, "classify", "--q", "q2", "--x", "pi:0|0")
    assert out.splitlines()[0] == "Unique"


def test_classify_domain_errors(capsys):
    code, _, err = run(capsys, "classify", "--q", "golden", "--x", "one")
    assert code == 3
    code, _, _ = run(capsys, "classify", "--q", "q2", "--x", "5")
    assert code == 3


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "--q", "q3", "--x", "y:1", "--format", "json")
    data = json.loads(out)
    assert data["class"] == "CountablyInfinite"
    assert canonical_json(data) + "\n" == out


def test_tables(capsys):
    code, out, _ = run(capsys, "tables", "--which", "2")
    assert code == 0
    assert "1.67365  x^5 - 2*x^4 + x^3 - x^2 + x - 1" in out
    code, out, _ = run(capsys, "tables", "--which", "3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert any(r["root_5dp"] == "1.64541" and r["equation"] == "T0 T1(y_3) = z_3" for r in rows)
    code, out, _ = run(capsys, "tables", "--which", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    z1 = [r for r in data["rows"] if r["paper_root_5dp"] == "1.64114"][0]
    assert z1["agreement"] != "Match"
    assert canonical_json(data) + "\n" == out


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--window", "1.619,1.681", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [b["name"] for b in data["bases"]] == ["q1", "q2", "q3"]
    assert [b["root_5dp"] for b in data["bases"]] == ["1.64541", "1.65462", "1.68042"]
    assert all(b["verified"] for b in data["bases"])


def test_search_window_errors(capsys):
    code, _, _ = run(capsys, "search", "--window", "1.5,1.6")
    assert code == 3
    code, out, _ = run(capsys, "search", "--window", "1.65,1.7")
    assert code == 0 and "not searched" in out


def test_certify_exclusion(capsys):
    code, out, _ = run(capsys, "certify", "--theorem", "4.2")
    assert code == 0
    assert "-1.20458" in out and "-1.26493" in out
    assert out.count(": Certified") == 2


def test_certify_structure_json(capsys):
    code, out, _ = run(capsys, "certify", "--theorem", "4.1", "--K", "8", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data[0]["status"] == "Certified"
    assert canonical_json(data) + "\n" == out


def test_tree(capsys):
    code, out, _ = run(capsys, "tree", "--q", "q3", "--x", "one", "--depth", "5", "--format", "json")
    assert code == 0
    assert canonical_json(json.loads(out)) + "\n" == out


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "betabranch.cli", "roots", "--poly", "-1,-1,1", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout
