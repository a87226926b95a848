import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from eqlogic.cli import format_enclosure, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


RADICAL_EQ = ("sqrt(x) + sqrt(2*x + 1) = 3", "--domain", "[0,inf)")


def test_radical_trace():
    code, out, _ = call("solve", *RADICAL_EQ, "--trace")
    assert code == 0
    lines = out.strip().splitlines()
    assert "(superset)" in lines[2] and "side condition: 3*x - 8 <= 0" in lines[2]
    assert lines[-1].startswith("1 solution: 26 - 6*sqrt(17) ≈ 1.261366246")
    assert lines[-1].endswith("rejected candidate: 26 + 6*sqrt(17) (side condition 3*x - 8 <= 0 violated)")


def test_json_schema():
    code, out, _ = call("solve", "exp(x) = 1/2", "--json")
    assert code == 0
    assert out.strip() == '{"kind":"finite","solutions":[{"rep":"closed_form","expr":"ln(1/2)"}]}'


def test_json_trace_line():
    _, out, _ = call("solve", *RADICAL_EQ, "--json", "--trace")
    sol, trace = map(json.loads, out.strip().splitlines())
    (good,) = sol["solutions"]
    assert (good["a"]["num"], good["b"]["num"], good["d"]) == ("26", "-6", "17")
    assert sol["rejected"][0]["reason"] == "side condition 3*x - 8 <= 0 violated"
    assert trace["overall_relation"] == "superset"
    assert [s["relation"] for s in trace["steps"]] == ["equivalent", "equivalent", "superset"]


def test_unsolved_prints_reason():
    code, out, _ = call("solve", "sin(x) = x/2")
    assert code == 0
    assert out.strip().endswith("unsolved: no strategy applies")


def test_empty_is_success():
    code, out, _ = call("solve", "exp(x) = -1")
    assert (code, out.strip()) == (0, "no solution")


def test_syntax_error_exit_code():
    code, out, err = call("solve", "x = (")
    assert code == 2 and out == ""
    assert "syntax error" in err and "^" in err
    assert "Traceback" not in err


@pytest.mark.parametrize("argv", [
    ("solve",),
    ("solve", "x = 1", "--bogus"),
    ("solve", "x = 1", "--precision", "abc"),
    ("enumerate-algebraic",),
    ("frobnicate",),
])
def test_flag_errors(argv):
    code, _, err = call(*argv)
    assert code == 3 and err.startswith("error:")


def test_help_exits_cleanly():
    code, out, _ = call("--help")
    assert code == 0 and "solve" in out


def test_classify():
    _, out, _ = call("classify", "sqrt(2) + sqrt(3)")
    assert out.strip() == "algebraic; annihilator: y^4 - 10*y^2 + 1"


def test_classify_matches_factored_annihilator():
    _, out, _ = call("classify", "root(3,2*x) + sqrt(5)")
    head, poly = out.strip().split(": ", 1)
    assert head == "algebraic; annihilator"
    for x in range(-3, 4):
        for y in range(-3, 4):
            env = {"x": Fraction(x), "y": Fraction(y)}
            printed = eval(poly.replace("^", "**"), {}, env)
            factored = (y**3 + 15 * y - 2 * x) ** 2 - 5 * (3 * y**2 + 5) ** 2
            assert printed == factored


def test_classify_transcendental():
    _, out, _ = call("classify", "exp(x)")
    assert out.startswith("transcendental")


def test_isolate():
    _, out, _ = call("isolate", "x^3 - 2*x")
    lines = out.strip().splitlines()
    assert lines[0] == "3 real roots"
    assert lines[2].strip() == "exact root 0"


def test_enumerate():
    _, out, _ = call("enumerate-algebraic", "--count", "3")
    assert out.strip().splitlines() == ["1. 0 (root of x)", "2. -1 (root of x + 1)", "3. 1 (root of x - 1)"]


def test_check():
    _, out, _ = call("check", *RADICAL_EQ, "--candidate", "26 - 6*sqrt(17)")
    assert out.startswith("verified")
    _, out, _ = call("check", *RADICAL_EQ, "--candidate", "26 + 6*sqrt(17)")
    assert out.startswith("rejected")


def test_deterministic():
    runs = {call("solve", "x^5 - x - 1 = 0", "--trace")[1] for _ in range(3)}
    assert len(runs) == 1


def test_digits_follow_width():
    assert format_enclosure(Fraction(1), Fraction(1)).startswith("1")
    wide = format_enclosure(Fraction(1), Fraction(11, 10))
    tight = format_enclosure(Fraction(1), Fraction(1) + Fraction(1, 10**30))
    assert len(wide) < len(tight)


def test_console_entry_point_utf8():
    proc = subprocess.run([sys.executable, "-m", "eqlogic", "solve", *RADICAL_EQ],
                          capture_output=True)
    assert proc.returncode == 0
    assert "≈" in proc.stdout.decode("utf-8")
