import json
import subprocess
import sys

import pytest

from twistlie.acceptance import run_suite
from twistlie.cli import main, run
from twistlie.exactnum import CycNumber, TorusPoint
from twistlie.rootsys import build_root_system
from twistlie.twchar import TwistedElement, TwistedWeightDatum, twisted_character
from twistlie.twist import builtin_automorphism, orbits_on_roots


def has_float(obj) -> bool:
    if isinstance(obj, float):
        return True
    if isinstance(obj, dict):
        return any(has_float(v) for v in obj.values())
    if isinstance(obj, list):
        return any(has_float(v) for v in obj)
    return False


def ok(argv):
    code, env = run(argv)
    assert code == 0, env
    assert env["ok"] is True
    assert not has_float(env)
    assert json.loads(json.dumps(env)) == env
    return env["value"]


def test_lefschetz_commands():
    assert ok(["lefschetz", "gl", "--n", "4"]) == "4"
    assert ok(["lefschetz", "gl", "--n", "7"]) == "16"
    assert ok(["lefschetz", "compose", "--q", "2", "--e", "4", "--tr", "3"]) == "12"


def test_twchar_commands():
    assert ok(["twchar", "tau-trace", "--system", "A1+A1", "--twist", "swap", "--mu", "2,2"]) == "3"
    assert ok(["twchar", "tau-trace", "--system", "A1+A1", "--twist", "swap", "--mu", "2,2", "--method", "limit"]) == "3"
    assert ok(["twchar", "tau-trace", "--system", "A2", "--twist", "gl-orthogonal", "--mu", "2,0,-2"]) == "3"
    out = ok(["twchar", "eval", "--system", "A1", "--mu", "1", "--labels", "--h", '["2","3"]'])
    assert out["value"] == "5"
    h = TorusPoint([CycNumber.zeta(1, 3), 2]).to_json()
    out = ok(["twchar", "eval", "--system", "A1", "--twist", "gl-orthogonal", "--mu", "1,-1", "--h", json.dumps(h)])
    rs = build_root_system("A1")
    auto = builtin_automorphism("A1", "gl-orthogonal")
    tc = orbits_on_roots(rs, auto)
    el = TwistedElement(TorusPoint.from_json(h), auto, TorusPoint.identity(2))
    expected = twisted_character(rs, tc, TwistedWeightDatum.create(tc, (1, -1)), el)
    assert CycNumber.from_json(out["value"]) == expected
    assert out["conductor"] == expected.N


def test_gln_commands():
    assert ok(["gln", "stable-class", "--field", "R", "--matrix", "[[1,0],[0,-1]]"])["class"] == "-1"
    assert ok(["gln", "norm", "--n", "2", "--matrix", '[["3","0"],["0","5"]]']) == [["3/5", "0"], ["0", "5/3"]]
    assert ok(["gln", "tau", "--matrix", "[[2,0],[0,4]]"]) == [["1/4", "0"], ["0", "1/2"]]
    assert ok(["gln", "charpoly", "--matrix", "[[1,2],[3,4]]"]) == ["1", "-5", "-2"]
    assert ok(["gln", "companion", "--coeffs", "3"]) == [["3", "-1"], ["1", "0"]]
    sp = ok(["gln", "cross-section", "--type", "sp", "--poly", "1,-3,1"])
    assert len(sp["matrix"]) == 2
    assert ok(["gln", "cross-section", "--type", "o-even", "--poly", "1,1,1,1,1"])["label"] == "quasi_split"
    assert ok(["gln", "square-classes", "--field", "Q5"]) == ["1", "2", "5", "10"]
    diag = ok(["gln", "diagonalize", "--matrix", "[[0,1],[1,0]]"])
    assert set(diag) == {"diagonal", "congruence"}
    table = ok(["gln", "ff-classes", "--n", "2", "--q", "3"])
    assert table["group_order"] == 48 and table["regular_semisimple_fibers_single"]


@pytest.mark.parametrize(
    "argv,code",
    [
        (["gln", "stable-class", "--field", "R", "--matrix", "[[1,2],[3,4]]"], "NOT_SYMMETRIC"),
        (["gln", "norm", "--matrix", "[[1,2],[2,4]]"], "SINGULAR"),
        (["gln", "norm", "--matrix", "[[1,2"], "PARSE"),
        (["twchar", "tau-trace", "--system", "A2", "--twist", "gl-orthogonal", "--mu", "1,0,-1"], "PARITY"),
        (["gln", "square-classes", "--field", "Q"], "UNSUPPORTED_FIELD"),
        (["lefschetz", "gl", "--n", "1"], "DOMAIN"),
    ],
)
def test_domain_errors_exit_one(argv, code):
    exit_code, env = run(argv)
    assert exit_code == 1
    assert env["ok"] is False and env["error"]["code"] == code
    assert env["error"]["message"]


@pytest.mark.parametrize("argv", [[], ["nonsense"], ["lefschetz", "gl"], ["lefschetz", "gl", "--n", "x"], ["gln", "--help"]])
def test_usage_errors_exit_two(argv):
    exit_code, env = run(argv)
    assert exit_code == 2 and env["error"]["code"] == "USAGE"


def test_main_prints_one_json_envelope(capsys):
    assert main(["lefschetz", "gl", "--n", "5"]) == 0
    assert json.loads(capsys.readouterr().out) == {"ok": True, "value": "-8"}


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "twistlie.cli", "lefschetz", "gl", "--n", "4"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"ok": True, "value": "4"}


def test_payload_round_trips():
    for x in [CycNumber(12, ["1/2", 0, -3, "7/5"]), CycNumber.zeta(3, 7), CycNumber.rational(-4)]:
        assert CycNumber.from_json(json.loads(json.dumps(x.to_json()))) == x
    t = TorusPoint([CycNumber.zeta(1, 4), 3])
    assert TorusPoint.from_json(json.loads(json.dumps(t.to_json()))).values == t.values


def test_verify_quick_is_deterministic():
    first = [r.deterministic_view() for r in run_suite("quick", 7)]
    second = [r.deterministic_view() for r in run_suite("quick", 7)]
    assert first == second
    assert [c["id"] for c in first] == list(range(1, 11))
    assert all(c["passed"] for c in first)


def test_verify_command_envelope():
    code, env = run(["verify", "quick", "--seed", "3"])
    assert code == 0
    report = env["value"]
    assert report["suite"] == "quick" and report["seed"] == 3
    assert len(report["criteria"]) == 10 and not has_float(env)
    assert all(isinstance(c["ms"], int) for c in report["criteria"])
