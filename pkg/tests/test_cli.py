import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from pexcalc.cli import main, parse_subset, UsageError
from pexcalc.parser import ParseError, parse, print_document

DATA = Path(__file__).parent / "data"
SCHEMA = json.loads(resources.files("pexcalc").joinpath("schema/report.schema.json").read_text())


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run_cli(capsys, *argv, "--json")
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return code, report


def doc(name):
    return str(DATA / name)


# -- documents ------------------------------------------------------------------------

GOOD = sorted(p.name for p in DATA.iterdir() if p.name != "bad_syntax.pair")


@pytest.mark.parametrize("name", GOOD)
def test_document_round_trip(name):
    d = parse((DATA / name).read_text())
    text = print_document(d)
    again = parse(text)
    assert again == d
    assert print_document(again) == text


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse((DATA / "bad_syntax.pair").read_text())
    assert (e.value.line, e.value.col) == (3, 12)


@pytest.mark.parametrize("text,msg", [
    ("pair { n = 2; V { x3 } }", "variable index 3"),
    ("pair { n = 2; V { x1/0 } }", "zero denominator"),
    ("pair { n = 2; V { x1/x2 } }", "constant"),
    ("pair { n = 2; V { } V { } }", "duplicate"),
    ("config { n = 1; kernel { 2 } }", "generator index 2"),
    ("pear { }", "pair"),
])
def test_parse_errors(text, msg):
    with pytest.raises(ParseError, match=msg):
        parse(text)


def test_parse_subset():
    assert parse_subset("", 3) == []
    assert parse_subset("all", 3) == [0, 1, 2]
    assert parse_subset("1,3", 3) == [0, 2]
    assert parse_subset("[1 -2; 0 1]", 2) == [[1, -2], [0, 1]]
    for bad in ("4", "a", "[1 2"):
        with pytest.raises(UsageError):
            parse_subset(bad, 3)


# -- commands -------------------------------------------------------------------------

def test_free_and_dependent(capsys):
    code, r = run_json(capsys, "free", doc("parabola_shift.pair"))
    assert code == 0 and r["status"] == "Free" and r["bound"] == 3
    code, r = run_json(capsys, "free", doc("diagonal.pair"))
    assert code == 0 and r["status"] == "Dependent"
    assert r["result"]["additive"] == {"m": [1, -1], "c": "0"}
    assert r["result"]["multiplicative"] == {"m": [1, 1], "c": "1"}


def test_normal_witness(capsys):
    code, r = run_json(capsys, "normal", doc("point_curve.pair"))
    assert code == 0 and r["status"] == "NotNormal"
    assert r["result"]["witness"] == [[1, 0], [0, 1]]
    assert (r["result"]["dim_V_image"], r["result"]["dim_W_image"], r["result"]["k"]) == (0, 1, 2)
    code, r = run_json(capsys, "normal", doc("full_plane.pair"), "--height", "2")
    assert r["status"] == "NormalUpTo" and r["bound"] == 2


def test_check_axiom(capsys):
    code, r = run_json(capsys, "check-axiom", doc("parabola_shift.pair"))
    assert code == 0 and r["status"] == "Qualifies"
    code, r = run_json(capsys, "check-axiom", doc("point_curve.pair"))
    assert r["status"] == "Disqualified" and "witness" in r["result"]


def test_reduce_output_reparses(capsys):
    code, r = run_json(capsys, "reduce", doc("hyperbola_reduce.pair"))
    assert code == 0 and r["result"]["k"] == 2 and r["result"]["new_x"] == "x3"
    q = parse(r["result"]["pair"]).pair()
    assert q.n == 3


def test_cut_twice_with_curve(capsys):
    code, r = run_json(capsys, "cut", doc("full_plane.pair"), "--times", "2", "--allow-curve")
    assert code == 0 and r["status"] == "ok"
    assert [s["excess"] for s in r["result"]["steps"]] == [[2, 1], [1, 0]]
    assert r["result"]["seed"] == 5
    q = parse(r["result"]["pair"])
    assert len(q.generic) == 2


def test_cut_refuses_curve_without_flag(capsys):
    code, r = run_json(capsys, "cut", doc("full_plane.pair"), "--times", "2")
    assert code == 1 and r["error"]["kind"] == "PreconditionFailed"


def test_root_and_adim(capsys):
    code, r = run_json(capsys, "root", doc("curve_target.pair"), "--l", "2")
    assert code == 0 and r["result"]["ideal"] == ["-y1^4 + y2^2 - 1"]
    code, r = run_json(capsys, "adim", doc("full_plane.pair"))
    assert r["result"]["adim_lower_bound"] == 2 and r["result"]["exact"] == 2


def test_config_commands(capsys):
    code, r = run_json(capsys, "delta", doc("kernel2.config"))
    assert code == 0 and r["result"]["delta"] == 0
    code, r = run_json(capsys, "delta-rel", doc("kernel2.config"), "--subset", "2", "--over", "1")
    assert r["result"]["delta_rel"] == 0
    code, r = run_json(capsys, "partial-dim", doc("kernel2.config"), "--subset", "all")
    assert r["result"]["partial_dim"] == 0
    code, r = run_json(capsys, "strong-ext", doc("violation.config"))
    assert code == 0 and r["status"] == "NotStrong"
    assert r["result"] == {"witness": [[1]], "delta_rel": -1}
    code, r = run_json(capsys, "dim", doc("kernel2.config"), "--subset", "[1 -2]")
    assert r["result"]["dim_q"] == 0


def test_kernel_demo_pipes_into_delta(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "kernel-demo", "--size", "3")
    assert code == 0
    f = tmp_path / "k3.config"
    f.write_text(out)
    code, r = run_json(capsys, "delta", str(f))
    assert r["result"]["delta"] == 0


def test_json_is_byte_identical(capsys):
    outs = []
    for _ in range(2):
        main(["normal", doc("point_curve.pair"), "--json", "--no-timings"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert outs[0] == json.dumps(json.loads(outs[0]), sort_keys=True) + "\n"


def test_timings_present_by_default(capsys):
    code, r = run_json(capsys, "free", doc("full_plane.pair"))
    assert r["timings"]["total_s"] >= 0


def test_human_output(capsys):
    code, out, err = run_cli(capsys, "normal", doc("point_curve.pair"), "--no-timings")
    assert out.startswith("normal: NotNormal") and "witness" in out
    code, out, err = run_cli(capsys, "free", doc("bad_syntax.pair"))
    assert code == 2 and "line 3, column 12" in err and out == ""


# -- exit codes -----------------------------------------------------------------------

@pytest.mark.parametrize("argv,code,kind", [
    (["free", "parabola_shift.pair"], 0, None),
    (["normal", "point_curve.pair"], 0, None),
    (["free", "bad_syntax.pair"], 2, "ParseError"),
    (["delta", "full_plane.pair"], 1, "PreconditionFailed"),
    (["free", "kernel2.config"], 1, "PreconditionFailed"),
    (["root", "full_plane.pair"], 1, "PreconditionFailed"),
    (["adim", "point_curve.pair"], 1, "PreconditionFailed"),
    (["reduce", "full_plane.pair"], 1, "PreconditionFailed"),
    (["free", "missing.pair"], 1, "IOError"),
])
def test_exit_codes(capsys, argv, code, kind):
    argv = [argv[0], doc(argv[1])]
    got, r = run_json(capsys, *argv)
    assert got == code
    if kind:
        assert r["status"] == "error" and r["error"]["kind"] == kind


def test_resource_limit_exit_code():
    # a fresh process, so no cached basis hides the work
    proc = subprocess.run(
        [sys.executable, "-m", "pexcalc", "dim", doc("hard.pair"), "--order", "lex", "--steps", "3", "--json"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 3
    r = json.loads(proc.stdout)
    jsonschema.validate(r, SCHEMA)
    assert r["error"]["kind"] == "ResourceLimitExceeded"


def test_usage_errors_exit_nonzero(capsys):
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == 2
    capsys.readouterr()
    code, r = run_json(capsys, "kernel-demo")
    assert code == 1
