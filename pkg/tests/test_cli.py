import json
import subprocess
import sys

import pytest

from boolcsp.cli import main
from boolcsp.core import parse_language

from conftest import FIXTURES


def run(capsys, *args):
    code = main(["--no-timing", *map(str, args)])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def F(name):
    return FIXTURES / name


def test_classify_gamma3(capsys):
    code, rep, _ = run(capsys, "classify", F("gamma3.lang"))
    assert code == 0
    assert rep["result"]["csp"]["verdict"] == "NP-complete"
    assert rep["result"]["qcsp"]["verdict"] == "PSPACE-complete"
    assert rep["result"]["bounded_alternation"]["qcsp_prefix(2,Π)"]["verdict"] == "Π2p-complete"
    assert set(rep["inputs"]) == {str(F("gamma3.lang"))}


def test_classify_horn_and_empty(capsys):
    _, rep, _ = run(capsys, "classify", F("horn.lang"))
    assert "and" in rep["result"]["csp"]["witnesses"]
    _, rep, _ = run(capsys, "classify", F("empty.lang"))
    assert rep["result"]["csp"]["witnesses"] == ["const0", "const1", "and", "or", "majority", "minority"]


def test_classify_requested_class(capsys):
    code, rep, _ = run(capsys, "classify", F("two_sat.lang"), "--k", 3, "--kind", "S")
    assert code == 0 and rep["result"]["requested"]["verdict"] == "tractable"
    code, rep, err = run(capsys, "classify", F("gamma3.lang"), "--k", 2, "--kind", "S")
    assert code == 2 and rep is None and "unsupported" in err


def test_solve_two_sat(capsys):
    code, rep, _ = run(capsys, "solve", F("two_sat.lang"), F("two_sat.inst"), "--verify")
    assert code == 0
    assert rep["result"]["method"] == "majority"
    assert rep["result"]["verdict"] == "sat" and rep["result"]["verified"] is True


def test_solve_gamma3_needs_brute(capsys):
    code, rep, err = run(capsys, "solve", F("gamma3.lang"), F("gamma3.inst"))
    assert code == 2 and rep is None and "no tractable method" in err
    code, rep, _ = run(capsys, "solve", F("gamma3.lang"), F("gamma3.inst"), "--method", "brute")
    assert code == 0 and rep["result"]["verdict"] == "sat"


def test_solve_wrong_method_is_precondition_error(capsys):
    code, _, err = run(capsys, "solve", F("gamma3.lang"), F("gamma3.inst"), "--method", "majority")
    assert code == 2 and "not a polymorphism" in err


def test_qsolve_horn(capsys):
    code, rep, _ = run(capsys, "qsolve", F("qhorn.lang"), F("qhorn.qcsp"), "--method", "pi2")
    assert code == 0
    assert rep["result"]["value"] is False
    assert rep["result"]["counterexample"] == {"y": 1, "y'": 0, "y''": 1}
    _, rep, _ = run(capsys, "qsolve", F("qhorn.lang"), F("qhorn.qcsp"), "--method", "brute")
    assert rep["result"]["value"] is False


def test_qsolve_sigma1_is_a_csp(capsys):
    code, rep, _ = run(capsys, "qsolve", F("two_sat.lang"), F("sigma1.qcsp"))
    assert code == 0
    assert rep["result"]["prefix_class"] == "Σ1"
    assert rep["result"]["method"] == "csp:majority" and rep["result"]["value"] is True


def test_qsolve_family_option(capsys):
    _, rep, _ = run(capsys, "qsolve", F("q2sat.lang"), F("q2sat.qcsp"), "--method", "pi2", "--family", "<=2,0")
    assert rep["result"]["family"] == "[<=2,false]" and rep["result"]["value"] is False


def test_polymorphisms(capsys):
    _, rep, _ = run(capsys, "polymorphisms", F("gamma3.lang"), "--arity", 1)
    assert rep["result"]["operations"] == [{"name": "identity", "table": "01"}]


def test_ppmember(capsys):
    _, rep, _ = run(capsys, "ppmember", F("gamma3.lang"), F("neq.lang"), "--definition")
    entry = rep["result"]["NEQ"]
    assert entry["member"] is True and entry["definition"].startswith("NEQ(p01, p10) == E p00 E p11 .")


def test_reduce_lift_constants(capsys, tmp_path):
    out = tmp_path / "lifted.lang"
    code, rep, _ = run(capsys, "reduce", "lift-constants", F("r01.lang"), "-o", out)
    assert code == 0
    lang = parse_language(out.read_text())
    assert len(lang["R.lift"].tuples) == 4


def test_reduce_with_instance(capsys, tmp_path):
    out = tmp_path / "neg.inst"
    code, rep, _ = run(
        capsys, "reduce", "negation-closure", F("two_sat.lang"), "--instance", F("two_sat.inst"),
        "--instance-output", out,
    )
    assert code == 0
    assert out.read_text() == rep["result"]["instance"]
    assert rep["result"]["instance"].startswith("vars b0 a b c\n")


def test_eq(capsys):
    _, rep, _ = run(capsys, "eq", "A w . E x . (w=x)")
    assert rep["result"]["value"] is True and rep["result"]["agree"] is True
    _, rep, _ = run(capsys, "eq", "E x . A y . (x != y)")
    assert rep["result"]["value"] is False and "reduced" not in rep["result"]
    code, _, err = run(capsys, "eq", "E x . A y . (x != y)", "--method", "reduce")
    assert code == 2 and "positive" in err


def test_input_errors_exit_1(capsys, tmp_path):
    code, rep, err = run(capsys, "classify", tmp_path / "missing.lang")
    assert code == 1 and rep is None and "cannot read" in err
    bad = tmp_path / "bad.lang"
    bad.write_text("domain 2\nrelation X two\n")
    code, _, err = run(capsys, "classify", bad)
    assert code == 1 and "line 2" in err
    code, _, err = run(capsys, "eq", "A x . (x =")
    assert code == 1


def test_crosscheck(capsys):
    code, rep, _ = run(capsys, "crosscheck", "--count", 40, "--seed", 3)
    assert code == 0 and rep["result"]["mismatches"] == []


def test_reports_are_deterministic(capsys):
    args = ["solve", str(F("two_sat.lang")), str(F("two_sat.inst")), "--verify"]
    outs = []
    for _ in range(2):
        main(["--no-timing", *args])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    main(args)
    timed = json.loads(capsys.readouterr().out)
    assert "timing" in timed
    del timed["timing"]
    timed["argv"] = ["--no-timing", *args]
    assert json.dumps(timed, indent=2, sort_keys=True, ensure_ascii=False) + "\n" == outs[0]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "boolcsp.cli", "--no-timing", "eq", "A w . E x . (w=x)"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["value"] is True


@pytest.mark.parametrize("argv", [[], ["solve"], ["solve", "a", "b", "--method", "magic"]])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1
