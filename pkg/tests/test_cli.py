import io
import json
import subprocess
import sys

import pytest

from causex.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_eval_counterfactual():
    code, out, _ = call("eval", "arson_disjunctive", "--context", "U=u11", "--formula", "[ML1<-0](FB=1)")
    assert code == 0 and out.strip() == "true"
    code, out, _ = call("eval", "arson_conjunctive", "--context", "U=u11", "--formula", "[ML1<-0](FB=1)")
    assert code == 0 and out.strip() == "false"


def test_explain_tv_has_no_explanation():
    code, out, _ = call("--json", "explain", "tv", "--k", "k_tv.ctx", "--phi", "P=0")
    assert code == 0
    doc = json.loads(out)
    assert doc["values"]["explanations"] == [] and doc["verdict"] is False


def test_bad_context_exit_2():
    code, _, err = call("eval", "arson_disjunctive", "--context", "U=bogus", "--formula", "FB=1")
    assert code == 2 and "RangeViolation" in err


def test_usage_errors_exit_2():
    assert call("cause", "arson_disjunctive", "--context", "U=u11")[0] == 2
    assert call("nosuchcommand")[0] == 2
    assert call("eval", "no_such_model", "--context", "U=u11", "--formula", "FB=1")[0] == 2
    assert call("eval", "arson_disjunctive", "--context", "U=u11", "--formula", "FB=")[0] == 2
    assert call("cause", "arson_disjunctive", "--context", "U=u11", "--phi", "FB=1",
                "--enumerate", "--max-width", "0")[0] == 2


def test_budget_exit_3():
    code, _, err = call("cause", "arson_disjunctive", "--context", "U=u11", "--phi", "FB=1",
                        "--enumerate", "--budget", "4")
    assert code == 3 and "budget" in err


def test_cause_json_schema():
    code, out, _ = call("cause", "--json", "arson_conjunctive", "--context", "U=u11", "--phi", "FB=1",
                        "--candidate", "ML1=1")
    doc = json.loads(out)
    assert set(doc) == {"command", "inputs", "verdict", "clauses", "witnesses", "values"}
    assert doc["verdict"] is True
    assert doc["clauses"] == {"AC1": True, "AC2": True, "AC3": True}
    assert doc["witnesses"][0]["x_prime"] == {"ML1": "0"}


def test_suffcause_and_enumerate():
    code, out, _ = call("suffcause", "arson_disjunctive", "--context", "U=u11", "--phi", "FB=1",
                        "--candidate", "ML1=1 & ML2=1")
    assert code == 0 and "sufficient-cause" in out
    code, out, _ = call("cause", "arson_disjunctive", "--context", "U=u11", "--phi", "FB=1", "--enumerate")
    assert out.split() == ["ML1=1", "ML2=1", "FB=1"]


def test_explain_enumerate_and_check():
    code, out, _ = call("explain", "april_showers", "--k", "k_april_june", "--phi", "F=2")
    assert out.split() == ["AS=1", "ES=01", "ES=11"]
    code, out, _ = call("--json", "explain", "victoria", "--k", "k_victoria", "--phi", "Tan=1",
                        "--candidate", "Canaries=1")
    doc = json.loads(out)
    assert doc["clauses"]["EX2"] is False and doc["values"]["failing_contexts"] == ["UC=1, US=0, UL=1"]


def test_require_actual_flag():
    _, out, _ = call("explain", "arson_disjunctive", "--k", "k_arson_disjunctive", "--phi", "FB=1",
                     "--require-actual", "U=u10")
    assert out.split() == ["ML1=1"]


def test_partial_goodness_power():
    _, out, _ = call("--json", "partial", "victoria", "--k", "k_victoria", "--phi", "Tan=1",
                     "--candidate", "Canaries=1")
    assert json.loads(out)["values"]["goodness"] == "9/10"
    _, out, _ = call("goodness", "tv", "--k", "k_tv", "--phi", "P=0", "--candidate", "T=0")
    assert out.strip() == "9/10"
    _, out, _ = call("power", "barometer", "--phi", "R=1", "--candidate", "B=1")
    assert out.strip() == "0/1"
    _, out, _ = call("power", "barometer", "--phi", "R=1", "--candidate", "B=1", "--measure", "gardenfors")
    assert out.strip() == "1/1"


def test_general_explain():
    code, out, _ = call("--json", "general-explain", "s_paresis", "--phi", "P=1", "--psi", "@paresis",
                        "--candidate", "S=1", "--psi-set", "psi_paresis")
    assert code == 0 and json.loads(out)["verdict"] is True
    code, out, _ = call("general-explain", "s_paresis_known", "--phi", "P=1", "--psi-set", "psi_paresis")
    assert out.strip() == "(no explanation)"


def test_prob():
    _, out, _ = call("prob", "arson_disjunctive", "--weights", "w_arson_uniform", "--phi", "FB=1")
    assert out.strip() == "3/4"
    _, out, _ = call("prob", "arson_conjunctive", "--weights", "w_arson_uniform", "--phi", "FB=1",
                     "--cause", "ML1=1")
    assert out.strip() == "1/4"


def test_solve_and_fixtures():
    _, out, _ = call("solve", "tv", "--context", "U0=1, U1=0")
    assert out.strip() == "T=1, P=1"
    _, out, _ = call("solve", "arson_disjunctive", "--context", "U=u11", "--do", "ML1=0, ML2=0")
    assert out.strip() == "ML1=0, ML2=0, FB=0"
    _, out, _ = call("fixtures")
    assert "arson_disjunctive" in out and "k_tv.ctx" in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "causex.cli", "eval", "arson_disjunctive",
                           "--context", "U=u11", "--formula", "[ML1<-0](FB=1)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "true"


@pytest.mark.parametrize("argv", [
    ("--json", "eval", "arson_disjunctive", "--context", "U=u11", "--formula", "FB=1"),
    ("--json", "explain", "victoria", "--k", "k_victoria", "--phi", "Tan=1"),
    ("--json", "partial", "arson_oxygen", "--phi", "FB=1", "--candidate", "O=1"),
])
def test_json_is_byte_identical(argv):
    first = call(*argv)
    assert all(call(*argv) == first for _ in range(3))
