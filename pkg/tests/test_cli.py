import io
import json

import pytest

from formalhecke.cli import run_cli


def run(argv):
    out = io.StringIO()
    code = run_cli(argv, out)
    return code, out.getvalue()


def test_fgl_show_additive():
    code, text = run(["fgl", "show", "--law", "additive", "--degree", "3"])
    assert code == 0
    assert text.splitlines() == ["F = u + v + O(4)", "inverse = -u + O(4)", "mu = 1 + O(4)", "exp = u + O(4)"]


def test_fgl_show_multiplicative_json():
    code, text = run(["fgl", "show", "--law", "multiplicative", "--degree", "3", "--json"])
    doc = json.loads(text)
    assert code == 0
    assert doc["mu"] == "1 + beta*u + beta^2*u^2 + beta^3*u^3"
    assert doc["F"] == "u + v - beta*u*v"
    assert doc["law"] == {"kind": "multiplicative", "params": {}}


def test_fgl_show_specialised_param():
    code, text = run(["fgl", "show", "--law", "lorentz", "--param", "beta=1", "--degree", "5"])
    assert code == 0
    assert "exp = u - 1/3*u^3 + 2/15*u^5 + O(6)" in text


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["eval", "--expr", "X_1*X_1 - X_1*kappa(1)", "--law", "multiplicative"], "0"),
        (["eval", "--expr", "X_1*X_2 - X_2*X_1", "--type", "A1xA1", "--law", "elliptic"], "0"),
        (["eval", "--expr", "Theta", "--law", "additive"], "0"),
        (["eval", "--expr", "d_12", "--law", "additive"], "d[12] * (1)"),
    ],
)
def test_eval_outputs(argv, expected):
    code, text = run(argv)
    assert code == 0
    assert text.strip() == expected


def test_eval_lorentz_braid_in_x_basis():
    expr = "X_2*X_1*X_2 - X_1*X_2*X_1"
    code, text = run(["eval", "--expr", expr, "--law", "lorentz", "--basis", "X"])
    assert code == 0
    assert text.splitlines() == ["X[1] * (beta)", "X[2] * (-beta)"]


def test_eval_json():
    code, text = run(["eval", "--expr", "X_1", "--law", "additive", "--basis", "X", "--json"])
    doc = json.loads(text)
    assert doc["terms"] == {"1": "1"}
    assert doc["basis"] == "X"


def test_eval_hecke_basis():
    code, text = run(["eval", "--expr", "T_1*T_1 - T_1*Theta - 1", "--law", "lorentz", "--basis", "T"])
    assert code == 0
    assert text.strip() == "0"


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--expr", "X_1**X_2"],
        ["eval", "--expr", "X_7"],
        ["eval", "--expr", "1 / X_1"],
        ["fgl", "show", "--param", "beta"],
        ["fgl", "show", "--law", "multiplicative", "--param", "gamma=1"],
        ["fgl", "show", "--law", "nonsense"],
        ["verify"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _ = run(argv)
    assert code == 2
    assert capsys.readouterr().err


def test_syntax_error_message(capsys):
    run(["eval", "--expr", "X_1**X_2"])
    err = capsys.readouterr().err
    assert "unexpected '*'" in err and "column 5" in err


def test_verify_demazure_text_and_json():
    code, text = run(["verify", "demazure", "--law", "lorentz", "--type", "A2", "--degree", "4"])
    assert code == 0
    lines = text.splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)
    code, text = run(["verify", "demazure", "--law", "lorentz", "--type", "A2", "--degree", "4", "--json"])
    doc = json.loads(text)
    assert {r["status"] for r in doc} == {"pass"}
    assert any(r["check"] == "demazure.braid" for r in doc)


def test_verify_hecke_and_transport():
    code, _ = run(["verify", "hecke", "--law", "additive", "--type", "A2", "--degree", "4"])
    assert code == 0
    code, _ = run(["verify", "transport", "--law", "lorentz", "--type", "A2", "--degree", "4", "--hecke"])
    assert code == 0


def test_verify_reports_failure_exit_1():
    # with m1 not invertible kappa has no inverse, so the Hecke generators cannot be built
    argv = ["verify", "hecke", "--law", "universal", "--param", "m1=sym", "--terms", "2", "--type", "A2", "--degree", "3"]
    code, text = run(argv)
    assert code == 1
    assert all(line.startswith("FAIL") and "NotAUnit" in line for line in text.splitlines())
