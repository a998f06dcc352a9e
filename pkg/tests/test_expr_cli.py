import json

import pytest

from tauforms import expr
from tauforms.arith import Rat
from tauforms.cli import main
from tauforms.forms import delta, eisenstein


# -- parsing -------------------------------------------------------------------


def test_parse_bracket_node():
    node = expr.parse("RC(E4,E6,1)")
    assert isinstance(node, expr.Call)
    assert node.name == "RC"
    assert node.args[0] == expr.Atom("E4")
    assert node.args[2] == expr.Num(Rat(1))


def test_parse_sum_with_scalar():
    node = expr.parse("Serre(E10,1) + 5/6*E12")
    assert expr.annotate(node).weight == 12


def test_parse_weight_mismatch():
    with pytest.raises(expr.ExprError, match="weight mismatch 4 vs 6"):
        expr.annotate(expr.parse("E4 + E6"))


def test_parse_unknown_identifier_with_position():
    with pytest.raises(expr.ExprError, match="column 6"):
        expr.parse("E4 + Q9")


def test_parse_syntax_error_position():
    with pytest.raises(expr.ExprError):
        expr.parse("RC(E4,,E6)")
    with pytest.raises(expr.ExprError):
        expr.parse("E4 )")


def test_precedence_weights():
    # ^ binds over *, * over +, left association
    with pytest.raises(expr.ExprError, match="weight mismatch 8 vs 6"):
        expr.annotate(expr.parse("2*E4^2 + E6*E2^0"))
    assert expr.annotate(expr.parse("2*E4^3 + E6^2")).weight == 12


def test_roundtrip_printing():
    corpus = [
        "RC(E4, E6, 1)",
        "Serre(E10,1) + 5/6*E12",
        "D(E2) - 1/12*(E2^2 - E4)",
        "Ppoly(12, E4)",
        "-3456*Delta",
        "Ek(16) - E4*E12",
        "D(E4, 3)",
    ]
    for text in corpus:
        once = expr.to_text(expr.parse(text))
        twice = expr.to_text(expr.parse(once))
        assert once == twice
        assert expr.parse(once) == expr.parse(twice)


# -- static weights and rejection ------------------------------------------------


def test_quasimodular_rejection_in_rc_and_serre():
    with pytest.raises(expr.ExprError, match="modular"):
        expr.annotate(expr.parse("RC(E2, E4, 1)"))
    with pytest.raises(expr.ExprError, match="modular"):
        expr.annotate(expr.parse("RC(D(E4), E6, 1)"))
    with pytest.raises(expr.ExprError, match="modular"):
        expr.annotate(expr.parse("Serre(E2, 1)"))
    with pytest.raises(expr.ExprError, match="modular"):
        expr.annotate(expr.parse("Ppoly(12, E2)"))
    # D(f, 0) keeps modularity
    assert expr.annotate(expr.parse("RC(D(E4, 0), E6, 1)")).weight == 12


def test_ppoly_weight_gap():
    with pytest.raises(expr.ExprError, match="too small"):
        expr.annotate(expr.parse("Ppoly(12, Delta)"))


# -- evaluation -------------------------------------------------------------------


def test_eval_bracket():
    form = expr.evaluate(expr.parse("RC(E4,E6,1)"), 10)
    assert form.series == delta(10).series.scale(-3456)


def test_eval_average():
    form = expr.evaluate(expr.parse("Ppoly(12, E4)"), 10)
    e = eisenstein(4, 10) * eisenstein(8, 10)
    assert form.series == e.series


def test_eval_ramanujan_zero():
    form = expr.evaluate(expr.parse("D(E2) - 1/12*(E2^2 - E4)"), 50)
    assert form.series.is_zero()


def test_eval_ek_and_neg():
    form = expr.evaluate(expr.parse("Ek(4) - E4"), 10)
    assert form.series.is_zero()
    form = expr.evaluate(expr.parse("-(E4) + E4"), 10)
    assert form.series.is_zero()


# -- CLI ---------------------------------------------------------------------------


def test_cli_expand_json(capsys):
    code = main(["expand", "Serre(E10,1)", "--prec", "5", "--json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["prec"] == 5
    assert out["coeffs"][0] == "-5/6"
    assert out["coeffs"][1] == "-24"
    assert out["weight"] == 12


def test_cli_expand_text(capsys):
    code = main(["expand", "E4", "--prec", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "q^1: 240" in out


def test_cli_basis(capsys):
    code = main(["basis", "RC(E4,E6,1)", "--prec", "12", "--json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["weight"] == 12
    coeffs = {(t["a"], t["b"]): t["coeff"] for t in out["terms"]}
    assert coeffs[(3, 0)] == "-2"
    assert coeffs[(0, 2)] == "2"


def test_cli_basis_rejects_e2(capsys):
    code = main(["basis", "E2", "--prec", "12"])
    assert code == 1
    assert "not modular" in capsys.readouterr().err


def test_cli_tau(capsys):
    code = main(["tau", "10"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "-115920"


def test_cli_parse_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["expand", "E4 +", "--prec", "3"])
    assert exc.value.code == 2


def test_cli_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["verify-tau", "--id", "bogus", "--m-from", "1", "--m-to", "1"])
    assert exc.value.code == 2


def test_cli_verify_tau_small(capsys, tmp_path):
    csv_path = tmp_path / "rows.csv"
    code = main(
        [
            "verify-tau",
            "--id",
            "kumar",
            "--m-from",
            "1",
            "--m-to",
            "2",
            "--cutoff",
            "800",
            "--tol",
            "1e-6",
            "--csv",
            str(csv_path),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") == 2
    header = csv_path.read_text().splitlines()[0]
    assert header == "identity_id,m,a,s,cutoff,partial_sum,tail_estimate,rigorous,lhs,rel_err,verdict"


def test_cli_verify_tau_fail_exit(capsys):
    # sigma_3 identity at a hopeless tolerance: rows print FAIL, exit 1
    code = main(
        ["verify-tau", "--id", "herrero", "--m-from", "5", "--m-to", "5", "--cutoff", "300", "--tol", "1e-12"]
    )
    assert code == 1
    assert "FAIL" in capsys.readouterr().out


def test_cli_selftest(capsys):
    code = main(["selftest", "--prec", "60"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") == 9
    assert "FAIL" not in out


def test_cli_lvalues_small_cutoff(capsys):
    code = main(["lvalues", "--cutoff", "3000", "--json"])
    rows = json.loads(capsys.readouterr().out)
    assert code in (0, 1)  # small cutoff may miss the 3-decimal targets
    assert len(rows) == 6
    assert {"a", "s", "numeric", "predicted", "constant", "printed", "verdict"} <= set(rows[0])

