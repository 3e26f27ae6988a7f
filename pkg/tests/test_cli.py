import io
import json
import subprocess
import sys
from fractions import Fraction
from importlib.resources import files

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dofcount.catalog import maxwell_strength, proca_kg, proca_raw
from dofcount.cli.dsl import emit_json_system, emit_system, parse_system
from dofcount.cli.main import main
from dofcount.cli.report import analyze, emit_report, parse_report
from dofcount.errors import InvalidSystem, ParseError
from dofcount.ring import Polynomial, gaussian
from dofcount.system import DiffSystem, FieldDecl

from randsys import random_system

DATA = files("dofcount") / "data"


def data_path(name):
    return str(DATA / f"{name}.dofsys")


def run(argv):
    out, err = io.BytesIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue().decode(), err.getvalue()


def test_parse_two_term_equation():
    sys = parse_system(b"dimension 2\nfield A0, A1\nequation E: d0*A1 - d1*A0\n")
    assert sys.matrix == ((-Polynomial.var(2, 1), Polynomial.var(2, 0)),)


def test_parse_proca_document():
    sys = parse_system((DATA / "proca_kg.dofsys").read_bytes())
    assert sys.matrix == proca_kg(4, 1).matrix
    assert (sys.n, sys.m) == (5, 4)
    assert sys.parameters == {"m": 1}


def test_parameter_value_is_substituted():
    text = (DATA / "proca_kg.dofsys").read_text().replace("m = 1", "m = 3/2")
    assert parse_system(text).matrix == proca_kg(4, Fraction(3, 2)).matrix


def test_dangling_operator_position():
    with pytest.raises(ParseError) as exc:
        parse_system(b"dimension 2\nfield A0\nequation E: d0*\n")
    assert (exc.value.line, exc.value.column) == (3, 15)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_system("dimension 2\nfield A\nequation E: x*A\n")
    with pytest.raises(ParseError):
        parse_system("dimension 0\nfield A\nequation E: A\n")
    with pytest.raises(InvalidSystem):
        parse_system("dimension 2\nfield A, B\nequation E: A*B\n")
    with pytest.raises(InvalidSystem):
        parse_system("dimension 2\nparameter m\nfield A\nequation E: m*A\n")
    with pytest.raises(InvalidSystem):
        parse_system("dimension 2\nfield A\nequation E: 0*A\n")
    assert parse_system("dimension 2\nfield A\nequation E: 0*A\n", allow_zero_rows=True).n == 1


def test_complex_coefficients_and_comments():
    sys = parse_system("dimension 2  # plane\nfield A\nequation E: (3/2 + 2i)*d0^2*A - 3/2i*d1*A + \\\n  i*A\n")
    p = sys.matrix[0][0]
    assert p.terms[(2, 0)] == gaussian(Fraction(3, 2), 2)
    assert p.terms[(0, 1)] == gaussian(0, Fraction(-3, 2))
    assert p.terms[(0, 0)] == gaussian(0, 1)


def test_variables_and_field_orders():
    sys = parse_system("dimension 2\nvariables t, x\nfield a order 1\nfield b\nequation E: t*a + x^2*b\n")
    assert sys.theta == (1, 0)
    assert sys.equation_orders() == [2]
    assert emit_system(sys).splitlines()[1] == "variables t, x"


def test_json_system_round_trip():
    sys = proca_raw(4, 1)
    again = parse_system(emit_json_system(sys), format="json")
    assert again == sys
    doc = {"dimension": 2, "fields": ["A0", "A1"],
           "equations": [{"name": "E", "expr": "d0*A1 - d1*A0"},
                         {"name": "F", "terms": [{"field": "A0", "coeff": {"re": "1", "im": "2"}, "exponents": [1, 0]}]}]}
    sys = parse_system(json.dumps(doc), format="json")
    assert sys.matrix[1][0] == Polynomial.var(2, 0).scale(gaussian(1, 2))


def test_json_equations_without_names():
    doc = {"dimension": 2, "fields": ["u"], "equations": [{"expr": "d0*u"}, {"expr": "d1*u"}]}
    sys = parse_system(json.dumps(doc), format="json")
    assert list(sys.equation_names) == ["E0", "E1"]
    assert sys.matrix[1][0] == Polynomial.var(2, 1)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_emit_parse_round_trip(seed, complex_coeff):
    sys = random_system(seed)
    if complex_coeff:
        rows = [[p.scale(gaussian(1, -2)) for p in row] for row in sys.matrix]
        sys = DiffSystem(sys.dimension, sys.fields, rows)
    text = emit_system(sys)
    again = parse_system(text)
    assert again == sys
    assert emit_system(again) == text
    assert parse_system(emit_json_system(sys), format="json") == sys


def test_analyze_maxwell_all_methods():
    rep = analyze(parse_system((DATA / "maxwell.dofsys").read_bytes()), methods=("ext", "graded", "brst", "oracle"))
    assert rep["dof"] == 4
    assert rep["methods"] == {"ext": 4, "graded": 4, "brst": 4, "oracle": 4}
    assert rep["qf"] == "6 - 8*z + 2*z^2"
    assert rep["euler_characteristic"] == "(1-z^2)^8 (1-z)^-6 (1-z^3)^-2"
    assert rep["identity_orders"] == [[2, 2]] and rep["symmetry_orders"] == []
    assert rep["oracle"]["N"] == 10 and "/" in rep["oracle"]["estimate"]


def test_analyze_spin2_and_proca():
    assert analyze(parse_system((DATA / "spin2.dofsys").read_bytes()))["dof"] == 10
    rep = analyze(parse_system((DATA / "proca_raw.dofsys").read_bytes()), conjugate=True)
    assert rep["dof"] == 6
    assert rep["qf"] == "4 - z - 4*z^2 + z^3"
    assert any("completion" in n for n in rep["meta"]["notes"])
    assert rep["conjugate_dof"] == 6


def test_report_round_trip_and_text():
    rep = analyze(maxwell_strength())
    assert parse_report(emit_report(rep, "json")) == rep
    text = emit_report(rep, "text").decode()
    assert text.rstrip().endswith("DoF = 4")
    keys = {"dof", "methods", "flags", "equation_orders", "identity_orders", "symmetry_orders", "qf",
            "euler_characteristic", "conjugate_dof", "oracle", "meta"}
    assert set(rep) == keys
    assert rep["meta"]["schema_version"] == 1


def test_cli_analyze_text_and_json():
    code, out, _ = run(["analyze", data_path("maxwell"), "--method", "all", "--text"])
    assert code == 0 and out.rstrip().endswith("DoF = 4")
    code, out, _ = run(["analyze", data_path("maxwell_potential"), "--method", "ext,graded", "--json"])
    rep = json.loads(out)
    assert code == 0 and rep["dof"] == 4 and set(rep["methods"]) == {"ext", "graded"}


def test_cli_exit_codes(tmp_path, monkeypatch):
    bad = tmp_path / "bad.dofsys"
    bad.write_text("dimension 2\nfield A\nequation E: d0*\n")
    assert run(["analyze", str(bad)])[0] == 1
    assert run(["analyze", str(tmp_path / "missing.dofsys")])[0] == 1
    nonlin = tmp_path / "nonlin.dofsys"
    nonlin.write_text("dimension 2\nfield A, B\nequation E: A*B\n")
    assert run(["analyze", str(nonlin)])[0] == 2
    zero = tmp_path / "zero.dofsys"
    zero.write_text("dimension 2\nfield A, B\nequation E: d0*A\nequation Z: 0*B\n")
    assert run(["analyze", str(zero)])[0] == 2
    code, out, _ = run(["analyze", str(zero), "--keep-zero-rows"])
    assert code == 0 and json.loads(out)["dof"] == 1
    symbolic = tmp_path / "sym.dofsys"
    symbolic.write_text("dimension 2\nparameter m\nfield A\nequation E: (d0 - m)*A\n")
    assert run(["analyze", str(symbolic)])[0] == 2
    assert run(["analyze", data_path("spin2"), "--budget-gb", "1"])[0] == 3
    monkeypatch.setenv("DOFCTL_BUDGET_GB", "1")
    assert run(["analyze", data_path("spin2")])[0] == 3
    monkeypatch.delenv("DOFCTL_BUDGET_GB")

    import dofcount.dof as dof

    real = dof.dof_ext

    def flaky(sys):
        n, data = real(sys)
        return n + 1, data

    monkeypatch.setattr(dof, "dof_ext", flaky)
    code, _, err = run(["analyze", data_path("maxwell")])
    assert code == 4 and "disagreement" in err


def test_cli_other_commands(tmp_path):
    code, out, _ = run(["check-involutive", data_path("proca_raw")])
    assert code == 0
    assert json.loads(out) == {"homogeneous": False, "weakly_involutive": False, "doubly_weakly_involutive": False}
    code, out, _ = run(["complete", data_path("proca_raw")])
    assert code == 0
    comp = tmp_path / "comp.dofsys"
    comp.write_text(out)
    code, out, _ = run(["check-involutive", str(comp)])
    assert json.loads(out)["doubly_weakly_involutive"]
    code, out, _ = run(["resolve", data_path("maxwell")])
    res = json.loads(out)
    assert code == 0 and res["qf"] == "6 - 8*z + 2*z^2"
    assert res["v_part"] == [[0] * 6, [1] * 8, [2, 2]]


def test_json_input_file(tmp_path):
    path = tmp_path / "proca.json"
    path.write_text(emit_json_system(proca_kg(4, 1)))
    code, out, _ = run(["analyze", str(path)])
    assert code == 0 and json.loads(out)["dof"] == 6


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dofcount.cli", "analyze", data_path("koszul"), "--text"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.rstrip().endswith("DoF = 0")


def test_field_decl_names_survive():
    sys = DiffSystem(2, [FieldDecl("psi", 0)], [[Polynomial.var(2, 0)]], equation_names=["wave"])
    assert "equation wave: d0*psi" in emit_system(sys)
