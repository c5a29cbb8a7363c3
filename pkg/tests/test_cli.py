import os
import subprocess
import sys
from pathlib import Path

import pytest

from orientifold_td.cli import DocumentError, main, parse_document, parse_terms
from orientifold_td.exterior import format_terms

GOLDEN = Path(__file__).parent / "golden"
DEMO = str(GOLDEN / "demo.td")

# name -> (argv, expected exit code)
CASES = {
    "cohomology_klein": (["cohomology", "klein_bottle"], 0),
    "cohomology_klein_twisted": (["cohomology", "klein_bottle", "--twist", "base"], 0),
    "cohomology_t2_mod2": (["cohomology", "t2", "--twist", "x", "--coeffs", "Z/2"], 0),
    "cohomology_demo_circle": (["cohomology", "circ", "--twist", "e", "--input", DEMO], 0),
    "kr_torus": (["kr", "t2", "--twist", "x"], 0),
    "kr_klein": (["kr", "klein_bottle", "--twist", "base"], 0),
    "kr_circle_degree": (["kr", "s1", "--twist", "theta", "--degree", "3"], 0),
    "tdual_catalog_t2": (["tdual", "catalog:t2_twisted"], 0),
    "tdual_demo_nil": (["tdual", "nil_flux", "--input", DEMO], 0),
    "tdual_partner": (["tdual", "torus_eps", "--partner", "klein_eps", "--input", DEMO], 0),
    "tdual_not_partner": (["tdual", "torus_eps", "--partner", "torus_eps", "--input", DEMO], 1),
    "transform_unit": (["transform", "circle_eps", "unit", "--input", DEMO], 0),
    "transform_mixed": (["transform", "nil", "mixed", "--input", DEMO], 0),
    "transform_flux": (["transform", "t3flux", "--alpha", "10", "--input", DEMO], 0),
    "axioms": (["axioms", "--seed", "1", "--count", "12"], 0),
    "axioms_corrupt": (["axioms", "--seed", "1", "--count", "12", "--corrupt"], 1),
}


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_output(name, capsys):
    argv, expected_code = CASES[name]
    code, out, err = _run(argv, capsys)
    assert code == expected_code, err
    path = GOLDEN / f"{name}.out"
    if os.environ.get("UPDATE_GOLDEN"):
        path.write_text(out)
    assert out == path.read_text()


def test_golden_contents_spot_checks():
    kr = (GOLDEN / "kr_torus.out").read_text().splitlines()
    assert [line for line in kr if line.startswith("KR")] == ["KR^0 = Z + Z/2", "KR^1 = Z^2", "KR^2 = Z", "KR^3 = Z/2"]
    unit = (GOLDEN / "transform_unit.out").read_text()
    assert "side dims H^0..H^3 = 1 2 1 0" in unit and "dual dims H^0..H^3 = 2 1 0 1" in unit


ERRORS = {
    "unknown_kind": ("widget w { }\n", 1, "unknown definition kind"),
    "duplicate": ("complex a { simplices = (0,1) }\ncomplex a { simplices = (0,1) }\n", 2, "'a'"),
    "empty_simplex": ("complex a { simplices = () }\n", 1, "distinct vertices"),
    "bad_twist": ("twist e ON catalog:s2 { 1 }\n", 1, "'e'"),
    "bad_triple": ("triple bad { m = 4; F = dx1^dx2; Fhat = dx3^dx4 }\n", 1, "invalid triple"),
    "bad_form_text": ("triple t { m = 2 }\nform w ON t { degree = 0; top = 2*dz }\n", 2, "'w'"),
    "unclosed": ("complex c {\n  vertices = 1\n", 1, "'c'"),
}


@pytest.mark.parametrize("name", sorted(ERRORS))
def test_parse_errors_name_line_and_exit_code(name, tmp_path, capsys):
    text, line, fragment = ERRORS[name]
    path = tmp_path / f"{name}.td"
    path.write_text(text)
    code, out, err = _run(["cohomology", "point", "--input", str(path)], capsys)
    assert code == 2 and out == ""
    assert f"line {line}" in err and fragment in err
    with pytest.raises(DocumentError):
        parse_document(text)


def test_usage_and_lookup_errors_exit_2(capsys):
    assert main(["nonsense"]) == 2
    assert main(["kr", "t3"]) == 2
    assert "dimension 3 > 2" in capsys.readouterr().err
    assert main(["cohomology", "no_such_complex"]) == 2
    assert main(["tdual", "torus_eps", "--input", "/nonexistent.td"]) == 2


def test_terms_round_trip():
    for text in ("(1+i)*exp(1/2,0)*dx1^dx2", "1/2*exp(1,-1) - 3*dx2", "i*exp(0,1)*dx1"):
        assert format_terms(parse_terms(text, 2)) == text


def test_console_entry_point():
    result = subprocess.run([sys.executable, "-m", "orientifold_td", "kr", "s1", "--twist", "theta"],
                            capture_output=True, text=True, check=False)
    assert result.returncode == 0
    assert result.stdout.splitlines()[0] == "KR^0 = Z"
