import json
import subprocess
import sys

import pytest

from invcurves.cli import main, parse_field, parse_gallery_ref


def run(*args, stdin=None):
    p = subprocess.run([sys.executable, "-m", "invcurves", *args], input=stdin,
                       capture_output=True, text=True, timeout=300)
    return p.returncode, p.stdout, p.stderr


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_certify_kolmogorov_nodal(capsys):
    code, out, _ = call(capsys, "certify", "gallery:kolmogorov(n=2,b=0.01)", "--curve", "x*y*z")
    doc = json.loads(out)
    assert code == 0
    assert doc["certificate"]["verdict"] == "Certified"
    assert doc["certificate"]["mode"] == "nodal_refined"
    assert doc["run_config"]["input"] == "gallery:kolmogorov(n=2,b=0.01)"


def test_certify_obstructed_exit_code(capsys):
    code, out, _ = call(capsys, "certify", "P=y, Q=x", "--mode", "theorem-d")
    assert code == 10 and json.loads(out)["certificate"]["verdict"] == "Obstructed"


def test_certify_non_isolated_is_inconclusive(capsys):
    code, out, _ = call(capsys, "certify", "P=x*(x+y), Q=x*(x-y+1)")
    assert code == 20 and json.loads(out)["certificate"]["verdict"] == "Inconclusive"


def test_parse_error_reports_byte_offset(capsys):
    code, _, err = call(capsys, "certify", "P=y+, Q=x")
    assert code == 1 and "4" in err


def test_parse_field_offsets():
    with pytest.raises(Exception) as e:
        parse_field("P=x, Q=y*(", exact=True)
    assert "10" in str(e.value)


def test_parse_gallery_ref():
    assert parse_gallery_ref("gallery:kolmogorov(n=3,b=0.5)") == ("kolmogorov", {"n": "3", "b": "0.5"})


def test_unknown_variable_is_input_error(capsys):
    code, _, _ = call(capsys, "certify", "P=w, Q=x")
    assert code == 1


def test_singularities_saddle(capsys):
    code, out, _ = call(capsys, "singularities", "P=x, Q=-y")
    doc = json.loads(out)
    assert code == 0 and doc["census"]["count"] == 3


def test_cofactor_command(capsys):
    code, out, _ = call(capsys, "cofactor", "P=x, Q=-y", "x*y")
    doc = json.loads(out)
    assert code == 0 and doc["invariant"] and doc["cofactor"] == "0"


def test_find_curves_saddle(capsys):
    code, out, _ = call(capsys, "find-curves", "P=x, Q=-y")
    doc = json.loads(out)
    assert code == 0
    assert sorted(c["affine"] for c in doc["lines"]["curves"] if c["affine"]) == ["x", "y"]


def test_gallery_piped_into_certify():
    code, gal, _ = run("gallery", "jouanolou", "--n", "2")
    assert code == 0
    code, out, _ = run("certify", "-", "--mode", "theorem-d", stdin=gal)
    assert code == 0 and json.loads(out)["certificate"]["verdict"] == "Certified"


def test_out_file_and_rerun_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        code, _, _ = run("certify", "gallery:kolmogorov(n=2,b=0.01)", "--curve", "x*y*z", "--out", str(f))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_sample_deterministic_stdout():
    args = ("sample", "--n", "2", "--count", "3", "--checks", "lines,certificate", "--seed", "5")
    r1, r2 = run(*args), run(*args)
    assert r1[0] == 0 and r1[1] == r2[1]


def test_field_from_file(tmp_path, capsys):
    f = tmp_path / "field.txt"
    f.write_text("P=x, Q=-y\n")
    code, out, _ = call(capsys, "singularities", f"@{f}")
    assert code == 0 and json.loads(out)["census"]["count"] == 3


def test_missing_file_is_input_error(capsys):
    code, _, _ = call(capsys, "certify", "@/nonexistent/field.txt")
    assert code == 1
